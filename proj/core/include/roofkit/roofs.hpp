#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "roofkit/states.hpp"

namespace roofkit {

enum class Direction { Min, Max };

/// Search budget. `cardinality` 0 selects the default r^2 (capped at 16, never below r).
/// `threads` 0 uses every hardware thread; the result does not depend on it.
struct Budget {
  int restarts = 32;
  int sweeps = 200;
  std::uint64_t seed = 0;
  std::size_t cardinality = 0;
  unsigned threads = 0;
};

/// Objective on unit-norm amplitude vectors. Must be nonnegative and finite.
using Objective = std::function<double(std::span<const Complex>)>;

struct RoofProblem {
  DensityMatrix rho;
  Objective objective;
  Direction direction = Direction::Min;
  Budget budget;
};

/// Best decomposition found. For Max the value is a lower bound on the true
/// maximum (the witness is feasible); for Min an upper bound on the minimum.
/// `bracket`, when set, is an analytic bound on the other side: the true
/// extremum lies in [value, bracket] (Max) or [bracket, value] (Min).
struct RoofResult {
  double value = 0.0;
  Ensemble witness;
  std::optional<double> bracket;
  bool converged = false;
  int iterations = 0;

  /// Value and bracket agree within `tolerance`.
  bool tight(double tolerance = 1e-6) const {
    return bracket.has_value() && std::abs(*bracket - value) <= tolerance;
  }
};

std::size_t default_cardinality(std::size_t rank);

/// Extremizes the ensemble average of the objective over pure-state
/// decompositions of rho. Each restart starts from a Haar-random isometry and
/// runs Givens-rotation sweeps over pairs of ensemble vectors; each pair rotation
/// is chosen by golden-section search on the mixing angle over a grid of relative
/// phases, followed by a phase refinement. Throws BudgetZero, ObjectiveNaN, and
/// PreconditionFailed when the cardinality is below rank(rho).
RoofResult solve_roof(const RoofProblem& problem);

struct LocalSearchOptions {
  int sweeps = 200;
  double angle_tolerance = 1e-7;
  double stop_improvement = 1e-9;
};

/// Local search from a given decomposition: `columns` is n x m with
/// columns * columns^dagger = rho (unnormalized ensemble vectors).
RoofResult refine_roof(const DensityMatrix& rho, const ComplexMatrix& columns,
                       const Objective& objective, Direction direction,
                       const LocalSearchOptions& options = {});

/// Unnormalized ensemble vectors sqrt(p_k) psi_k as columns.
ComplexMatrix ensemble_columns(const Ensemble& ensemble);

/// Ensemble average of the objective.
double ensemble_average(const Ensemble& ensemble, const Objective& objective);

/// Brute-force reference. Rank 1: objective of the state. Rank 2: extremum over a
/// samples x samples grid of 2x2 unitaries (theta in [0, pi/2], phase in [0, 2 pi)).
/// Higher rank: extremum over `samples` Haar-random r^2 x r isometries.
double oracle_roof(const DensityMatrix& rho, const Objective& objective, Direction direction,
                   int samples, std::uint64_t seed);

}  // namespace roofkit
