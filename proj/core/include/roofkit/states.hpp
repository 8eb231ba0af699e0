#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "roofkit/random.hpp"
#include "roofkit/types.hpp"

namespace roofkit {

/// Point of the probability simplex. Entries in [-1e-12, 0) are clamped to 0.
class ProbabilityVector {
 public:
  /// Throws NotProbability when an entry is too negative or the sum is off by more than 1e-9.
  explicit ProbabilityVector(std::vector<double> p);

  static ProbabilityVector uniform(std::size_t dim);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }

  /// Largest |p_i - 1/n|.
  double deviation_from_uniform() const;

 private:
  std::vector<double> p_;
};

/// Unit-norm state vector.
class PureState {
 public:
  /// Throws NotNormalized unless | ||amp|| - 1 | <= 1e-12.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales to unit norm; throws NotNormalized for a (numerically) zero vector.
  static PureState normalized(ComplexVector amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amp_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amp_; }
  std::span<const Complex> view() const noexcept { return {amp_.data(), dim()}; }
  ComplexMatrix projector() const { return amp_ * amp_.adjoint(); }

 private:
  struct Trusted {};
  PureState(ComplexVector amplitudes, Trusted) : amp_(std::move(amplitudes)) {}

  ComplexVector amp_;
};

/// Eigendecomposition of a density matrix restricted to its support.
struct Spectrum {
  RealVector values;      // descending, all > 1e-10
  ComplexMatrix vectors;  // columns match values
  std::size_t rank() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Validates the three invariants at 1e-9 and clamps slightly negative
  /// eigenvalues to zero. Throws NotSquare, NotHermitian, NotUnitTrace or NotPSD.
  static DensityMatrix validate(const ComplexMatrix& mat);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }

  Spectrum spectrum() const;
  std::size_t rank() const { return spectrum().rank(); }
  /// Diagonal in the reference basis as a probability vector.
  ProbabilityVector diagonal() const;

 private:
  explicit DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {}

  ComplexMatrix mat_;
};

/// Bipartite dimensions; basis |i>_A |j>_B sits at flat index i * b + j.
struct Dims {
  std::size_t a = 0;
  std::size_t b = 0;

  std::size_t flat() const noexcept { return a * b; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

class BipartiteState {
 public:
  /// Throws DimensionMismatch when the flat dimension is not a * b.
  BipartiteState(Dims dims, PureState state);
  BipartiteState(Dims dims, DensityMatrix state);

  const Dims& dims() const noexcept { return dims_; }
  bool is_pure() const noexcept { return std::holds_alternative<PureState>(value_); }
  /// Throws PreconditionFailed when the state is mixed.
  const PureState& pure() const;
  /// The density matrix (the projector for a pure state).
  DensityMatrix density() const;

 private:
  Dims dims_;
  std::variant<PureState, DensityMatrix> value_;
};

struct EnsembleMember {
  double weight = 0.0;
  PureState state;
};

/// Weighted pure states whose mixture reconstructs a target density matrix.
class Ensemble {
 public:
  /// Throws NotProbability on bad weights and PreconditionFailed when the
  /// mixture misses the target by more than 1e-8.
  Ensemble(DensityMatrix target, std::vector<EnsembleMember> members);

  const DensityMatrix& target() const noexcept { return target_; }
  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  ComplexMatrix mixture() const;
  double reconstruction_residual() const;

 private:
  DensityMatrix target_;
  std::vector<EnsembleMember> members_;
};

ComplexMatrix mixture_of(std::span<const EnsembleMember> members);

/// Squared moduli of the amplitudes in the reference basis.
ProbabilityVector coherence_vector(const PureState& psi);

struct SchmidtDecomposition {
  ProbabilityVector lambda;           // squared coefficients, descending
  std::vector<PureState> basis_a;
  std::vector<PureState> basis_b;
};

/// Schmidt form of a bipartite pure state. Each basis vector has its
/// largest-magnitude amplitude made real positive; the B vectors absorb the
/// compensating phase so the reassembled state equals the input.
SchmidtDecomposition schmidt(const PureState& psi, Dims dims);
SchmidtDecomposition schmidt(const BipartiteState& psi);

/// Squared Schmidt coefficients only (descending), without basis vectors.
std::vector<double> schmidt_probabilities(std::span<const Complex> amplitudes, Dims dims);
/// Allocation-free variant; `out` needs min(dimA, dimB) entries.
void schmidt_probabilities(std::span<const Complex> amplitudes, Dims dims, std::span<double> out);

/// Ensemble for the decomposition labelled by isometry V (m x r), r = rank(rho):
/// w_k = sum_j V_kj sqrt(lambda_j) e_j. Throws NotIsometry or RankMismatch.
Ensemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& v);

/// Ensemble whose members are the normalized columns of W with W W^dagger = rho.
Ensemble ensemble_from_columns(const DensityMatrix& rho, const ComplexMatrix& w);

/// CPTP map given by Kraus operators.
class KrausChannel {
 public:
  /// Throws DimensionMismatch or NotTracePreserving (sum K^dagger K != I at 1e-9).
  explicit KrausChannel(std::vector<ComplexMatrix> kraus);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<ComplexMatrix>& operators() const noexcept { return kraus_; }

  /// True when every Kraus operator maps diagonal states to diagonal states
  /// (at most one nonzero entry per column).
  bool is_incoherent(double tol = 1e-12) const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> kraus_;
};

/// sum_l K_l rho K_l^dagger; throws DimensionMismatch.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

/// Reduced state on A (traces out the second factor).
DensityMatrix partial_trace_b(const DensityMatrix& rho, Dims dims);
/// Reduced state on B.
DensityMatrix partial_trace_a(const DensityMatrix& rho, Dims dims);

// Random states.

/// G G^dagger / tr(G G^dagger) for complex Gaussian G; resampled until the
/// smallest eigenvalue is at least `eigenvalue_floor`.
DensityMatrix ginibre_state(Rng& rng, std::size_t dim, double eigenvalue_floor = 1e-3);
/// Normalized complex Gaussian vector.
PureState haar_pure_state(Rng& rng, std::size_t dim);
/// (1/sqrt(n)) sum_j e^{i theta_j} |j> with uniform random phases.
PureState random_maximally_coherent(Rng& rng, std::size_t dim);

}  // namespace roofkit
