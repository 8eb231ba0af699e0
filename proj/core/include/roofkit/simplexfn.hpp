#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "roofkit/states.hpp"

namespace roofkit {

/// A real symmetric concave function on the probability simplex that vanishes
/// at the vertex (1, 0, ..., 0). Immutable once built.
class SimplexFunction {
 public:
  using EvalFn = std::function<double(std::span<const double>)>;

  /// Only the built-ins and `custom` construct instances.
  SimplexFunction(std::string name, EvalFn eval);

  /// Accepts a user-supplied function after check_membership passes in `dim`
  /// dimensions; throws NotMember otherwise.
  static SimplexFunction custom(std::string name, EvalFn eval, std::size_t dim,
                                int trials = 1000, std::uint64_t seed = 0);

  const std::string& name() const noexcept { return name_; }
  double operator()(std::span<const double> p) const { return eval_(p); }
  double operator()(const ProbabilityVector& p) const { return eval_(p.values()); }

  /// Value at the uniform vector, which is the maximum over the simplex.
  double max_value(std::size_t dim) const;

 private:
  std::string name_;
  EvalFn eval_;
};

/// Shannon entropy in bits.
double f_shannon(std::span<const double> p);
/// sum_{i != j} sqrt(p_i p_j) = (sum_i sqrt p_i)^2 - 1.
double f_l1(std::span<const double> p);
/// sqrt(2 (1 - sum_i p_i^2)).
double f_concurrence(std::span<const double> p);

const SimplexFunction& shannon();
const SimplexFunction& l1();
const SimplexFunction& concurrence();

/// Built-in by CLI name: "shannon", "l1" or "concurrence".
std::optional<SimplexFunction> builtin_function(std::string_view name);

struct MembershipReport {
  double symmetry_residual = 0.0;    // worst |f(p) - f(sigma p)|
  double concavity_violation = 0.0;  // worst t f(p) + (1-t) f(q) - f(t p + (1-t) q)
  double vertex_value = 0.0;         // |f(e_1)|
  double max_value = 0.0;            // f(uniform)
  bool passed = false;
};

/// Spot-checks symmetry, concavity, normalization at e_1 and non-triviality
/// on random points (interior and on random faces). Passes iff every
/// residual is <= 1e-9 and f is not identically zero.
MembershipReport check_membership(const SimplexFunction& f, std::size_t dim, int trials,
                                  std::uint64_t seed);

}  // namespace roofkit
