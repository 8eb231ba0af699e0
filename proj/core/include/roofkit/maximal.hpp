#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roofkit/roofs.hpp"
#include "roofkit/states.hpp"

namespace roofkit {

/// Hermitian PSD matrix with unit diagonal.
class CorrelationMatrix {
 public:
  /// Throws InvalidCorrelation naming the failed property.
  explicit CorrelationMatrix(const ComplexMatrix& mat);
  /// n * rho; throws InvalidCorrelation when the diagonal of rho is not uniform.
  static CorrelationMatrix from_density(const DensityMatrix& rho);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t rank(double tol = 1e-9) const;
  /// mat / n.
  DensityMatrix to_density() const;

 private:
  ComplexMatrix mat_;
};

struct WeightedCorrelation {
  double weight;
  CorrelationMatrix term;
};

/// 2 x 2 case with c = C_01 = |c| e^{i phi}:
/// |c| R(phi) + (1-|c|)/2 R(0) + (1-|c|)/2 R(pi), R(a) having off-diagonal e^{ia}.
/// Zero-weight terms are dropped.
std::vector<WeightedCorrelation> decompose_correlation_2(const CorrelationMatrix& c);

/// Splits C into a convex combination of extreme correlation matrices by moving
/// inside the face of C until the rank drops, recursively. Returns nullopt when
/// more than `max_terms` leaves would be produced. Leaves can have rank > 1 only
/// when rank^2 <= n, which never happens for n <= 3 beyond rank 1.
std::optional<std::vector<WeightedCorrelation>> decompose_correlation(const CorrelationMatrix& c,
                                                                      std::size_t max_terms = 64);

/// Members (1/sqrt n) sum_j e^{2 pi i k j / n} |j>, weight 1/n; mixture I/n.
Ensemble fourier_ensemble(std::size_t n);

/// Weights of the four sign-pattern states (1,1,1), (-1,1,1), (1,-1,1), (1,1,-1)
/// (each over sqrt 3) for a real 3 x 3 state with diagonal 1/3, written in terms
/// of the correlation entries c_ij = 3 rho_ij. Throws PreconditionFailed.
std::array<double, 4> amc3_weights(const DensityMatrix& rho);

/// The four-member decomposition above, or nullopt when some weight is below -1e-12.
std::optional<Ensemble> decompose_3dim_real(const DensityMatrix& rho);

/// |phi_st> = (I (x) U_st^*) |phi+>, U_st = h^t g^s. Throws IndexOutOfRange.
BipartiteState generalized_bell(std::size_t n, std::size_t s, std::size_t t);

enum class Verdict { AMC, NotAMC, AME, NotAME, Inconclusive };
enum class Reason { DiagonalTest, ConstructiveDecomposition, NumericalSearch };

std::string_view to_string(Verdict verdict);
std::string_view to_string(Reason reason);

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  Reason reason = Reason::NumericalSearch;
  std::optional<Ensemble> witness;
  /// Worst member deviation from uniform (mu for AMC, lambda for AME), or the
  /// diagonal / marginal deviation for a DiagonalTest verdict.
  double residual = 0.0;
  std::string detail;

  bool positive() const noexcept { return verdict == Verdict::AMC || verdict == Verdict::AME; }
};

/// Worst max_i |mu_i - 1/n| over the members.
double coherence_uniformity(const Ensemble& ensemble);
/// Worst max_i |lambda_i - 1/n| over the members, n = dims.a = dims.b.
double entanglement_uniformity(const Ensemble& ensemble, Dims dims);

/// Decides whether rho is a convex combination of maximally coherent states.
Certificate certify_amc(const DensityMatrix& rho, const Budget& budget = {});

/// Decides whether an n x n state is a convex combination of maximally entangled
/// states. Throws DimensionMismatch for unequal local dimensions.
Certificate certify_ame(const BipartiteState& rho, const Budget& budget = {});

}  // namespace roofkit
