#include "roofkit/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roofkit/errors.hpp"
#include "roofkit/measures.hpp"
#include "roofkit/simplexfn.hpp"

namespace roofkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCorrelationRankTol = 1e-9;
constexpr double kAssistanceMargin = 1e-6;
constexpr double kUniformityTol = 1e-7;

double diagonal_deviation(const ComplexMatrix& m, double target) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) worst = std::max(worst, std::abs(m(i, i) - target));
  return worst;
}

// Maximally coherent state (1/sqrt n) v with the entries of v pushed onto the unit circle.
PureState unimodular_state(const ComplexVector& v) {
  ComplexVector u(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    u(i) = mag > 0.0 ? v(i) / mag : Complex(1.0, 0.0);
  }
  return PureState::normalized(std::move(u));
}

std::optional<std::vector<EnsembleMember>> rank_one_members(
    const std::vector<WeightedCorrelation>& terms) {
  std::vector<EnsembleMember> members;
  members.reserve(terms.size());
  for (const auto& t : terms) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(t.term.matrix());
    const Eigen::Index n = eig.eigenvalues().size();
    if (n > 1 && eig.eigenvalues()(n - 2) > kCorrelationRankTol) return std::nullopt;
    const ComplexVector v = eig.eigenvectors().col(n - 1) * std::sqrt(eig.eigenvalues()(n - 1));
    members.push_back({t.weight, unimodular_state(v)});
  }
  return members;
}

struct Peeler {
  std::size_t max_terms;
  std::vector<WeightedCorrelation> leaves;
  bool overflow = false;

  void run(const ComplexMatrix& c, double weight) {
    if (overflow) return;
    const auto n = c.rows();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(c);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (eig.eigenvalues()(i) > kCorrelationRankTol) ++r;
    }
    if (r * r <= n) {
      if (leaves.size() >= max_terms) {
        overflow = true;
        return;
      }
      leaves.push_back({weight, CorrelationMatrix(c)});
      return;
    }
    ComplexMatrix b(n, r);
    for (Eigen::Index k = 0; k < r; ++k) {
      b.col(k) = eig.eigenvectors().col(n - 1 - k) * std::sqrt(eig.eigenvalues()(n - 1 - k));
    }

    // Real parametrization of Hermitian Y (r x r): diagonal entries, then the
    // real and imaginary parts of each upper off-diagonal entry. Row i of A
    // holds d/dY of (B Y B^dagger)_ii.
    const Eigen::Index params = r * r;
    Eigen::MatrixXd a(n, params);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index col = 0;
      for (Eigen::Index p = 0; p < r; ++p) a(i, col++) = std::norm(b(i, p));
      for (Eigen::Index p = 0; p < r; ++p) {
        for (Eigen::Index q = p + 1; q < r; ++q) {
          const Complex z = b(i, p) * std::conj(b(i, q));
          a(i, col++) = 2.0 * z.real();
          a(i, col++) = -2.0 * z.imag();
        }
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd y_params = svd.matrixV().col(params - 1);

    ComplexMatrix y = ComplexMatrix::Zero(r, r);
    Eigen::Index col = 0;
    for (Eigen::Index p = 0; p < r; ++p) y(p, p) = y_params(col++);
    for (Eigen::Index p = 0; p < r; ++p) {
      for (Eigen::Index q = p + 1; q < r; ++q) {
        const Complex z(y_params(col), y_params(col + 1));
        col += 2;
        y(p, q) = z;
        y(q, p) = std::conj(z);
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ey(y, Eigen::EigenvaluesOnly);
    const double lo = ey.eigenvalues()(0);
    const double hi = ey.eigenvalues()(r - 1);
    // Y has zero-diagonal image and B has full column rank, so Y is indefinite.
    const double t_plus = -1.0 / lo;
    const double t_minus = 1.0 / hi;
    const ComplexMatrix id = ComplexMatrix::Identity(r, r);
    auto endpoint = [&](double t) {
      ComplexMatrix e = b * (id + t * y) * b.adjoint();
      e = 0.5 * (e + e.adjoint());
      for (Eigen::Index i = 0; i < n; ++i) e(i, i) = 1.0;
      return e;
    };
    const double w_plus = t_minus / (t_plus + t_minus);
    run(endpoint(t_plus), weight * w_plus);
    run(endpoint(-t_minus), weight * (1.0 - w_plus));
  }
};

Objective uniformity_objective(std::size_t n) {
  const double u = 1.0 / static_cast<double>(n);
  return [u](std::span<const Complex> amp) {
    double s = 0.0;
    for (const Complex& z : amp) {
      const double d = std::norm(z) - u;
      s += d * d;
    }
    return s;
  };
}

Objective schmidt_uniformity_objective(Dims dims) {
  const double u = 1.0 / static_cast<double>(dims.a);
  return [u, dims](std::span<const Complex> amp) {
    double s = 0.0;
    for (double l : schmidt_probabilities(amp, dims)) s += (l - u) * (l - u);
    return s;
  };
}

Certificate positive(Verdict verdict, Reason reason, Ensemble witness, double residual,
                     std::string detail) {
  return Certificate{verdict, reason, std::move(witness), residual, std::move(detail)};
}

Certificate finalize_numerical(const RoofResult& assisted, double threshold,
                               const DensityMatrix& rho, const Objective& deviation,
                               Verdict success, int sweeps,
                               const std::function<double(const Ensemble&)>& uniformity) {
  if (assisted.value < threshold) {
    return Certificate{Verdict::Inconclusive, Reason::NumericalSearch, std::nullopt,
                       threshold - assisted.value,
                       "assistance search stalled below log2(n) - 1e-6"};
  }
  const RoofResult polished = refine_roof(rho, ensemble_columns(assisted.witness), deviation,
                                          Direction::Min, {sweeps, 1e-10, 0.0});
  const double residual = uniformity(polished.witness);
  if (residual <= kUniformityTol) {
    return positive(success, Reason::NumericalSearch, polished.witness, residual,
                    "assistance reached log2(n); witness polished to uniform members");
  }
  return Certificate{Verdict::Inconclusive, Reason::NumericalSearch, polished.witness, residual,
                     "assistance reached log2(n) but the witness could not be made uniform"};
}

}  // namespace

// ---------------------------------------------------------------------------
// CorrelationMatrix

CorrelationMatrix::CorrelationMatrix(const ComplexMatrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() == 0) {
    throw Error(ErrorCode::InvalidCorrelation, "correlation matrix must be square");
  }
  const double herm = max_abs(mat - mat.adjoint());
  if (!(herm <= tol::kValidation)) {
    throw Error(ErrorCode::InvalidCorrelation, "not Hermitian", herm);
  }
  mat_ = 0.5 * (mat + mat.adjoint());
  const double diag = diagonal_deviation(mat_, 1.0);
  if (!(diag <= tol::kValidation)) {
    throw Error(ErrorCode::InvalidCorrelation, "diagonal entries differ from 1", diag);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(mat_, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues()(0);
  if (!(smallest >= -tol::kValidation)) {
    throw Error(ErrorCode::InvalidCorrelation, "not positive semidefinite", smallest);
  }
}

CorrelationMatrix CorrelationMatrix::from_density(const DensityMatrix& rho) {
  return CorrelationMatrix(static_cast<double>(rho.dim()) * rho.matrix());
}

std::size_t CorrelationMatrix::rank(double tol) const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(mat_, Eigen::EigenvaluesOnly);
  return static_cast<std::size_t>((eig.eigenvalues().array() > tol).count());
}

DensityMatrix CorrelationMatrix::to_density() const {
  return DensityMatrix::validate(mat_ / static_cast<double>(dim()));
}

std::vector<WeightedCorrelation> decompose_correlation_2(const CorrelationMatrix& c) {
  if (c.dim() != 2) throw Error(ErrorCode::InvalidCorrelation, "expected a 2x2 correlation matrix");
  const Complex off = c.matrix()(0, 1);
  const double mag = std::min(std::abs(off), 1.0);
  auto rank_one = [](double alpha) {
    ComplexMatrix r(2, 2);
    const Complex e = std::polar(1.0, alpha);
    r << 1.0, e, std::conj(e), 1.0;
    return CorrelationMatrix(r);
  };
  std::vector<WeightedCorrelation> terms;
  if (mag > 0.0) terms.push_back({mag, rank_one(std::arg(off))});
  const double rest = 0.5 * (1.0 - mag);
  if (rest > 0.0) {
    terms.push_back({rest, rank_one(0.0)});
    terms.push_back({rest, rank_one(kPi)});
  }
  return terms;
}

std::optional<std::vector<WeightedCorrelation>> decompose_correlation(const CorrelationMatrix& c,
                                                                      std::size_t max_terms) {
  Peeler peeler{max_terms, {}, false};
  peeler.run(c.matrix(), 1.0);
  if (peeler.overflow) return std::nullopt;
  return std::move(peeler.leaves);
}

Ensemble fourier_ensemble(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::PreconditionFailed, "fourier_ensemble needs n >= 2");
  const auto dim = static_cast<Eigen::Index>(n);
  std::vector<EnsembleMember> members;
  members.reserve(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index k = 0; k < dim; ++k) {
    ComplexVector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      // Reduce k*j mod n first so the phase argument stays small and exact.
      const double angle = 2.0 * kPi * static_cast<double>((k * j) % dim) / static_cast<double>(n);
      v(j) = std::polar(amp, angle);
    }
    members.push_back({1.0 / static_cast<double>(n), PureState::normalized(std::move(v))});
  }
  return Ensemble(DensityMatrix::maximally_mixed(n), std::move(members));
}

std::array<double, 4> amc3_weights(const DensityMatrix& rho) {
  if (rho.dim() != 3) throw Error(ErrorCode::PreconditionFailed, "expected a 3-dimensional state");
  const ComplexMatrix& m = rho.matrix();
  const double imag = m.imag().cwiseAbs().maxCoeff();
  if (imag > tol::kValidation) {
    throw Error(ErrorCode::PreconditionFailed, "state has complex entries", imag);
  }
  const double diag = diagonal_deviation(m, 1.0 / 3.0);
  if (diag > tol::kValidation) {
    throw Error(ErrorCode::PreconditionFailed, "diagonal entries differ from 1/3", diag);
  }
  const double c12 = 3.0 * m(0, 1).real();
  const double c13 = 3.0 * m(0, 2).real();
  const double c23 = 3.0 * m(1, 2).real();
  return {0.25 * (1.0 + c12 + c13 + c23), 0.25 * (1.0 - c12 - c13 + c23),
          0.25 * (1.0 - c12 + c13 - c23), 0.25 * (1.0 + c12 - c13 - c23)};
}

std::optional<Ensemble> decompose_3dim_real(const DensityMatrix& rho) {
  const std::array<double, 4> p = amc3_weights(rho);
  static constexpr std::array<std::array<double, 3>, 4> kSigns{{
      {1.0, 1.0, 1.0}, {-1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, {1.0, 1.0, -1.0}}};
  std::vector<EnsembleMember> members;
  for (std::size_t k = 0; k < 4; ++k) {
    if (p[k] < -tol::kProbability) return std::nullopt;
    ComplexVector v(3);
    for (Eigen::Index j = 0; j < 3; ++j) v(j) = kSigns[k][static_cast<std::size_t>(j)];
    members.push_back({std::max(p[k], 0.0), PureState::normalized(std::move(v))});
  }
  return Ensemble(rho, std::move(members));
}

BipartiteState generalized_bell(std::size_t n, std::size_t s, std::size_t t) {
  if (n < 1 || s >= n || t >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "generalized_bell needs 0 <= s, t < n");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexVector v = ComplexVector::Zero(dim * dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < dim; ++j) {
    // U_st |j> = omega^{s j} |j + t>, omega = exp(-2 pi i / n); conjugation flips the phase sign.
    const auto sj = static_cast<double>((static_cast<std::size_t>(j) * s) % n);
    const Complex phase = std::polar(amp, 2.0 * kPi * sj / static_cast<double>(n));
    const Eigen::Index target = (j + static_cast<Eigen::Index>(t)) % dim;
    v(j * dim + target) = phase;
  }
  return BipartiteState({n, n}, PureState::normalized(std::move(v)));
}

// ---------------------------------------------------------------------------
// Certification

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::AMC: return "AMC";
    case Verdict::NotAMC: return "NotAMC";
    case Verdict::AME: return "AME";
    case Verdict::NotAME: return "NotAME";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::DiagonalTest: return "DiagonalTest";
    case Reason::ConstructiveDecomposition: return "ConstructiveDecomposition";
    case Reason::NumericalSearch: return "NumericalSearch";
  }
  return "Unknown";
}

double coherence_uniformity(const Ensemble& ensemble) {
  double worst = 0.0;
  for (const auto& m : ensemble.members()) {
    worst = std::max(worst, coherence_vector(m.state).deviation_from_uniform());
  }
  return worst;
}

double entanglement_uniformity(const Ensemble& ensemble, Dims dims) {
  double worst = 0.0;
  const double u = 1.0 / static_cast<double>(std::max(dims.a, dims.b));
  for (const auto& m : ensemble.members()) {
    std::vector<double> lambda = schmidt_probabilities(m.state.view(), dims);
    lambda.resize(std::max(dims.a, dims.b), 0.0);
    for (double l : lambda) worst = std::max(worst, std::abs(l - u));
  }
  return worst;
}

Certificate certify_amc(const DensityMatrix& rho, const Budget& budget) {
  const std::size_t n = rho.dim();
  const double uniform = 1.0 / static_cast<double>(n);
  const double diag = diagonal_deviation(rho.matrix(), uniform);
  if (diag > tol::kValidation) {
    return Certificate{Verdict::NotAMC, Reason::DiagonalTest, std::nullopt, diag,
                       "diagonal entries are not all 1/n"};
  }
  if (n == 1) {
    Ensemble witness(rho, {{1.0, PureState::basis(1, 0)}});
    return positive(Verdict::AMC, Reason::ConstructiveDecomposition, std::move(witness), 0.0,
                    "one-dimensional state");
  }

  const auto dim = static_cast<Eigen::Index>(n);
  if (max_abs(rho.matrix() - ComplexMatrix::Identity(dim, dim) * uniform) <= tol::kValidation) {
    Ensemble witness = fourier_ensemble(n);
    Ensemble retargeted(rho, witness.members());
    const double residual = coherence_uniformity(retargeted);
    return positive(Verdict::AMC, Reason::ConstructiveDecomposition, std::move(retargeted),
                    residual, "Fourier ensemble of the maximally mixed state");
  }

  const CorrelationMatrix corr = CorrelationMatrix::from_density(rho);
  auto from_terms = [&](const std::vector<WeightedCorrelation>& terms,
                        const char* detail) -> std::optional<Certificate> {
    auto members = rank_one_members(terms);
    if (!members) return std::nullopt;
    Ensemble witness(rho, std::move(*members));
    const double residual = coherence_uniformity(witness);
    if (residual > kUniformityTol) return std::nullopt;
    return positive(Verdict::AMC, Reason::ConstructiveDecomposition, std::move(witness), residual,
                    detail);
  };

  if (n == 2) {
    if (auto cert = from_terms(decompose_correlation_2(corr), "2x2 correlation decomposition")) {
      return *cert;
    }
  }
  if (n == 3 && rho.matrix().imag().cwiseAbs().maxCoeff() <= tol::kValidation) {
    if (auto ens = decompose_3dim_real(rho)) {
      const double residual = coherence_uniformity(*ens);
      return positive(Verdict::AMC, Reason::ConstructiveDecomposition, std::move(*ens), residual,
                      "real 3-dimensional sign-pattern decomposition");
    }
  }
  if (auto terms = decompose_correlation(corr)) {
    if (auto cert = from_terms(*terms, "extreme-point decomposition of the correlation matrix")) {
      return *cert;
    }
  }
  if (n <= 3) {
    // Unreachable in exact arithmetic: every 2x2 and 3x3 correlation matrix
    // peels into rank-1 terms.
    return Certificate{Verdict::Inconclusive, Reason::ConstructiveDecomposition, std::nullopt,
                       0.0, "constructive decomposition failed numerically"};
  }

  const RoofResult assisted = coherence(rho, shannon(), Extension::Assistance, budget);
  return finalize_numerical(assisted, std::log2(static_cast<double>(n)) - kAssistanceMargin, rho,
                            uniformity_objective(n), Verdict::AMC, budget.sweeps,
                            [](const Ensemble& e) { return coherence_uniformity(e); });
}

Certificate certify_ame(const BipartiteState& rho, const Budget& budget) {
  const Dims dims = rho.dims();
  if (dims.a != dims.b) {
    throw Error(ErrorCode::DimensionMismatch, "AME certification needs an n x n system");
  }
  const std::size_t n = dims.a;
  const auto dim = static_cast<Eigen::Index>(n);
  const DensityMatrix full = rho.density();
  const double uniform = 1.0 / static_cast<double>(n);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim) * uniform;
  const double marginal = std::max(max_abs(partial_trace_b(full, dims).matrix() - id),
                                   max_abs(partial_trace_a(full, dims).matrix() - id));
  if (marginal > tol::kValidation) {
    return Certificate{Verdict::NotAME, Reason::DiagonalTest, std::nullopt, marginal,
                       "reduced states are not maximally mixed"};
  }

  if (auto mc = SchmidtCorrelated::detect(rho)) {
    Certificate compressed = certify_amc(compress_mc(*mc), budget);
    Certificate lifted{compressed.verdict, compressed.reason, std::nullopt, compressed.residual,
                       compressed.detail + " (Schmidt-correlated reduction)"};
    if (compressed.verdict == Verdict::AMC) lifted.verdict = Verdict::AME;
    if (compressed.verdict == Verdict::NotAMC) lifted.verdict = Verdict::NotAME;
    if (compressed.witness) {
      std::vector<EnsembleMember> members;
      for (const auto& m : compressed.witness->members()) {
        members.push_back({m.weight, embed_pure(m.state)});
      }
      lifted.witness = Ensemble(full, std::move(members));
      lifted.residual = entanglement_uniformity(*lifted.witness, dims);
    }
    return lifted;
  }

  if (max_abs(full.matrix() - ComplexMatrix::Identity(dim * dim, dim * dim) * uniform * uniform) <=
      tol::kValidation) {
    std::vector<EnsembleMember> members;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        members.push_back({uniform * uniform, generalized_bell(n, s, t).pure()});
      }
    }
    Ensemble witness(full, std::move(members));
    const double residual = entanglement_uniformity(witness, dims);
    return positive(Verdict::AME, Reason::ConstructiveDecomposition, std::move(witness), residual,
                    "generalized Bell states average to the maximally mixed state");
  }

  const RoofResult assisted = entanglement(rho, shannon(), Extension::Assistance, budget);
  return finalize_numerical(assisted, std::log2(static_cast<double>(n)) - kAssistanceMargin, full,
                            schmidt_uniformity_objective(dims), Verdict::AME, budget.sweeps,
                            [dims](const Ensemble& e) { return entanglement_uniformity(e, dims); });
}

}  // namespace roofkit
