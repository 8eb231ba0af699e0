#include "roofkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "roofkit/errors.hpp"

namespace roofkit {

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::Coherence ? "coherence" : "entanglement";
}

std::string_view to_string(Extension extension) {
  switch (extension) {
    case Extension::PureOnly: return "pure";
    case Extension::ConvexRoof: return "convex";
    case Extension::Assistance: return "assist";
  }
  return "unknown";
}

namespace {

void pad_to(std::vector<double>& lambda, Dims dims) {
  lambda.resize(std::max(dims.a, dims.b), 0.0);
}

std::vector<double> spectrum_of(const DensityMatrix& rho, std::size_t length) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> values(length, 0.0);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    values[static_cast<std::size_t>(i)] = std::max(eig.eigenvalues()(i), 0.0);
  }
  return values;
}

RoofResult pure_result(const DensityMatrix& rho, const Objective& objective) {
  const Spectrum spec = rho.spectrum();
  if (spec.rank() != 1) {
    throw Error(ErrorCode::PreconditionFailed,
                "pure extension needs a rank-1 state, got rank " + std::to_string(spec.rank()));
  }
  Ensemble witness(rho, {{1.0, PureState::normalized(spec.vectors.col(0))}});
  const double value = ensemble_average(witness, objective);
  return RoofResult{value, std::move(witness), std::nullopt, true, 0};
}

}  // namespace

double c_pure(const PureState& psi, const SimplexFunction& f) { return f(coherence_vector(psi)); }

double e_pure(const PureState& psi, Dims dims, const SimplexFunction& f) {
  std::vector<double> lambda = schmidt_probabilities(psi.view(), dims);
  pad_to(lambda, dims);
  return f(lambda);
}

double e_pure(const BipartiteState& psi, const SimplexFunction& f) {
  return e_pure(psi.pure(), psi.dims(), f);
}

Objective coherence_objective(const SimplexFunction& f) {
  return [f](std::span<const Complex> amp) {
    thread_local std::vector<double> mu;
    mu.resize(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) mu[i] = std::norm(amp[i]);
    return f(mu);
  };
}

Objective entanglement_objective(const SimplexFunction& f, Dims dims) {
  return [f, dims](std::span<const Complex> amp) {
    thread_local std::vector<double> lambda;
    lambda.assign(std::max(dims.a, dims.b), 0.0);
    schmidt_probabilities(amp, dims, lambda);
    return f(lambda);
  };
}

double coherence_assistance_bound(const DensityMatrix& rho, const SimplexFunction& f) {
  return f(rho.diagonal());
}

double entanglement_assistance_bound(const BipartiteState& rho, const SimplexFunction& f) {
  const DensityMatrix full = rho.density();
  const Dims dims = rho.dims();
  const std::size_t length = std::max(dims.a, dims.b);
  const double bound_a = f(spectrum_of(partial_trace_b(full, dims), length));
  const double bound_b = f(spectrum_of(partial_trace_a(full, dims), length));
  return std::min(bound_a, bound_b);
}

RoofResult coherence(const DensityMatrix& rho, const SimplexFunction& f, Extension extension,
                     const Budget& budget) {
  const Objective objective = coherence_objective(f);
  if (extension == Extension::PureOnly) return pure_result(rho, objective);
  const Direction direction =
      extension == Extension::Assistance ? Direction::Max : Direction::Min;
  RoofResult result = solve_roof({rho, objective, direction, budget});
  result.bracket = extension == Extension::Assistance ? coherence_assistance_bound(rho, f) : 0.0;
  return result;
}

RoofResult entanglement(const BipartiteState& rho, const SimplexFunction& f, Extension extension,
                        const Budget& budget) {
  const Objective objective = entanglement_objective(f, rho.dims());
  const DensityMatrix full = rho.density();
  if (extension == Extension::PureOnly) return pure_result(full, objective);
  const Direction direction =
      extension == Extension::Assistance ? Direction::Max : Direction::Min;
  RoofResult result = solve_roof({full, objective, direction, budget});
  if (extension == Extension::Assistance) result.bracket = entanglement_assistance_bound(rho, f);
  return result;
}

// ---------------------------------------------------------------------------
// MeasureSpec

MeasureSpec::MeasureSpec(SimplexFunction f, Flavor flavor, Extension extension, std::size_t dim)
    : f_(std::move(f)), flavor_(flavor), extension_(extension) {
  const MembershipReport report = check_membership(f_, dim, 1000, 0);
  if (!report.passed) {
    throw Error(ErrorCode::NotMember, "'" + f_.name() + "' failed the membership check");
  }
}

RoofResult MeasureSpec::evaluate(const BipartiteState& state, const Budget& budget) const {
  if (flavor_ == Flavor::Entanglement) return entanglement(state, f_, extension_, budget);
  return coherence(state.density(), f_, extension_, budget);
}

RoofResult MeasureSpec::evaluate(const DensityMatrix& state, const Budget& budget) const {
  if (flavor_ == Flavor::Entanglement) {
    throw Error(ErrorCode::PreconditionFailed, "entanglement needs bipartite dimensions");
  }
  return coherence(state, f_, extension_, budget);
}

// ---------------------------------------------------------------------------
// Schmidt-correlated states

std::optional<SchmidtCorrelated> SchmidtCorrelated::detect(const BipartiteState& state,
                                                           double tol) {
  const Dims dims = state.dims();
  if (dims.a != dims.b) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(dims.a);
  const DensityMatrix full = state.density();
  ComplexMatrix coeff(n, n);
  for (Eigen::Index r = 0; r < n * n; ++r) {
    for (Eigen::Index c = 0; c < n * n; ++c) {
      const bool diagonal_pair = (r % (n + 1) == 0) && (c % (n + 1) == 0);
      if (diagonal_pair) {
        coeff(r / (n + 1), c / (n + 1)) = full(r, c);
      } else if (std::abs(full(r, c)) >= tol) {
        return std::nullopt;
      }
    }
  }
  return SchmidtCorrelated(DensityMatrix::validate(coeff));
}

BipartiteState SchmidtCorrelated::state() const {
  const auto n = static_cast<Eigen::Index>(dim());
  ComplexMatrix full = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) full(i * (n + 1), j * (n + 1)) = coeff_(i, j);
  return BipartiteState({dim(), dim()}, DensityMatrix::validate(full));
}

DensityMatrix compress_mc(const SchmidtCorrelated& rho_mc) { return rho_mc.coeff(); }

SchmidtCorrelated embed_mc(const DensityMatrix& rho) { return SchmidtCorrelated(rho); }

PureState embed_pure(const PureState& psi) {
  const auto n = static_cast<Eigen::Index>(psi.dim());
  ComplexVector v = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v(i * (n + 1)) = psi.amplitudes()(i);
  return PureState::normalized(std::move(v));
}

}  // namespace roofkit
