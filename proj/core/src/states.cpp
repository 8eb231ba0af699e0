#include "roofkit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "roofkit/errors.hpp"

namespace roofkit {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream out;
  out << what << " " << value;
  return out.str();
}

// Eigenvalues of a 2x2 Hermitian matrix, descending.
std::pair<double, double> hermitian2_eigenvalues(double a, double d, Complex b) {
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double radius = std::sqrt(half * half + std::norm(b));
  return {mean + radius, mean - radius};
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbabilityVector

ProbabilityVector::ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw Error(ErrorCode::NotProbability, "empty probability vector");
  double total = 0.0;
  for (double& x : p_) {
    if (!std::isfinite(x) || x < -tol::kProbability) {
      throw Error(ErrorCode::NotProbability, "negative or non-finite entry", x);
    }
    if (x < 0.0) x = 0.0;
    total += x;
  }
  if (std::abs(total - 1.0) > tol::kValidation) {
    throw Error(ErrorCode::NotProbability, "entries do not sum to 1", total - 1.0);
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t dim) {
  return ProbabilityVector(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

double ProbabilityVector::deviation_from_uniform() const {
  const double u = 1.0 / static_cast<double>(p_.size());
  double worst = 0.0;
  for (double x : p_) worst = std::max(worst, std::abs(x - u));
  return worst;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() == 0) throw Error(ErrorCode::NotNormalized, "empty state vector");
  const double residual = std::abs(amp_.norm() - 1.0);
  if (!(residual <= tol::kNorm)) {
    throw Error(ErrorCode::NotNormalized, "state vector is not unit norm", residual);
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NotNormalized, "cannot normalize a zero vector", norm);
  }
  amplitudes /= norm;
  return PureState(std::move(amplitudes), Trusted{});
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(ErrorCode::IndexOutOfRange, "basis index exceeds dimension");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), Trusted{});
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::validate(const ComplexMatrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() == 0) {
    throw Error(ErrorCode::NotSquare, "matrix is " + std::to_string(mat.rows()) + "x" +
                                          std::to_string(mat.cols()));
  }
  const double herm = max_abs(mat - mat.adjoint());
  if (!(herm <= tol::kValidation)) {
    throw Error(ErrorCode::NotHermitian, "max |rho - rho^dagger|", herm);
  }
  ComplexMatrix h = 0.5 * (mat + mat.adjoint());
  const double trace_residual = std::abs(h.trace() - Complex(1.0, 0.0));
  if (!(trace_residual <= tol::kValidation)) {
    throw Error(ErrorCode::NotUnitTrace, describe("trace is", h.trace().real()),
                trace_residual);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
  const RealVector& values = eig.eigenvalues();
  const double smallest = values.minCoeff();
  if (!(smallest >= -tol::kValidation)) {
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue", smallest);
  }
  if (smallest < 0.0) {
    const RealVector clamped = values.cwiseMax(0.0);
    h = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

Spectrum DensityMatrix::spectrum() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(mat_);
  const RealVector& values = eig.eigenvalues();
  const Eigen::Index n = values.size();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values(i) > tol::kRank) ++rank;
  }
  Spectrum s;
  s.values.resize(rank);
  s.vectors.resize(n, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    s.values(k) = values(n - 1 - k);
    s.vectors.col(k) = eig.eigenvectors().col(n - 1 - k);
  }
  return s;
}

ProbabilityVector DensityMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = mat_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return ProbabilityVector(std::move(d));
}

// ---------------------------------------------------------------------------
// BipartiteState

BipartiteState::BipartiteState(Dims dims, PureState state) : dims_(dims), value_(std::move(state)) {
  if (dims_.flat() == 0 || std::get<PureState>(value_).dim() != dims_.flat()) {
    throw Error(ErrorCode::DimensionMismatch, "pure state dimension is not dimA * dimB");
  }
}

BipartiteState::BipartiteState(Dims dims, DensityMatrix state)
    : dims_(dims), value_(std::move(state)) {
  if (dims_.flat() == 0 || std::get<DensityMatrix>(value_).dim() != dims_.flat()) {
    throw Error(ErrorCode::DimensionMismatch, "density matrix dimension is not dimA * dimB");
  }
}

const PureState& BipartiteState::pure() const {
  if (!is_pure()) throw Error(ErrorCode::PreconditionFailed, "bipartite state is mixed");
  return std::get<PureState>(value_);
}

DensityMatrix BipartiteState::density() const {
  if (is_pure()) return DensityMatrix::from_pure(std::get<PureState>(value_));
  return std::get<DensityMatrix>(value_);
}

// ---------------------------------------------------------------------------
// Ensemble

ComplexMatrix mixture_of(std::span<const EnsembleMember> members) {
  if (members.empty()) return {};
  const auto n = static_cast<Eigen::Index>(members.front().state.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& m : members) {
    const ComplexVector& a = m.state.amplitudes();
    sum.noalias() += m.weight * (a * a.adjoint());
  }
  return sum;
}

Ensemble::Ensemble(DensityMatrix target, std::vector<EnsembleMember> members)
    : target_(std::move(target)), members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::NotProbability, "ensemble has no members");
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw Error(ErrorCode::NotProbability, "negative weight", m.weight);
    if (m.state.dim() != target_.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "member dimension differs from target");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > tol::kValidation) {
    throw Error(ErrorCode::NotProbability, "weights do not sum to 1", total - 1.0);
  }
  const double residual = reconstruction_residual();
  if (!(residual <= tol::kEnsemble)) {
    throw Error(ErrorCode::PreconditionFailed, "ensemble does not reconstruct its target",
                residual);
  }
}

ComplexMatrix Ensemble::mixture() const { return mixture_of(members_); }

double Ensemble::reconstruction_residual() const {
  return max_abs(mixture() - target_.matrix());
}

// ---------------------------------------------------------------------------
// Coherence and Schmidt vectors

ProbabilityVector coherence_vector(const PureState& psi) {
  std::vector<double> mu(psi.dim());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = std::norm(psi.view()[i]);
  return ProbabilityVector(std::move(mu));
}

namespace {

using MatrixMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                                 Eigen::RowMajor>>;

void fix_phase(ComplexVector& a, ComplexVector& b) {
  Eigen::Index pivot = 0;
  a.cwiseAbs().maxCoeff(&pivot);
  const Complex z = a(pivot);
  const double mag = std::abs(z);
  if (mag == 0.0) return;
  const Complex phase = z / mag;
  a *= std::conj(phase);
  b *= phase;
}

}  // namespace

void schmidt_probabilities(std::span<const Complex> amplitudes, Dims dims, std::span<double> out) {
  if (amplitudes.size() != dims.flat()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude count is not dimA * dimB");
  }
  const std::size_t k = std::min(dims.a, dims.b);
  if (out.size() < k) throw Error(ErrorCode::DimensionMismatch, "output buffer too small");
  const std::size_t a = dims.a;
  const std::size_t b = dims.b;
  // Gram matrix of the smaller factor: G = M M^dagger (a <= b) or M^T conj(M).
  auto gram = [&](std::size_t i, std::size_t j) {
    Complex g = 0.0;
    if (a <= b) {
      for (std::size_t l = 0; l < b; ++l) g += amplitudes[i * b + l] * std::conj(amplitudes[j * b + l]);
    } else {
      for (std::size_t l = 0; l < a; ++l) g += amplitudes[l * b + i] * std::conj(amplitudes[l * b + j]);
    }
    return g;
  };
  if (k == 1) {
    double total = 0.0;
    for (const Complex& z : amplitudes) total += std::norm(z);
    out[0] = total;
    return;
  }
  if (k == 2) {
    auto [hi, lo] = hermitian2_eigenvalues(gram(0, 0).real(), gram(1, 1).real(), gram(0, 1));
    out[0] = hi;
    out[1] = std::max(lo, 0.0);
    return;
  }
  auto fill = [&](auto& g) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        const Complex v = gram(i, j);
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(v);
      }
    }
  };
  auto emit = [&](const auto& values) {
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = std::max(values(static_cast<Eigen::Index>(k - 1 - i)), 0.0);
    }
  };
  if (k == 3) {
    Eigen::Matrix3cd g;
    fill(g);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(g, Eigen::EigenvaluesOnly);
    emit(eig.eigenvalues());
    return;
  }
  ComplexMatrix g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  fill(g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(g, Eigen::EigenvaluesOnly);
  emit(eig.eigenvalues());
}

std::vector<double> schmidt_probabilities(std::span<const Complex> amplitudes, Dims dims) {
  std::vector<double> out(std::min(dims.a, dims.b));
  schmidt_probabilities(amplitudes, dims, out);
  return out;
}

SchmidtDecomposition schmidt(const PureState& psi, Dims dims) {
  if (psi.dim() != dims.flat()) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension is not dimA * dimB");
  }
  const auto a = static_cast<Eigen::Index>(dims.a);
  const auto b = static_cast<Eigen::Index>(dims.b);
  const ComplexMatrix m = MatrixMap(psi.amplitudes().data(), a, b);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Index k = std::min(a, b);
  std::vector<double> lambda(static_cast<std::size_t>(k));
  std::vector<PureState> basis_a;
  std::vector<PureState> basis_b;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double s = svd.singularValues()(i);
    lambda[static_cast<std::size_t>(i)] = s * s;
    ComplexVector u = svd.matrixU().col(i);
    ComplexVector v = svd.matrixV().col(i).conjugate();
    fix_phase(u, v);
    basis_a.push_back(PureState::normalized(std::move(u)));
    basis_b.push_back(PureState::normalized(std::move(v)));
  }
  return {ProbabilityVector(std::move(lambda)), std::move(basis_a), std::move(basis_b)};
}

SchmidtDecomposition schmidt(const BipartiteState& psi) { return schmidt(psi.pure(), psi.dims()); }

// ---------------------------------------------------------------------------
// Decompositions

Ensemble ensemble_from_columns(const DensityMatrix& rho, const ComplexMatrix& w) {
  if (static_cast<std::size_t>(w.rows()) != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ensemble vectors have the wrong dimension");
  }
  std::vector<EnsembleMember> members;
  members.reserve(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const double p = w.col(k).squaredNorm();
    if (p < tol::kDropWeight) continue;
    members.push_back({p, PureState::normalized(w.col(k))});
  }
  return Ensemble(rho, std::move(members));
}

Ensemble ensemble_from_isometry(const DensityMatrix& rho, const ComplexMatrix& v) {
  const Spectrum spec = rho.spectrum();
  const auto r = static_cast<Eigen::Index>(spec.rank());
  if (v.cols() != r || v.rows() < r) {
    throw Error(ErrorCode::RankMismatch, "isometry is " + std::to_string(v.rows()) + "x" +
                                             std::to_string(v.cols()) + " but rank(rho) is " +
                                             std::to_string(r));
  }
  const double iso = max_abs(v.adjoint() * v - ComplexMatrix::Identity(r, r));
  if (!(iso <= tol::kValidation)) throw Error(ErrorCode::NotIsometry, "max |V^dagger V - I|", iso);
  const ComplexMatrix basis = spec.vectors * spec.values.cwiseSqrt().asDiagonal();
  return ensemble_from_columns(rho, basis * v.transpose());
}

// ---------------------------------------------------------------------------
// Channels

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus) : dim_(0), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw Error(ErrorCode::DimensionMismatch, "channel has no Kraus operators");
  const Eigen::Index n = kraus_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& k : kraus_) {
    if (k.rows() != n || k.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators must all be square of one size");
    }
    sum += k.adjoint() * k;
  }
  const double residual = max_abs(sum - ComplexMatrix::Identity(n, n));
  if (!(residual <= tol::kValidation)) {
    throw Error(ErrorCode::NotTracePreserving, "max |sum K^dagger K - I|", residual);
  }
  dim_ = static_cast<std::size_t>(n);
}

bool KrausChannel::is_incoherent(double tol) const {
  for (const auto& k : kraus_) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      int nonzero = 0;
      for (Eigen::Index i = 0; i < k.rows(); ++i) {
        if (std::abs(k(i, j)) > tol) ++nonzero;
      }
      if (nonzero > 1) return false;
    }
  }
  return true;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  if (rho.dim() != channel.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "channel and state dimensions differ");
  }
  const auto n = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& k : channel.operators()) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix::validate(out);
}

DensityMatrix partial_trace_b(const DensityMatrix& rho, Dims dims) {
  if (rho.dim() != dims.flat()) throw Error(ErrorCode::DimensionMismatch, "dims do not match rho");
  const auto a = static_cast<Eigen::Index>(dims.a);
  const auto b = static_cast<Eigen::Index>(dims.b);
  ComplexMatrix out = ComplexMatrix::Zero(a, a);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index k = 0; k < a; ++k)
      for (Eigen::Index j = 0; j < b; ++j) out(i, k) += rho(i * b + j, k * b + j);
  return DensityMatrix::validate(out);
}

DensityMatrix partial_trace_a(const DensityMatrix& rho, Dims dims) {
  if (rho.dim() != dims.flat()) throw Error(ErrorCode::DimensionMismatch, "dims do not match rho");
  const auto a = static_cast<Eigen::Index>(dims.a);
  const auto b = static_cast<Eigen::Index>(dims.b);
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index l = 0; l < b; ++l)
      for (Eigen::Index i = 0; i < a; ++i) out(j, l) += rho(i * b + j, i * b + l);
  return DensityMatrix::validate(out);
}

// ---------------------------------------------------------------------------
// Random states

DensityMatrix ginibre_state(Rng& rng, std::size_t dim, double eigenvalue_floor) {
  const auto n = static_cast<Eigen::Index>(dim);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const ComplexMatrix g = gaussian_matrix(rng, n, n);
    ComplexMatrix w = g * g.adjoint();
    w /= w.trace().real();
    w = 0.5 * (w + w.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(w, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() >= eigenvalue_floor) return DensityMatrix::validate(w);
  }
  throw Error(ErrorCode::PreconditionFailed,
              "no Ginibre sample met the eigenvalue floor", eigenvalue_floor);
}

PureState haar_pure_state(Rng& rng, std::size_t dim) {
  return PureState::normalized(gaussian_matrix(rng, static_cast<Eigen::Index>(dim), 1).col(0));
}

PureState random_maximally_coherent(Rng& rng, std::size_t dim) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ComplexVector v(static_cast<Eigen::Index>(dim));
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::polar(amp, angle(rng));
  return PureState::normalized(std::move(v));
}

}  // namespace roofkit
