#pragma once

// Closed forms and independent checks used only by the tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <roofkit/roofkit.hpp>

namespace oracle {

using roofkit::Complex;
using roofkit::ComplexMatrix;

inline double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Qubit convex roofs: l1 and concurrence both give 2|rho_01|,
// Shannon gives h((1 + sqrt(1 - 4|rho_01|^2)) / 2).
inline double qubit_convex_l1(const ComplexMatrix& rho) { return 2.0 * std::abs(rho(0, 1)); }

inline double qubit_convex_shannon(const ComplexMatrix& rho) {
  const double c = 2.0 * std::abs(rho(0, 1));
  return binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

// Qubit assistance: every qubit attains f(diag rho).
inline double qubit_assist(const ComplexMatrix& rho, const roofkit::SimplexFunction& f) {
  const std::vector<double> d{rho(0, 0).real(), rho(1, 1).real()};
  return f(d);
}

// Square roots of the eigenvalues of rho (sy x sy) rho^* (sy x sy), descending.
inline std::vector<double> wootters_roots(const ComplexMatrix& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd r = rho;
  const Eigen::Matrix4cd tilde = yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> eig(r * tilde, false);
  std::vector<double> s;
  for (int i = 0; i < 4; ++i) s.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(i).real())));
  std::sort(s.rbegin(), s.rend());
  return s;
}

// Two-qubit concurrence (convex roof of f_concurrence on Schmidt vectors).
inline double wootters_concurrence(const ComplexMatrix& rho) {
  const auto s = wootters_roots(rho);
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

// Two-qubit concurrence of assistance: trace norm of sqrt(rho) sqrt(rho~).
inline double concurrence_of_assistance(const ComplexMatrix& rho) {
  const auto s = wootters_roots(rho);
  return s[0] + s[1] + s[2] + s[3];
}

// Recomputed from scratch rather than through Ensemble.
inline double reconstruction_error(const roofkit::Ensemble& e, const ComplexMatrix& target) {
  ComplexMatrix sum = ComplexMatrix::Zero(target.rows(), target.cols());
  for (const auto& m : e.members()) {
    const auto& a = m.state.amplitudes();
    sum += m.weight * a * a.adjoint();
  }
  return (sum - target).cwiseAbs().maxCoeff();
}

inline double mu_uniformity(const roofkit::Ensemble& e) {
  double worst = 0.0;
  for (const auto& m : e.members()) {
    const auto& a = m.state.amplitudes();
    const double n = static_cast<double>(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(std::norm(a(i)) - 1.0 / n));
  }
  return worst;
}

// Reduced state of a pure n x n vector; maximally entangled iff it equals I/n.
inline double lambda_uniformity(const roofkit::Ensemble& e, std::size_t n) {
  double worst = 0.0;
  const auto k = static_cast<Eigen::Index>(n);
  for (const auto& m : e.members()) {
    const ComplexMatrix psi = m.state.amplitudes().reshaped<Eigen::RowMajor>(k, k);
    const ComplexMatrix red = psi * psi.adjoint();
    const ComplexMatrix dev = red - ComplexMatrix::Identity(k, k) / static_cast<double>(n);
    worst = std::max(worst, dev.cwiseAbs().maxCoeff());
  }
  return worst;
}

inline ComplexMatrix qubit(double a, Complex c) {
  ComplexMatrix m(2, 2);
  m << a, c, std::conj(c), 1.0 - a;
  return m;
}

}  // namespace oracle
