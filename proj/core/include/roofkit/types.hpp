#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace roofkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Numerical tolerances shared by every module.
namespace tol {
inline constexpr double kValidation = 1e-9;   // Hermiticity, trace, PSD, completeness
inline constexpr double kEnsemble = 1e-8;     // mixture reconstruction
inline constexpr double kNorm = 1e-12;        // pure-state normalization
inline constexpr double kRank = 1e-10;        // eigenvalues above this count toward rank
inline constexpr double kDropWeight = 1e-14;  // ensemble members below this weight are dropped
inline constexpr double kProbability = 1e-12; // negative probability entries clamped up to this
}  // namespace tol

/// Largest absolute entry of a complex matrix (0 for an empty matrix).
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace roofkit
