#include "roofkit/random.hpp"

#include <cmath>

#include "roofkit/errors.hpp"

namespace roofkit {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_id(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ComplexMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Column-major fill order keeps draws reproducible independent of Eigen internals.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix haar_isometry(Rng& rng, Eigen::Index m, Eigen::Index r) {
  if (r < 1 || m < r) {
    throw Error(ErrorCode::PreconditionFailed, "haar_isometry requires m >= r >= 1");
  }
  const ComplexMatrix g = gaussian_matrix(rng, m, r);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, r);
  const ComplexMatrix& packed = qr.matrixQR();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (Eigen::Index j = 0; j < r; ++j) {
    const Complex d = packed(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

std::vector<double> uniform_simplex_point(Rng& rng, std::size_t dim) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(dim);
  double total = 0.0;
  for (auto& x : p) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace roofkit
