#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "roofkit/types.hpp"

namespace roofkit {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; derives independent substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Stable 64-bit id for a named substream (FNV-1a of the label).
std::uint64_t stream_id(std::string_view label);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, stream));
}

/// Matrix of i.i.d. standard complex Gaussians (E|z|^2 = 1).
ComplexMatrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed m x r isometry (V^dagger V = I_r), m >= r.
ComplexMatrix haar_isometry(Rng& rng, Eigen::Index m, Eigen::Index r);

/// Uniform point on the probability simplex of the given dimension.
std::vector<double> uniform_simplex_point(Rng& rng, std::size_t dim);

}  // namespace roofkit
