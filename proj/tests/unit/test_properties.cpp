#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <roofkit/roofkit.hpp>

#include "oracles.hpp"

using namespace roofkit;

namespace {

const std::array<const SimplexFunction*, 3> kBuiltins{&shannon(), &l1(), &concurrence()};

DensityMatrix random_rank_state(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const ComplexMatrix g = gaussian_matrix(rng, n, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::validate(rho);
}

Budget budget(int restarts) {
  Budget b;
  b.restarts = restarts;
  return b;
}

}  // namespace

TEST_CASE("ensemble_from_isometry reconstructs for Haar isometries") {
  Rng rng = make_rng(100);
  std::uniform_int_distribution<int> dim(2, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = dim(rng);
    std::uniform_int_distribution<int> rank_pick(1, static_cast<int>(n));
    const Eigen::Index r = rank_pick(rng);
    const auto rho = random_rank_state(rng, n, r);
    const Eigen::Index rank = static_cast<Eigen::Index>(rho.rank());
    std::uniform_int_distribution<int> extra(0, 4);
    const ComplexMatrix v = haar_isometry(rng, rank + extra(rng), rank);
    const Ensemble e = ensemble_from_isometry(rho, v);
    CHECK(oracle::reconstruction_error(e, rho.matrix()) <= 1e-8);
  }
}

TEST_CASE("Schmidt reassembly reproduces random states up to 4x4") {
  Rng rng = make_rng(101);
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = 1; b <= 4; ++b) {
      for (int trial = 0; trial < 20; ++trial) {
        const PureState psi = haar_pure_state(rng, a * b);
        const auto s = schmidt(psi, {a, b});
        ComplexVector back = ComplexVector::Zero(static_cast<Eigen::Index>(a * b));
        for (std::size_t k = 0; k < s.lambda.size(); ++k) {
          const auto& u = s.basis_a[k].amplitudes();
          const auto& v = s.basis_b[k].amplitudes();
          for (Eigen::Index i = 0; i < u.size(); ++i) {
            back.segment(i * v.size(), v.size()) += std::sqrt(s.lambda[k]) * u(i) * v;
          }
        }
        CHECK((back - psi.amplitudes()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::is_sorted(s.lambda.values().rbegin(), s.lambda.values().rend()));
      }
    }
  }
}

TEST_CASE("permutations with phases permute the coherence vector") {
  Rng rng = make_rng(102);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) u(perm[i], static_cast<Eigen::Index>(i)) = std::polar(1.0, phase(rng));
    const PureState psi = haar_pure_state(rng, n);
    const auto before = coherence_vector(psi);
    const auto after = coherence_vector(PureState::normalized(u * psi.amplitudes()));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(after[static_cast<std::size_t>(perm[i])] - before[i]) <= 1e-14);
    }
  }
}

TEST_CASE("channels preserve trace and positivity") {
  Rng rng = make_rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Eigen::Index ops = 1 + trial % 4;
    // Stacked Kraus operators form an isometry (ops * n) x n.
    const ComplexMatrix v = haar_isometry(rng, ops * n, n);
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index l = 0; l < ops; ++l) kraus.push_back(v.middleRows(l * n, n));
    const KrausChannel channel(std::move(kraus));
    const auto out = apply_channel(ginibre_state(rng, static_cast<std::size_t>(n)), channel);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-12);
    CHECK(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(out.matrix()).eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("built-ins peak at the uniform vector") {
  Rng rng = make_rng(104);
  for (const auto* f : kBuiltins) {
    for (std::size_t dim = 2; dim <= 8; ++dim) {
      const double top = f->max_value(dim);
      const std::vector<double> u(dim, 1.0 / static_cast<double>(dim));
      CHECK(std::abs((*f)(u) - top) <= 1e-12);
      double worst = -1.0;
      for (int i = 0; i < 100000 / 7; ++i) worst = std::max(worst, (*f)(uniform_simplex_point(rng, dim)));
      CHECK(worst <= top + 1e-12);
    }
  }
}

TEST_CASE("Jensen inequality for built-ins") {
  Rng rng = make_rng(105);
  for (const auto* f : kBuiltins) {
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
      const std::size_t k = 2 + static_cast<std::size_t>(trial % 4);
      const auto w = uniform_simplex_point(rng, k);
      std::vector<double> mean(dim, 0.0);
      double avg = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const auto p = uniform_simplex_point(rng, dim);
        avg += w[j] * (*f)(p);
        for (std::size_t i = 0; i < dim; ++i) mean[i] += w[j] * p[i];
      }
      CHECK(avg <= (*f)(mean) + 1e-10);
    }
  }
}

TEST_CASE("sandwich and Jensen bound on random states") {
  Rng rng = make_rng(106);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
    const auto rho = ginibre_state(rng, n);
    const Spectrum spec = rho.spectrum();
    const Ensemble eig = ensemble_from_columns(rho, spec.vectors * spec.values.cwiseSqrt().asDiagonal());
    for (const auto* f : kBuiltins) {
      const auto obj = coherence_objective(*f);
      const double lo = solve_roof({rho, obj, Direction::Min, budget(2)}).value;
      const double hi = solve_roof({rho, obj, Direction::Max, budget(2)}).value;
      const double mid = ensemble_average(eig, obj);
      CHECK(lo <= mid + 1e-12);
      CHECK(mid <= hi + 1e-12);
      CHECK(hi <= (*f)(rho.diagonal()) + 1e-8);
    }
  }
}

TEST_CASE("more restarts never hurt") {
  Rng rng = make_rng(107);
  const auto rho = ginibre_state(rng, 3);
  for (const auto dir : {Direction::Min, Direction::Max}) {
    const auto obj = coherence_objective(l1());
    double previous = dir == Direction::Min ? 1e9 : -1e9;
    for (int r : {1, 2, 4}) {
      const double v = solve_roof({rho, obj, dir, budget(r)}).value;
      if (dir == Direction::Min) {
        CHECK(v <= previous);
      } else {
        CHECK(v >= previous);
      }
      previous = v;
    }
  }
}

TEST_CASE("identical problems give bit-identical values") {
  Rng rng = make_rng(108);
  const auto rho = ginibre_state(rng, 2);
  const auto obj = coherence_objective(shannon());
  Budget b = budget(3);
  b.seed = 77;
  CHECK(solve_roof({rho, obj, Direction::Max, b}).value == solve_roof({rho, obj, Direction::Max, b}).value);
}
