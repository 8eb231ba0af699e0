#include <doctest.h>

#include <cmath>
#include <roofkit/roofkit.hpp>

#include "oracles.hpp"

using namespace roofkit;

namespace {

// 721 x 721 grid oracle values, cross-checked against closed forms below.
constexpr double kMixZeroPlusL1Max = 0.8660254037844386;  // sqrt(3) / 2
constexpr double kMixZeroPlusL1Min = 0.5;

DensityMatrix mix_zero_plus() {
  ComplexMatrix m(2, 2);
  m << 0.75, 0.25, 0.25, 0.25;
  return DensityMatrix::validate(m);
}

Budget small_budget(std::uint64_t seed = 0) {
  Budget b;
  b.restarts = 8;
  b.seed = seed;
  return b;
}

}  // namespace

TEST_CASE("frozen oracle constants agree with closed forms") {
  const ComplexMatrix rho = mix_zero_plus().matrix();
  CHECK(std::abs(oracle::qubit_assist(rho, l1()) - kMixZeroPlusL1Max) <= 1e-15);
  CHECK(std::abs(oracle::qubit_convex_l1(rho) - kMixZeroPlusL1Min) <= 1e-15);
}

TEST_CASE("oracle_roof reproduces the frozen regression values") {
  const auto rho = mix_zero_plus();
  const auto obj = coherence_objective(l1());
  CHECK(std::abs(oracle_roof(rho, obj, Direction::Max, 721, 0) - kMixZeroPlusL1Max) <= 1e-9);
  CHECK(std::abs(oracle_roof(rho, obj, Direction::Min, 721, 0) - kMixZeroPlusL1Min) <= 1e-9);
}

TEST_CASE("oracle_roof on the maximally mixed qubit") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  const auto obj = coherence_objective(shannon());
  CHECK(std::abs(oracle_roof(rho, obj, Direction::Max, 721, 0) - 1.0) <= 1e-6);
  CHECK(std::abs(oracle_roof(rho, obj, Direction::Min, 721, 0)) <= 1e-9);
}

TEST_CASE("oracle_roof on higher rank samples isometries") {
  const auto rho = DensityMatrix::maximally_mixed(3);
  const auto obj = coherence_objective(shannon());
  const double hi = oracle_roof(rho, obj, Direction::Max, 200, 1);
  const double lo = oracle_roof(rho, obj, Direction::Min, 200, 1);
  CHECK(hi <= std::log2(3.0) + 1e-12);
  CHECK(lo >= 0.0);
  CHECK(lo < hi);
}

TEST_CASE("solve_roof matches the frozen oracle values") {
  const auto rho = mix_zero_plus();
  const auto obj = coherence_objective(l1());
  CHECK(std::abs(solve_roof({rho, obj, Direction::Max, small_budget()}).value - kMixZeroPlusL1Max) <= 1e-6);
  CHECK(std::abs(solve_roof({rho, obj, Direction::Min, small_budget()}).value - kMixZeroPlusL1Min) <= 1e-6);
}

TEST_CASE("diagonal states have zero convex roof with an incoherent witness") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 0.5, 0.3, 0.2;
  const auto rho = DensityMatrix::validate(d);
  for (const auto* f : {&shannon(), &l1(), &concurrence()}) {
    const auto r = solve_roof({rho, coherence_objective(*f), Direction::Min, small_budget()});
    CHECK(r.value <= 1e-6);
    CHECK(oracle::reconstruction_error(r.witness, d) <= 1e-8);
  }
}

TEST_CASE("pure states have a unique decomposition") {
  Rng rng = make_rng(5);
  const PureState psi = haar_pure_state(rng, 3);
  const auto rho = DensityMatrix::from_pure(psi);
  for (const auto* f : {&shannon(), &l1(), &concurrence()}) {
    const double expected = c_pure(psi, *f);
    for (const Direction dir : {Direction::Min, Direction::Max}) {
      const auto r = solve_roof({rho, coherence_objective(*f), dir, small_budget()});
      CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
      CHECK(r.converged);
    }
  }
}

TEST_CASE("maximally mixed qubit with f_l1 reaches the universal bound") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  const auto r = solve_roof({rho, coherence_objective(l1()), Direction::Max, small_budget()});
  CHECK(std::abs(r.value - 1.0) <= 1e-9);
  // Lower witness meets the upper bound: every member is maximally coherent.
  CHECK(oracle::mu_uniformity(r.witness) <= 1e-4);
  CHECK(oracle::reconstruction_error(r.witness, rho.matrix()) <= 1e-8);
}

TEST_CASE("result invariants: reconstruction and value consistency") {
  Rng rng = make_rng(21);
  const auto rho = ginibre_state(rng, 3);
  const auto obj = coherence_objective(shannon());
  for (const Direction dir : {Direction::Min, Direction::Max}) {
    const auto r = solve_roof({rho, obj, dir, small_budget()});
    CHECK(r.witness.reconstruction_residual() <= 1e-8);
    CHECK(std::abs(ensemble_average(r.witness, obj) - r.value) <= 1e-10);
    CHECK(r.iterations >= 1);
  }
}

TEST_CASE("solve_roof errors") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  const auto obj = coherence_objective(l1());
  Budget zero;
  zero.restarts = 0;
  CHECK_THROWS_AS(solve_roof({rho, obj, Direction::Max, zero}), Error);
  try {
    solve_roof({rho, obj, Direction::Max, zero});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetZero);
  }
  Budget no_sweeps;
  no_sweeps.sweeps = 0;
  try {
    solve_roof({rho, obj, Direction::Max, no_sweeps});
    FAIL("expected BudgetZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetZero);
  }

  Budget narrow;
  narrow.cardinality = 1;
  try {
    solve_roof({rho, obj, Direction::Max, narrow});
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionFailed);
  }

  const Objective nan_obj = [](std::span<const Complex>) { return std::nan(""); };
  try {
    solve_roof({rho, nan_obj, Direction::Min, small_budget()});
    FAIL("expected ObjectiveNaN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ObjectiveNaN);
  }
}

TEST_CASE("default cardinality") {
  CHECK(default_cardinality(1) == 1);
  CHECK(default_cardinality(2) == 4);
  CHECK(default_cardinality(3) == 9);
  CHECK(default_cardinality(4) == 16);
  CHECK(default_cardinality(5) == 16);
  CHECK(default_cardinality(20) == 20);
}

TEST_CASE("explicit cardinality is honoured") {
  Rng rng = make_rng(8);
  const auto rho = ginibre_state(rng, 2);
  Budget b = small_budget();
  b.cardinality = 2;
  const auto r = solve_roof({rho, coherence_objective(l1()), Direction::Max, b});
  CHECK(r.witness.size() <= 2);
  CHECK(std::abs(r.value - oracle::qubit_assist(rho.matrix(), l1())) <= 1e-6);
}

TEST_CASE("determinism across runs and thread counts") {
  Rng rng = make_rng(9);
  const auto rho = ginibre_state(rng, 3);
  const auto obj = coherence_objective(l1());
  Budget one = small_budget(42);
  one.threads = 1;
  Budget many = one;
  many.threads = 3;
  const double a = solve_roof({rho, obj, Direction::Min, one}).value;
  const double b = solve_roof({rho, obj, Direction::Min, one}).value;
  const double c = solve_roof({rho, obj, Direction::Min, many}).value;
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("refine_roof polishes a given decomposition") {
  const auto rho = mix_zero_plus();
  const Spectrum spec = rho.spectrum();
  const ComplexMatrix eig = spec.vectors * spec.values.cwiseSqrt().asDiagonal();
  const auto obj = coherence_objective(l1());
  const auto r = refine_roof(rho, eig, obj, Direction::Max);
  CHECK(r.value >= ensemble_average(ensemble_from_columns(rho, eig), obj) - 1e-12);
  CHECK(r.witness.reconstruction_residual() <= 1e-8);

  try {
    refine_roof(rho, ComplexMatrix::Identity(2, 2), obj, Direction::Max);
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionFailed);
  }
}
