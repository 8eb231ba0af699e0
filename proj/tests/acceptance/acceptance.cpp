// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <roofkit/roofkit.hpp>

#include "oracles.hpp"

using namespace roofkit;

namespace {

const std::array<const SimplexFunction*, 3> kBuiltins{&shannon(), &l1(), &concurrence()};
constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every assistance value seen anywhere in the run, with its analytic bracket.
struct BracketLog {
  int checked = 0;
  double worst_excess = -1e300;
  std::string worst_label;

  void record(const RoofResult& r, const std::string& label) {
    if (!r.bracket) return;
    ++checked;
    const double excess = r.value - *r.bracket;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_label = label;
    }
  }
};

BracketLog g_brackets;

Budget budget(int restarts, const std::string& stream) {
  Budget b;
  b.restarts = restarts;
  b.seed = mix_seed(kSeed, stream_id(stream));
  return b;
}

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

Outcome criterion_fourier() {
  double worst_rec = 0.0;
  double worst_mu = 0.0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const Ensemble e = fourier_ensemble(n);
    const ComplexMatrix target = ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) /
                                 static_cast<double>(n);
    worst_rec = std::max(worst_rec, oracle::reconstruction_error(e, target));
    worst_mu = std::max(worst_mu, oracle::mu_uniformity(e));
  }
  return {worst_rec <= 1e-12 && worst_mu <= 1e-12, fmt("residual %.2e, mu dev %.2e", worst_rec, worst_mu)};
}

Outcome criterion_saturation() {
  Outcome out;
  double worst = 0.0;
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto rho = DensityMatrix::maximally_mixed(n);
    for (const auto* f : kBuiltins) {
      const auto r = coherence(rho, *f, Extension::Assistance, budget(8, "saturation"));
      g_brackets.record(r, "saturation " + f->name());
      const double target = (*f)(uniform(n));
      worst = std::max(worst, target - r.value);
      if (r.value < target - 1e-6 || !r.tight()) out.pass = false;
    }
  }
  out.detail = fmt("worst shortfall %.2e", worst);
  return out;
}

Outcome criterion_non_monotone() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix k2 = ComplexMatrix::Zero(2, 2);
  k2(0, 1) = k2(1, 0) = s;
  const KrausChannel flip({ComplexMatrix::Identity(2, 2) * s, k2});
  const auto zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  const auto image = apply_channel(zero, flip);
  Outcome out;
  double worst = 0.0;
  for (const auto* f : kBuiltins) {
    const auto before = coherence(zero, *f, Extension::Assistance, budget(4, "non-monotone"));
    const auto after = coherence(image, *f, Extension::Assistance, budget(4, "non-monotone"));
    g_brackets.record(before, "non-monotone");
    g_brackets.record(after, "non-monotone");
    const double target = (*f)(uniform(2));
    worst = std::max(worst, target - after.value);
    if (before.value != 0.0 || after.value < target - 1e-6) out.pass = false;
  }
  out.detail = fmt("worst shortfall %.2e", worst);
  return out;
}

Outcome criterion_strict_gap() {
  Outcome out;
  Rng rng = make_rng(kSeed, stream_id("strict-gap"));
  double smallest = 1e300;
  for (int k = 0; k < 50; ++k) {
    const auto rho = ginibre_state(rng, 2);
    for (const auto* f : kBuiltins) {
      const auto a = coherence(rho, *f, Extension::Assistance, budget(8, "strict-gap-a"));
      const auto c = coherence(rho, *f, Extension::ConvexRoof, budget(8, "strict-gap-c"));
      g_brackets.record(a, "strict gap");
      smallest = std::min(smallest, a.value - c.value);
    }
  }
  const auto half = DensityMatrix::maximally_mixed(2);
  const double a = coherence(half, l1(), Extension::Assistance, budget(8, "strict-gap")).value;
  const double c = coherence(half, l1(), Extension::ConvexRoof, budget(8, "strict-gap")).value;
  const double analytic = std::abs((a - c) - 1.0);
  out.pass = smallest > 1e-3 && analytic <= 1e-6;
  out.detail = fmt("min gap %.4f, I2/2 l1 gap off by %.2e", smallest, analytic);
  return out;
}

Outcome criterion_entanglement_gap() {
  Rng rng = make_rng(kSeed, stream_id("entanglement-gap"));
  double smallest = 1e300;
  for (int k = 0; k < 25; ++k) {
    const BipartiteState rho(Dims{2, 2}, ginibre_state(rng, 4));
    const auto a = entanglement(rho, concurrence(), Extension::Assistance, budget(4, "entanglement-gap-a"));
    const auto c = entanglement(rho, concurrence(), Extension::ConvexRoof, budget(4, "entanglement-gap-c"));
    g_brackets.record(a, "entanglement gap");
    smallest = std::min(smallest, a.value - c.value);
  }
  return {smallest > 1e-3, fmt("min gap %.4f", smallest)};
}

Outcome criterion_schmidt_correlated() {
  Rng rng = make_rng(kSeed, stream_id("schmidt-correlated"));
  double worst_a = 0.0;
  double worst_c = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = k < 10 ? 2 : 3;
    const SchmidtCorrelated sc = embed_mc(ginibre_state(rng, n));
    const DensityMatrix compressed = compress_mc(sc);
    const BipartiteState state = sc.state();
    for (const auto* f : kBuiltins) {
      const auto ea = entanglement(state, *f, Extension::Assistance, budget(4, "sc-ea"));
      const auto ca = coherence(compressed, *f, Extension::Assistance, budget(4, "sc-ca"));
      const auto ec = entanglement(state, *f, Extension::ConvexRoof, budget(4, "sc-ec"));
      const auto cc = coherence(compressed, *f, Extension::ConvexRoof, budget(4, "sc-cc"));
      g_brackets.record(ea, "schmidt-correlated E_a");
      g_brackets.record(ca, "schmidt-correlated C_a");
      worst_a = std::max(worst_a, std::abs(ea.value - ca.value));
      worst_c = std::max(worst_c, std::abs(ec.value - cc.value));
    }
  }
  return {worst_a <= 2e-4 && worst_c <= 2e-4, fmt("max |E_a-C_a| %.2e, max |E_c-C_c| %.2e", worst_a, worst_c)};
}

Outcome criterion_three_dim_real() {
  Rng rng = make_rng(kSeed, stream_id("three-dim-real"));
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  int accepted = 0;
  int attempts = 0;
  double worst_rec = 0.0;
  double worst_mu = 0.0;
  bool all_decomposed = true;
  while (accepted < 20 && attempts < 100000) {
    ++attempts;
    const double c12 = entry(rng), c13 = entry(rng), c23 = entry(rng);
    // Weights of the sign patterns (+++), (-++), (+-+), (++-) in terms of c_ij.
    const std::array<double, 4> p{(1 + c12 + c13 + c23) / 4, (1 - c12 - c13 + c23) / 4,
                                  (1 - c12 + c13 - c23) / 4, (1 + c12 - c13 - c23) / 4};
    if (*std::min_element(p.begin(), p.end()) < 0.0) continue;
    Eigen::Matrix3d c;
    c << 1, c12, c13, c12, 1, c23, c13, c23, 1;
    const ComplexMatrix rho = c.cast<Complex>() / 3.0;
    const auto opt = decompose_3dim_real(DensityMatrix::validate(rho));
    ++accepted;
    if (!opt || opt->size() != 4) {
      all_decomposed = false;
      continue;
    }
    worst_rec = std::max(worst_rec, oracle::reconstruction_error(*opt, rho));
    worst_mu = std::max(worst_mu, oracle::mu_uniformity(*opt));
  }
  return {accepted == 20 && all_decomposed && worst_rec <= 1e-10 && worst_mu <= 1e-12,
          fmt("residual %.2e, mu dev %.2e", worst_rec, worst_mu)};
}

Outcome criterion_generalized_bell() {
  double worst_rec = 0.0;
  double worst_lambda = 0.0;
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto k = static_cast<Eigen::Index>(n * n);
    ComplexMatrix sum = ComplexMatrix::Zero(k, k);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        const PureState phi = generalized_bell(n, s, t).pure();
        sum += phi.projector() / static_cast<double>(n * n);
        const ComplexMatrix m = phi.amplitudes().reshaped<Eigen::RowMajor>(static_cast<Eigen::Index>(n),
                                                                           static_cast<Eigen::Index>(n));
        const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
          worst_lambda = std::max(worst_lambda, std::abs(sv(i) * sv(i) - 1.0 / static_cast<double>(n)));
        }
      }
    }
    worst_rec = std::max(worst_rec, (sum - ComplexMatrix::Identity(k, k) / static_cast<double>(k)).cwiseAbs().maxCoeff());
  }
  return {worst_rec <= 1e-12 && worst_lambda <= 1e-12, fmt("residual %.2e, lambda dev %.2e", worst_rec, worst_lambda)};
}

Outcome criterion_brackets() {
  return {g_brackets.checked > 0 && g_brackets.worst_excess <= 1e-8,
          std::to_string(g_brackets.checked) + " assistance values, worst excess " +
              fmt("%.2e", g_brackets.worst_excess) + " (" + g_brackets.worst_label + ")"};
}

Outcome criterion_oracle_agreement() {
  Rng rng = make_rng(kSeed, stream_id("oracle-agreement"));
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto rho = ginibre_state(rng, 2);
    for (const auto* f : kBuiltins) {
      const auto obj = coherence_objective(*f);
      for (const Direction dir : {Direction::Min, Direction::Max}) {
        const double solved = solve_roof({rho, obj, dir, budget(32, "oracle-agreement")}).value;
        const double grid = oracle_roof(rho, obj, dir, 721, 0);
        worst = std::max(worst, std::abs(solved - grid));
      }
    }
  }
  return {worst <= 1e-4, fmt("max |solver - grid| %.2e", worst)};
}

Outcome criterion_certification() {
  Rng rng = make_rng(kSeed, stream_id("certification"));
  int positives = 0;
  int failures = 0;
  double worst_rec = 0.0;
  double worst_uni = 0.0;
  const auto check = [&](const Certificate& cert, const ComplexMatrix& target, std::size_t ame_n) {
    if (!cert.positive()) return;
    ++positives;
    if (!cert.witness) {
      ++failures;
      return;
    }
    const double rec = oracle::reconstruction_error(*cert.witness, target);
    const double uni = ame_n ? oracle::lambda_uniformity(*cert.witness, ame_n) : oracle::mu_uniformity(*cert.witness);
    worst_rec = std::max(worst_rec, rec);
    worst_uni = std::max(worst_uni, uni);
    if (rec > 1e-8 || uni > 1e-7) ++failures;
  };

  std::vector<DensityMatrix> amc_inputs;
  for (std::size_t n = 2; n <= 4; ++n) amc_inputs.push_back(DensityMatrix::maximally_mixed(n));
  for (std::size_t n = 2; n <= 3; ++n) {
    for (int k = 0; k < 5; ++k) {
      // Random mixture of 2n maximally coherent states.
      const auto w = uniform_simplex_point(rng, 2 * n);
      ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (double wk : w) m += wk * random_maximally_coherent(rng, n).projector();
      amc_inputs.push_back(DensityMatrix::validate(m));
    }
  }
  Budget b = budget(8, "certification");
  for (const auto& rho : amc_inputs) check(certify_amc(rho, b), rho.matrix(), 0);

  std::vector<BipartiteState> ame_inputs;
  ame_inputs.emplace_back(Dims{2, 2}, DensityMatrix::maximally_mixed(4));
  ame_inputs.emplace_back(Dims{3, 3}, DensityMatrix::maximally_mixed(9));
  {
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(3, 3) = 0.5;
    bell(0, 3) = bell(3, 0) = 0.3;  // 0.8 phi+ + 0.2 phi-
    ame_inputs.emplace_back(Dims{2, 2}, DensityMatrix::validate(bell));
  }
  for (std::size_t n = 2; n <= 3; ++n) {
    for (int k = 0; k < 3; ++k) {
      const auto w = uniform_simplex_point(rng, 2 * n);
      ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (double wk : w) m += wk * random_maximally_coherent(rng, n).projector();
      ame_inputs.push_back(embed_mc(DensityMatrix::validate(m)).state());
    }
  }
  for (const auto& rho : ame_inputs) check(certify_ame(rho, b), rho.density().matrix(), rho.dims().a);

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d.diagonal() << 0.5, 0.25, 0.25;
  const Verdict diag_verdict = certify_amc(DensityMatrix::validate(d), b).verdict;

  std::string detail = std::to_string(positives) + " positive verdicts, residual " + fmt("%.2e", worst_rec) +
                       ", uniformity " + fmt("%.2e", worst_uni) + ", diag(1/2,1/4,1/4) -> " +
                       std::string(to_string(diag_verdict));
  return {positives > 0 && failures == 0 && diag_verdict == Verdict::NotAMC, detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Fourier AMC construction", 1, criterion_fourier},
      {2, "assistance saturation on I_n/n", 30, criterion_saturation},
      {3, "non-monotonicity counterexample", 5, criterion_non_monotone},
      {4, "strict coherence gap", 300, criterion_strict_gap},
      {5, "entanglement gap", 600, criterion_entanglement_gap},
      {6, "Schmidt-correlated equality", 600, criterion_schmidt_correlated},
      {7, "3-dim real AMC decomposition", 0, criterion_three_dim_real},
      {8, "generalized Bell average", 0, criterion_generalized_bell},
      {10, "oracle agreement", 300, criterion_oracle_agreement},
      {11, "certification soundness", 0, criterion_certification},
      // Runs last: aggregates assistance values from every criterion above.
      {9, "bound compliance", 0, criterion_brackets},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && elapsed > c.limit_seconds) {
      out.pass = false;
      out.detail += fmt(", over the %.0f s limit", c.limit_seconds);
    }
    if (!out.pass) ++failed;
    std::printf("%s [%d] %s (%s, %.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
