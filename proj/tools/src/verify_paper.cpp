#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <roofkit/roofkit.hpp>

#include "commands.hpp"

namespace roofkit::cli {

namespace {

const std::array<const SimplexFunction*, 3> kBuiltins{&shannon(), &l1(), &concurrence()};

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

ComplexMatrix identity_over(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return ComplexMatrix::Identity(k, k) / static_cast<double>(n);
}

double member_mu_deviation(const Ensemble& e) {
  double worst = 0.0;
  for (const auto& m : e.members()) worst = std::max(worst, coherence_vector(m.state).deviation_from_uniform());
  return worst;
}

// Outcome of one row before it is turned into a report line.
struct Check {
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok = true;
  bool converged = true;  // every solve the row relied on converged

  void solved(const RoofResult& r) { converged = converged && r.converged; }
};

struct Context {
  Budget budget;
  std::size_t states;
  // Assistance values gathered from every row, checked by row (i).
  int bracket_count = 0;
  double bracket_excess = -1e300;

  Budget row_budget(const std::string& label) const {
    Budget b = budget;
    b.seed = mix_seed(budget.seed, stream_id(label));
    return b;
  }
  Rng row_rng(const std::string& label) const { return make_rng(budget.seed, stream_id(label)); }

  RoofResult assist(const RoofResult& r) {
    if (r.bracket) {
      ++bracket_count;
      bracket_excess = std::max(bracket_excess, r.value - *r.bracket);
    }
    return r;
  }
};

Check row_fourier(Context&) {
  Check c{"max residual / mu deviation, n=2..6", 0.0, 1e-12};
  for (std::size_t n = 2; n <= 6; ++n) {
    const Ensemble e = fourier_ensemble(n);
    c.value = std::max({c.value, max_abs(e.mixture() - identity_over(n)), member_mu_deviation(e)});
  }
  c.ok = c.value <= c.tolerance;
  return c;
}

Check row_saturation(Context& ctx) {
  Check c{"max f(uniform) - C_a(I/n), n=2,3", 0.0, 1e-6};
  for (std::size_t n = 2; n <= 3; ++n) {
    for (const auto* f : kBuiltins) {
      const auto r = ctx.assist(
          coherence(DensityMatrix::maximally_mixed(n), *f, Extension::Assistance, ctx.row_budget("saturation")));
      c.solved(r);
      c.value = std::max(c.value, (*f)(uniform(n)) - r.value);
      c.ok = c.ok && r.tight(c.tolerance);
    }
  }
  c.ok = c.ok && c.value <= c.tolerance;
  return c;
}

Check row_non_monotone(Context& ctx) {
  Check c{"max f(1/2,1/2) - C_a(flip |0><0|)", 0.0, 1e-6};
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix k2 = ComplexMatrix::Zero(2, 2);
  k2(0, 1) = k2(1, 0) = s;
  const KrausChannel flip({ComplexMatrix::Identity(2, 2) * s, k2});
  const auto zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  const auto image = apply_channel(zero, flip);
  for (const auto* f : kBuiltins) {
    const auto before = ctx.assist(coherence(zero, *f, Extension::Assistance, ctx.row_budget("non-monotone")));
    const auto after = ctx.assist(coherence(image, *f, Extension::Assistance, ctx.row_budget("non-monotone")));
    c.solved(after);
    c.ok = c.ok && before.value == 0.0;
    c.value = std::max(c.value, (*f)(uniform(2)) - after.value);
  }
  c.ok = c.ok && c.value <= c.tolerance;
  return c;
}

Check row_strict_gap(Context& ctx) {
  Check c{"min C_a - C_c over Ginibre qubits", 1e300, 1e-3};
  Rng rng = ctx.row_rng("strict-gap");
  for (std::size_t k = 0; k < ctx.states; ++k) {
    const auto rho = ginibre_state(rng, 2);
    for (const auto* f : kBuiltins) {
      const auto a = ctx.assist(coherence(rho, *f, Extension::Assistance, ctx.row_budget("strict-gap/a")));
      const auto v = coherence(rho, *f, Extension::ConvexRoof, ctx.row_budget("strict-gap/c"));
      c.solved(a);
      c.solved(v);
      c.value = std::min(c.value, a.value - v.value);
    }
  }
  c.ok = c.value > c.tolerance;
  return c;
}

Check row_entanglement_gap(Context& ctx) {
  Check c{"min E_a - E_c over Ginibre 2x2 (concurrence)", 1e300, 1e-3};
  Rng rng = ctx.row_rng("entanglement-gap");
  const std::size_t count = std::max<std::size_t>(1, ctx.states / 5);
  for (std::size_t k = 0; k < count; ++k) {
    const BipartiteState rho(Dims{2, 2}, ginibre_state(rng, 4));
    const auto a =
        ctx.assist(entanglement(rho, concurrence(), Extension::Assistance, ctx.row_budget("entanglement-gap/a")));
    const auto v = entanglement(rho, concurrence(), Extension::ConvexRoof, ctx.row_budget("entanglement-gap/c"));
    c.solved(a);
    c.solved(v);
    c.value = std::min(c.value, a.value - v.value);
  }
  c.ok = c.value > c.tolerance;
  return c;
}

Check row_schmidt_correlated(Context& ctx) {
  Check c{"max |E - C| on Schmidt-correlated states", 0.0, 2e-4};
  Rng rng = ctx.row_rng("schmidt-correlated");
  const std::size_t count = std::max<std::size_t>(1, ctx.states / 5);
  for (std::size_t n = 2; n <= 3; ++n) {
    for (std::size_t k = 0; k < count; ++k) {
      const SchmidtCorrelated sc = embed_mc(ginibre_state(rng, n));
      const DensityMatrix compressed = compress_mc(sc);
      const BipartiteState state = sc.state();
      for (const auto* f : kBuiltins) {
        for (const Extension ext : {Extension::Assistance, Extension::ConvexRoof}) {
          const auto e = entanglement(state, *f, ext, ctx.row_budget("schmidt-correlated/e"));
          const auto v = coherence(compressed, *f, ext, ctx.row_budget("schmidt-correlated/c"));
          if (ext == Extension::Assistance) {
            ctx.assist(e);
            ctx.assist(v);
          }
          c.solved(e);
          c.solved(v);
          c.value = std::max(c.value, std::abs(e.value - v.value));
        }
      }
    }
  }
  c.ok = c.value <= c.tolerance;
  return c;
}

Check row_three_dim_real(Context& ctx) {
  Check c{"max residual, 20 real 3x3 states with diagonal 1/3", 0.0, 1e-10};
  Rng rng = ctx.row_rng("three-dim-real");
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  int found = 0;
  while (found < 20) {
    Eigen::Matrix3d m;
    const double a = entry(rng), b = entry(rng), d = entry(rng);
    m << 1, a, b, a, 1, d, b, d, 1;
    if (m.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() < 0.0) continue;
    const DensityMatrix rho = DensityMatrix::validate(m.cast<Complex>() / 3.0);
    const auto weights = amc3_weights(rho);
    if (*std::min_element(weights.begin(), weights.end()) < 0.0) continue;
    ++found;
    const auto e = decompose_3dim_real(rho);
    if (!e) {
      c.ok = false;
      continue;
    }
    c.value = std::max(c.value, max_abs(e->mixture() - rho.matrix()));
    c.ok = c.ok && member_mu_deviation(*e) <= 1e-12;
  }
  c.ok = c.ok && c.value <= c.tolerance;
  return c;
}

Check row_generalized_bell(Context&) {
  Check c{"max residual / lambda deviation, n=2,3", 0.0, 1e-12};
  for (std::size_t n = 2; n <= 3; ++n) {
    const auto k = static_cast<Eigen::Index>(n * n);
    ComplexMatrix sum = ComplexMatrix::Zero(k, k);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        const BipartiteState phi = generalized_bell(n, s, t);
        sum += phi.pure().projector() / static_cast<double>(n * n);
        c.value = std::max(c.value, schmidt(phi).lambda.deviation_from_uniform());
      }
    }
    c.value = std::max(c.value, max_abs(sum - identity_over(n * n)));
  }
  c.ok = c.value <= c.tolerance;
  return c;
}

Check row_bounds(Context& ctx) {
  // Explicit concurrence bounds on fresh states, plus every assistance value above.
  Rng rng = ctx.row_rng("bounds");
  const std::size_t count = std::max<std::size_t>(1, ctx.states / 5);
  Check c{"max excess of C_a / E_a over its upper bound", 0.0, 1e-8};
  for (std::size_t k = 0; k < count; ++k) {
    const auto rho = ginibre_state(rng, 3);
    const auto r = ctx.assist(coherence(rho, concurrence(), Extension::Assistance, ctx.row_budget("bounds/c")));
    double purity = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i) purity += std::norm(rho(i, i));
    c.value = std::max(c.value, r.value - std::sqrt(2.0 * (1.0 - purity)));

    const BipartiteState two(Dims{2, 2}, ginibre_state(rng, 4));
    const auto e = ctx.assist(entanglement(two, concurrence(), Extension::Assistance, ctx.row_budget("bounds/e")));
    const ComplexMatrix reduced = partial_trace_b(two.density(), two.dims()).matrix();
    const double tr2 = (reduced * reduced).trace().real();
    c.value = std::max(c.value, e.value - std::sqrt(2.0 * (1.0 - tr2)));
  }
  c.value = std::max(c.value, ctx.bracket_excess);
  c.ok = c.value <= c.tolerance;
  return c;
}

struct Row {
  char id;
  const char* claim;
  std::function<Check(Context&)> run;
};

}  // namespace

RunReport verify_paper(const VerifyOptions& options, std::string& failed_row) {
  const std::vector<Row> rows{
      {'a', "Fourier ensemble of I/n is maximally coherent", row_fourier},
      {'b', "maximally mixed states saturate the assistance", row_saturation},
      {'c', "coherence of assistance is not monotone", row_non_monotone},
      {'d', "assistance strictly exceeds the convex roof", row_strict_gap},
      {'e', "entanglement analogue of the strict gap", row_entanglement_gap},
      {'f', "Schmidt-correlated states: entanglement equals coherence", row_schmidt_correlated},
      {'g', "real 3-dim states decompose into maximally coherent states", row_three_dim_real},
      {'h', "generalized Bell states average to the maximally mixed state", row_generalized_bell},
      {'i', "concurrence-type upper bounds hold", row_bounds},
  };

  Context ctx{options.budget, options.states};
  RunReport report;
  report.seed = options.budget.seed;
  std::string selected;
  for (const auto& row : rows) {
    if (!options.rows.empty() && !options.rows.count(row.id)) continue;
    selected += row.id;
  }
  report.digest = hex_digest("verify-paper rows=" + selected + " states=" + std::to_string(options.states) +
                             " restarts=" + std::to_string(options.budget.restarts) +
                             " sweeps=" + std::to_string(options.budget.sweeps) +
                             " cardinality=" + std::to_string(options.budget.cardinality));
  report.notes.emplace_back("budget", "restarts=" + std::to_string(options.budget.restarts) +
                                          " sweeps=" + std::to_string(options.budget.sweeps));

  failed_row.clear();
  for (const auto& row : rows) {
    if (selected.find(row.id) == std::string::npos) continue;
    ResultRow line;
    line.id = std::string("(") + row.id + ")";
    line.claim = row.claim;
    try {
      const Check c = row.run(ctx);
      line.quantity = c.quantity;
      line.value = c.value;
      line.tolerance = c.tolerance;
      line.status = c.ok ? "PASS" : c.converged ? "FAIL" : "INCONCLUSIVE";
    } catch (const Error& e) {
      line.quantity = e.what();
      line.value = std::nan("");
      line.status = "FAIL";
    }
    if (line.status != "PASS" && failed_row.empty()) failed_row = line.id + " " + line.claim + ": " + line.status;
    report.rows.push_back(std::move(line));
  }
  return report;
}

}  // namespace roofkit::cli
