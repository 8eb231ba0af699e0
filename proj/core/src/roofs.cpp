#include "roofkit/roofs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "roofkit/errors.hpp"

namespace roofkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949;  // 1 / golden ratio
constexpr int kPhaseGrid = 8;
constexpr double kCoarseAngleTolerance = 1e-2;
constexpr double kAcceptGain = 1e-15;
constexpr double kKinkThreshold = 1e-5;
constexpr double kGradientStep = 1e-6;
constexpr double kEscapeReach = 0.25;
constexpr double kEscapeTrigger = 1e-6;

struct LineMinimum {
  double x;
  double fx;
};

// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
LineMinimum golden_section(F&& f, double lo, double hi, double tolerance) {
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc < fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
}

// Local search state: columns of W are the unnormalized ensemble vectors.
// Costs are direction-signed so the search always minimizes.
class GivensSearch {
 public:
  GivensSearch(ComplexMatrix columns, const Objective& objective, Direction direction,
               double angle_tolerance)
      : w_(std::move(columns)),
        objective_(objective),
        sign_(direction == Direction::Max ? -1.0 : 1.0),
        angle_tolerance_(angle_tolerance),
        scratch_(w_.rows()),
        rot_a_(w_.rows()),
        rot_b_(w_.rows()),
        cost_(static_cast<std::size_t>(w_.cols())) {
    for (Eigen::Index k = 0; k < w_.cols(); ++k) {
      cost_[static_cast<std::size_t>(k)] = member_cost(w_.col(k));
    }
  }

  double total_cost() const {
    double sum = 0.0;
    for (double c : cost_) sum += c;
    return sum;
  }

  // One pass over every pair of columns. Returns the decrease in total cost.
  double sweep() {
    const double before = total_cost();
    for (Eigen::Index a = 0; a + 1 < w_.cols(); ++a) {
      for (Eigen::Index b = a + 1; b < w_.cols(); ++b) optimize_pair(a, b);
    }
    return before - total_cost();
  }

  const ComplexMatrix& columns() const noexcept { return w_; }

  // Stalls usually sit on kinks of the objective: members with vanishing
  // amplitudes, where every single pair rotation costs first order. Step along
  // the gradient restricted to unitary mixings that keep those amplitudes at
  // zero to first order. Generators are the pair rotations (l, k) with real
  // and imaginary coupling; central differences drop the symmetric kink terms.
  // Returns the decrease in cost.
  double escape() {
    const Eigen::Index n = w_.rows();
    const Eigen::Index m = w_.cols();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> kinks;
    for (Eigen::Index k = 0; k < m; ++k) {
      const double p = w_.col(k).squaredNorm();
      if (p < tol::kDropWeight) continue;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::norm(w_(i, k)) <= kKinkThreshold * p) kinks.emplace_back(i, k);
      }
    }

    // Differences are taken with the kinked amplitudes snapped to zero, so the
    // kink terms cancel exactly instead of blurring over the step size.
    ComplexMatrix base = w_;
    for (const auto& [i, k] : kinks) base(i, k) = 0.0;

    const Eigen::Index dof = m * (m - 1);
    Eigen::VectorXd grad(dof);
    Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(2 * static_cast<Eigen::Index>(kinks.size()), dof);
    ComplexVector da(n);
    ComplexVector db(n);
    Eigen::Index e = 0;
    for (Eigen::Index l = 0; l + 1 < m; ++l) {
      for (Eigen::Index k = l + 1; k < m; ++k) {
        for (const Complex coupling : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
          // Tangent of W exp(tG): column l moves along -conj(c) w_k, column k along c w_l.
          da = -std::conj(coupling) * base.col(k);
          db = coupling * base.col(l);
          const double up = member_cost(base.col(l) + kGradientStep * da) +
                            member_cost(base.col(k) + kGradientStep * db);
          const double down = member_cost(base.col(l) - kGradientStep * da) +
                              member_cost(base.col(k) - kGradientStep * db);
          grad(e) = (up - down) / (2 * kGradientStep);
          for (std::size_t z = 0; z < kinks.size(); ++z) {
            const auto [i, col] = kinks[z];
            Complex v = 0.0;
            if (col == l) v = da(i);
            if (col == k) v = db(i);
            constraints(2 * static_cast<Eigen::Index>(z), e) = v.real();
            constraints(2 * static_cast<Eigen::Index>(z) + 1, e) = v.imag();
          }
          ++e;
        }
      }
    }
    if (!kinks.empty()) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(constraints.transpose());
      cod.setThreshold(1e-10);
      grad -= constraints.transpose() * cod.solve(grad);
    }
    if (grad.norm() < 1e-12) return 0.0;
    grad.normalize();

    ComplexMatrix dir = ComplexMatrix::Zero(m, m);
    e = 0;
    for (Eigen::Index l = 0; l + 1 < m; ++l) {
      for (Eigen::Index k = l + 1; k < m; ++k) {
        for (const Complex coupling : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
          dir(l, k) -= grad(e) * coupling;
          dir(k, l) += grad(e) * std::conj(coupling);
          ++e;
        }
      }
    }

    const double before = total_cost();
    double best_t = 0.0;
    double best = before;
    for (double t = kEscapeReach; t > 1e-7; t /= 4) {
      const double c = moved_cost(dir, t);
      if (c < best) {
        best = c;
        best_t = t;
      }
    }
    if (best_t == 0.0) return 0.0;
    const LineMinimum line = golden_section([&](double t) { return moved_cost(dir, t); },
                                            best_t / 4, std::min(kEscapeReach, best_t * 4),
                                            angle_tolerance_ * best_t);
    if (line.fx < best) {
      best = line.fx;
      best_t = line.x;
    }
    if (best >= before - kAcceptGain) return 0.0;
    w_ = w_ * cayley(dir, best_t);
    for (Eigen::Index k = 0; k < m; ++k) cost_[static_cast<std::size_t>(k)] = member_cost(w_.col(k));
    return before - total_cost();
  }


 private:
  double member_cost(const Eigen::Ref<const ComplexVector>& v) {
    const double p = v.squaredNorm();
    if (p < tol::kDropWeight) return 0.0;
    scratch_ = v / std::sqrt(p);
    const double g = objective_(std::span<const Complex>(scratch_.data(),
                                                         static_cast<std::size_t>(scratch_.size())));
    if (!std::isfinite(g)) {
      throw Error(ErrorCode::ObjectiveNaN, "objective returned a non-finite value", g);
    }
    return sign_ * p * g;
  }

  // Exactly unitary for anti-Hermitian h.
  static ComplexMatrix cayley(const ComplexMatrix& h, double t) {
    const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.cols());
    return (id - (t / 2) * h).partialPivLu().solve(id + (t / 2) * h);
  }

  double moved_cost(const ComplexMatrix& h, double t) {
    const ComplexMatrix moved = w_ * cayley(h, t);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < moved.cols(); ++k) sum += member_cost(moved.col(k));
    return sum;
  }

  void rotate(Eigen::Index a, Eigen::Index b, double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex e = std::polar(1.0, phi);
    rot_a_ = c * w_.col(a) + (e * s) * w_.col(b);
    rot_b_ = (-std::conj(e) * s) * w_.col(a) + c * w_.col(b);
  }

  double pair_cost(Eigen::Index a, Eigen::Index b, double theta, double phi) {
    rotate(a, b, theta, phi);
    return member_cost(rot_a_) + member_cost(rot_b_);
  }

  void optimize_pair(Eigen::Index a, Eigen::Index b) {
    const double current = cost_[static_cast<std::size_t>(a)] + cost_[static_cast<std::size_t>(b)];
    double best_theta = 0.0;
    double best_phi = 0.0;
    double best = current;

    for (int g = 0; g < kPhaseGrid; ++g) {
      const double phi = 2.0 * kPi * g / kPhaseGrid;
      const LineMinimum m = golden_section(
          [&](double t) { return pair_cost(a, b, t, phi); }, 0.0, kPi / 2, kCoarseAngleTolerance);
      if (m.fx < best) {
        best = m.fx;
        best_theta = m.x;
        best_phi = phi;
      }
    }
    if (best_theta == 0.0) {
      // No grid phase improves at coarse resolution; still try the finest angle
      // search at phase 0 so small corrections near convergence are not lost.
      for (int g = 0; g < kPhaseGrid; g += 2) {
        const double phi = 2.0 * kPi * g / kPhaseGrid;
        const LineMinimum m = golden_section(
            [&](double t) { return pair_cost(a, b, t, phi); }, 0.0, 4 * kCoarseAngleTolerance,
            angle_tolerance_);
        if (m.fx < best) {
          best = m.fx;
          best_theta = m.x;
          best_phi = phi;
        }
      }
      if (best_theta == 0.0) return;
    }

    const LineMinimum phase = golden_section(
        [&](double p) { return pair_cost(a, b, best_theta, p); }, best_phi - kPi / 4,
        best_phi + kPi / 4, angle_tolerance_);
    if (phase.fx < best) {
      best = phase.fx;
      best_phi = phase.x;
    }
    const double span = 4 * kCoarseAngleTolerance;
    const LineMinimum angle = golden_section(
        [&](double t) { return pair_cost(a, b, t, best_phi); },
        std::max(0.0, best_theta - span), std::min(kPi / 2, best_theta + span), angle_tolerance_);
    if (angle.fx < best) {
      best = angle.fx;
      best_theta = angle.x;
    }

    if (best < current - kAcceptGain) {
      rotate(a, b, best_theta, best_phi);
      w_.col(a) = rot_a_;
      w_.col(b) = rot_b_;
      cost_[static_cast<std::size_t>(a)] = member_cost(w_.col(a));
      cost_[static_cast<std::size_t>(b)] = member_cost(w_.col(b));
    }
  }

  ComplexMatrix w_;
  const Objective& objective_;
  double sign_;
  double angle_tolerance_;
  ComplexVector scratch_;
  ComplexVector rot_a_;
  ComplexVector rot_b_;
  std::vector<double> cost_;
};

struct LocalOutcome {
  ComplexMatrix columns;
  double signed_cost;
  bool converged;
  int iterations;
};

LocalOutcome run_local(ComplexMatrix columns, const Objective& objective, Direction direction,
                       const LocalSearchOptions& options) {
  GivensSearch search(std::move(columns), objective, direction, options.angle_tolerance);
  bool converged = false;
  int iterations = 0;
  if (search.columns().cols() < 2) {
    return {search.columns(), search.total_cost(), true, 0};
  }
  while (iterations < options.sweeps) {
    const double gain = search.sweep();
    ++iterations;
    if (gain >= kEscapeTrigger) continue;
    const double kick = search.escape();
    if (gain < options.stop_improvement && kick < options.stop_improvement) {
      converged = true;
      break;
    }
  }
  return {search.columns(), search.total_cost(), converged, iterations};
}

ComplexMatrix support_basis(const DensityMatrix& rho) {
  const Spectrum spec = rho.spectrum();
  return spec.vectors * spec.values.cwiseSqrt().asDiagonal();
}

unsigned resolve_threads(unsigned requested, int restarts) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::min<unsigned>(t, static_cast<unsigned>(restarts));
}

RoofResult make_result(const DensityMatrix& rho, const Objective& objective,
                       const ComplexMatrix& columns, bool converged, int iterations) {
  Ensemble witness = ensemble_from_columns(rho, columns);
  const double value = ensemble_average(witness, objective);
  return RoofResult{value, std::move(witness), std::nullopt, converged, iterations};
}

}  // namespace

std::size_t default_cardinality(std::size_t rank) {
  return std::max(rank, std::min<std::size_t>(rank * rank, 16));
}

ComplexMatrix ensemble_columns(const Ensemble& ensemble) {
  const auto n = static_cast<Eigen::Index>(ensemble.target().dim());
  ComplexMatrix w(n, static_cast<Eigen::Index>(ensemble.size()));
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& m = ensemble.members()[k];
    w.col(static_cast<Eigen::Index>(k)) = std::sqrt(m.weight) * m.state.amplitudes();
  }
  return w;
}

double ensemble_average(const Ensemble& ensemble, const Objective& objective) {
  double sum = 0.0;
  for (const auto& m : ensemble.members()) {
    const double g = objective(m.state.view());
    if (!std::isfinite(g)) {
      throw Error(ErrorCode::ObjectiveNaN, "objective returned a non-finite value", g);
    }
    sum += m.weight * g;
  }
  return sum;
}

RoofResult refine_roof(const DensityMatrix& rho, const ComplexMatrix& columns,
                       const Objective& objective, Direction direction,
                       const LocalSearchOptions& options) {
  if (options.sweeps < 1) throw Error(ErrorCode::BudgetZero, "local search needs sweeps >= 1");
  const double residual = max_abs(columns * columns.adjoint() - rho.matrix());
  if (!(residual <= tol::kEnsemble)) {
    throw Error(ErrorCode::PreconditionFailed, "starting columns do not reconstruct rho", residual);
  }
  LocalOutcome out = run_local(columns, objective, direction, options);
  return make_result(rho, objective, out.columns, out.converged, out.iterations);
}

RoofResult solve_roof(const RoofProblem& problem) {
  const Budget& budget = problem.budget;
  if (budget.restarts < 1 || budget.sweeps < 1) {
    throw Error(ErrorCode::BudgetZero, "restarts and sweeps must both be at least 1");
  }
  const ComplexMatrix basis = support_basis(problem.rho);
  const auto rank = static_cast<std::size_t>(basis.cols());
  const std::size_t m = budget.cardinality == 0 ? default_cardinality(rank) : budget.cardinality;
  if (m < rank) {
    throw Error(ErrorCode::PreconditionFailed,
                "cardinality " + std::to_string(m) + " is below rank " + std::to_string(rank));
  }

  const LocalSearchOptions options{budget.sweeps, 1e-7, 1e-9};
  const auto restarts = static_cast<std::size_t>(budget.restarts);
  std::vector<std::optional<LocalOutcome>> outcomes(restarts);
  std::vector<std::exception_ptr> errors(restarts);

  auto run_one = [&](std::size_t index) {
    try {
      Rng rng = make_rng(budget.seed, index);
      const ComplexMatrix v =
          haar_isometry(rng, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(rank));
      outcomes[index] =
          run_local(basis * v.transpose(), problem.objective, problem.direction, options);
    } catch (...) {
      errors[index] = std::current_exception();
    }
  };

  const unsigned threads = resolve_threads(budget.threads, budget.restarts);
  if (threads <= 1) {
    for (std::size_t i = 0; i < restarts; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < restarts; i = next++) run_one(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Lowest signed cost wins; ties go to the lowest restart index.
  std::size_t best = 0;
  for (std::size_t i = 1; i < restarts; ++i) {
    if (outcomes[i]->signed_cost < outcomes[best]->signed_cost) best = i;
  }
  const LocalOutcome& winner = *outcomes[best];
  return make_result(problem.rho, problem.objective, winner.columns, winner.converged,
                     winner.iterations);
}

double oracle_roof(const DensityMatrix& rho, const Objective& objective, Direction direction,
                   int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::BudgetZero, "oracle needs samples >= 1");
  const ComplexMatrix basis = support_basis(rho);
  const Eigen::Index rank = basis.cols();
  const double sign = direction == Direction::Max ? -1.0 : 1.0;

  ComplexVector scratch(basis.rows());
  auto average = [&](const ComplexMatrix& w) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
      const double p = w.col(k).squaredNorm();
      if (p < tol::kDropWeight) continue;
      scratch = w.col(k) / std::sqrt(p);
      sum += p * objective(std::span<const Complex>(scratch.data(),
                                                    static_cast<std::size_t>(scratch.size())));
    }
    return sum;
  };

  if (rank == 1) return average(basis);

  double best = std::numeric_limits<double>::infinity();
  if (rank == 2) {
    const int steps = std::max(samples, 2);
    ComplexMatrix v(2, 2);
    for (int i = 0; i < steps; ++i) {
      const double theta = (kPi / 2) * i / (steps - 1);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      for (int j = 0; j < steps; ++j) {
        const Complex e = std::polar(1.0, 2.0 * kPi * j / steps);
        v << c, e * s, -std::conj(e) * s, c;
        best = std::min(best, sign * average(basis * v.transpose()));
      }
    }
    return sign * best;
  }

  Rng rng = make_rng(seed, stream_id("oracle_roof"));
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix v = haar_isometry(rng, rank * rank, rank);
    best = std::min(best, sign * average(basis * v.transpose()));
  }
  return sign * best;
}

}  // namespace roofkit
