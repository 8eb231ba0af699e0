#include "roofkit/simplexfn.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "roofkit/errors.hpp"

namespace roofkit {

namespace {

constexpr double kMembershipTol = 1e-9;

}  // namespace

SimplexFunction::SimplexFunction(std::string name, EvalFn eval)
    : name_(std::move(name)), eval_(std::move(eval)) {}

SimplexFunction SimplexFunction::custom(std::string name, EvalFn eval, std::size_t dim,
                                        int trials, std::uint64_t seed) {
  SimplexFunction f(std::move(name), std::move(eval));
  const MembershipReport report = check_membership(f, dim, trials, seed);
  if (!report.passed) {
    const double worst = std::max({report.symmetry_residual, report.concavity_violation,
                                   report.vertex_value});
    throw Error(ErrorCode::NotMember, "'" + f.name() + "' is not a symmetric concave function "
                "vanishing at e_1", worst);
  }
  return f;
}

double SimplexFunction::max_value(std::size_t dim) const {
  const std::vector<double> u(dim, 1.0 / static_cast<double>(dim));
  return eval_(u);
}

double f_shannon(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return std::max(h, 0.0);
}

double f_l1(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += std::sqrt(std::max(x, 0.0));
  return std::max(s * s - 1.0, 0.0);
}

double f_concurrence(std::span<const double> p) {
  double sq = 0.0;
  for (double x : p) sq += x * x;
  return std::sqrt(std::max(2.0 * (1.0 - sq), 0.0));
}

const SimplexFunction& shannon() {
  static const SimplexFunction f("shannon", f_shannon);
  return f;
}

const SimplexFunction& l1() {
  static const SimplexFunction f("l1", f_l1);
  return f;
}

const SimplexFunction& concurrence() {
  static const SimplexFunction f("concurrence", f_concurrence);
  return f;
}

std::optional<SimplexFunction> builtin_function(std::string_view name) {
  if (name == "shannon") return shannon();
  if (name == "l1") return l1();
  if (name == "concurrence") return concurrence();
  return std::nullopt;
}

namespace {

// Random point on a random face of the simplex (vertices and edges included).
std::vector<double> face_point(Rng& rng, std::size_t dim) {
  std::uniform_int_distribution<std::size_t> support_size(1, dim);
  const std::size_t k = support_size(rng);
  std::vector<std::size_t> idx(dim);
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::vector<double> inner = uniform_simplex_point(rng, k);
  std::vector<double> p(dim, 0.0);
  for (std::size_t i = 0; i < k; ++i) p[idx[i]] = inner[i];
  return p;
}

}  // namespace

MembershipReport check_membership(const SimplexFunction& f, std::size_t dim, int trials,
                                  std::uint64_t seed) {
  if (trials < 1 || dim < 1) {
    throw Error(ErrorCode::PreconditionFailed, "check_membership needs trials >= 1 and dim >= 1");
  }
  MembershipReport report;
  Rng rng = make_rng(seed, stream_id("check_membership"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution on_face(0.5);

  auto sample = [&] { return on_face(rng) ? face_point(rng, dim) : uniform_simplex_point(rng, dim); };

  std::vector<double> e1(dim, 0.0);
  e1[0] = 1.0;
  report.vertex_value = std::abs(f(e1));
  report.max_value = f.max_value(dim);

  // Vertex pairs catch convexity along edges deterministically.
  if (dim >= 2) {
    std::vector<double> e2(dim, 0.0);
    e2[1] = 1.0;
    std::vector<double> mid(dim, 0.0);
    mid[0] = mid[1] = 0.5;
    report.concavity_violation =
        std::max(report.concavity_violation, 0.5 * f(e1) + 0.5 * f(e2) - f(mid));
  }

  for (int t = 0; t < trials; ++t) {
    const std::vector<double> p = sample();
    std::vector<double> perm = p;
    std::shuffle(perm.begin(), perm.end(), rng);
    const double fp = f(p);
    report.symmetry_residual = std::max(report.symmetry_residual, std::abs(fp - f(perm)));

    const std::vector<double> q = sample();
    const double w = unit(rng);
    std::vector<double> mix(dim);
    for (std::size_t i = 0; i < dim; ++i) mix[i] = w * p[i] + (1.0 - w) * q[i];
    report.concavity_violation =
        std::max(report.concavity_violation, w * fp + (1.0 - w) * f(q) - f(mix));
  }

  report.passed = report.symmetry_residual <= kMembershipTol &&
                  report.concavity_violation <= kMembershipTol &&
                  report.vertex_value <= kMembershipTol && report.max_value > kMembershipTol;
  return report;
}

}  // namespace roofkit
