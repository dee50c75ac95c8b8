#include "rsac/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "rsac/extended.hpp"

namespace rsac {

QFactor q_factor(const CtmdpModel& model, std::size_t i, std::size_t a,
                 double g) {
  const double denom =
      model.lambda * (g - model.costs[i][a]) - model.rates[i][a][i];
  if (denom > 0.0) return {1.0 / denom, true};
  return {kInf, false};
}

namespace {

constexpr double kResidualTol = 1e-8;

// Minimal positive solution of the fixed-policy system in x-space for the
// averaged generator rows (q, c). Divergent coordinates come out as +inf.
FirstPassageSolution solve_fixed(const InducedGenerator& gen, double lambda,
                                 double g, std::size_t z) {
  const std::size_t n = gen.c.size();
  FirstPassageSolution sol;
  sol.g = g;
  sol.z = z;

  // denom[i] > 0 iff the exponential integral Q(i,.,g) converges.
  std::vector<double> denom(n);
  std::vector<char> infinite(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    denom[i] = lambda * (g - gen.c[i]) - gen.q[i][i];
    infinite[i] = denom[i] <= 0.0;
  }
  // Any positive rate into a divergent coordinate diverges too; z feeds
  // nothing back, so it is resolved at the end.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == z || infinite[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == z) continue;
        if (gen.q[i][j] > 0.0 && infinite[j]) {
          infinite[i] = 1;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> free_states;  // i != z with finite coordinates
  for (std::size_t i = 0; i < n; ++i)
    if (i != z && !infinite[i]) free_states.push_back(i);

  sol.x.assign(n, kInf);
  const std::size_t k = free_states.size();
  if (k > 0) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd b(k);
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t i = free_states[r];
      A(r, r) = denom[i];
      b(r) = gen.q[i][z];
      for (std::size_t s = 0; s < k; ++s) {
        const std::size_t j = free_states[s];
        if (j != i) A(r, s) = -gen.q[i][j];
      }
    }
    Eigen::VectorXd xv = A.partialPivLu().solve(b);
    const double scale = A.norm() * xv.norm() + b.norm();
    const double rel = (A * xv - b).norm() / std::max(scale, 1e-300);
    if (!xv.allFinite() || rel > kResidualTol)
      throw std::runtime_error("ill-conditioned system");
    bool positive = true;
    for (std::size_t r = 0; r < k; ++r)
      if (!(xv(r) > 0.0)) positive = false;
    if (positive)
      for (std::size_t r = 0; r < k; ++r) sol.x[free_states[r]] = xv(r);
    // A nonpositive coordinate means the minimal nonnegative series
    // solution diverges; everything stays at +inf.
  }

  if (!infinite[z]) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != z) s += ext_mul(gen.q[z][j], sol.x[j]);
    sol.x[z] = denom[z] > 0.0 ? s / denom[z] : kInf;
  }

  sol.finite = std::all_of(sol.x.begin(), sol.x.end(),
                           [](double v) { return std::isfinite(v); });
  sol.h.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    sol.h[i] = std::isfinite(sol.x[i]) ? std::log(sol.x[i]) / lambda : kInf;
  sol.iterations = 1;
  return sol;
}

InducedGenerator induce_det(const CtmdpModel& model, const DetPolicy& f) {
  return induced_generator(model, f);
}

// Right-hand side of the min-linear equation at state i for action a,
// given the current x.
double improvement_rhs(const CtmdpModel& model, std::size_t i, std::size_t a,
                       double g, std::size_t z, const std::vector<double>& x) {
  const double denom =
      model.lambda * (g - model.costs[i][a]) - model.rates[i][a][i];
  if (denom <= 0.0) return kInf;
  double s = 0.0;
  const auto& row = model.rates[i][a];
  for (std::size_t j = 0; j < model.num_states(); ++j) {
    if (j == i || j == z) continue;
    s += ext_mul(row[j], x[j]);
    if (!std::isfinite(s)) return kInf;
  }
  if (i != z) s += row[z];
  return s / denom;
}

DetPolicy improve(const CtmdpModel& model, double g, std::size_t z,
                  const std::vector<double>& x) {
  DetPolicy f;
  f.choice.resize(model.num_states());
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    double best = kInf;
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < model.num_actions(i); ++a) {
      const double v = improvement_rhs(model, i, a, g, z, x);
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    f.choice[i] = best_a;
  }
  return f;
}

double rel_change(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool fa = std::isfinite(a[i]);
    const bool fb = std::isfinite(b[i]);
    if (fa != fb) return kInf;
    if (!fa) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  }
  return worst;
}

} // namespace

FirstPassageSolution first_passage_value(const CtmdpModel& model,
                                         const DetPolicy& f, double g,
                                         std::size_t z) {
  if (model.num_states() < 2)
    throw std::invalid_argument("first_passage_value requires n >= 2");
  if (!irreducible_under(model, f))
    throw std::runtime_error("policy not irreducible");
  auto sol = solve_fixed(induce_det(model, f), model.lambda, g, z);
  sol.policy = f;
  return sol;
}

FirstPassageSolution optimal_first_passage(
    const CtmdpModel& model, double g, std::size_t z,
    const OptimalFirstPassageOptions& opts) {
  if (model.num_states() < 2)
    throw std::invalid_argument("optimal_first_passage requires n >= 2");

  // Start from the per-state cheapest action; lowest index wins ties.
  DetPolicy f;
  f.choice.resize(model.num_states());
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    std::size_t best_a = 0;
    for (std::size_t a = 1; a < model.num_actions(i); ++a)
      if (model.costs[i][a] < model.costs[i][best_a]) best_a = a;
    f.choice[i] = best_a;
  }

  std::set<std::vector<std::size_t>> visited;
  visited.insert(f.choice);
  auto sol = solve_fixed(induce_det(model, f), model.lambda, g, z);
  std::size_t updates = 0;
  while (true) {
    if (++updates > opts.max_policy_updates)
      throw std::runtime_error("iteration limit exceeded");
    DetPolicy next = improve(model, g, z, sol.x);
    if (next.choice == f.choice) break;
    if (!visited.insert(next.choice).second) break;  // tie cycle
    auto next_sol = solve_fixed(induce_det(model, next), model.lambda, g, z);
    const double change = rel_change(sol.x, next_sol.x);
    f = next;
    sol = std::move(next_sol);
    if (change < 1e-12) break;
  }
  sol.policy = f;
  sol.iterations = updates;
  return sol;
}

std::pair<GSign, FirstPassageSolution> membership_in_G(const CtmdpModel& model,
                                                       double g,
                                                       std::size_t z) {
  auto sol = optimal_first_passage(model, g, z);
  const double xz = sol.x[z];
  GSign sign = GSign::Positive;
  if (std::isfinite(xz)) {
    if (xz < 1.0)
      sign = GSign::Negative;
    else if (xz == 1.0)
      sign = GSign::Zero;
  }
  return {sign, std::move(sol)};
}

} // namespace rsac
