#include "rsac/average_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "rsac/extended.hpp"

namespace rsac {

// Principal eigenvalue of Q + lambda*diag(c) by shifted power iteration.
double spectral_value(const InducedGenerator& gen, double lambda,
                      std::size_t* iterations_out) {
  const std::size_t n = gen.c.size();
  Eigen::MatrixXd B(n, n);
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    shift = std::max(shift, lambda * std::abs(gen.c[i]) + std::abs(gen.q[i][i]));
  shift += 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      B(i, j) = gen.q[i][j] + (i == j ? lambda * gen.c[i] + shift : 0.0);

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  double rho_prev = 0.0;
  const std::size_t cap = 100000;
  for (std::size_t k = 0; k < cap; ++k) {
    Eigen::VectorXd w = B * v;
    const double rho = w.sum() / v.sum();
    v = w / w.sum();
    if (k > 0 && std::abs(rho - rho_prev) < 1e-12) {
      if (iterations_out) *iterations_out = k + 1;
      return (rho - shift) / lambda;
    }
    rho_prev = rho;
  }
  throw std::runtime_error("power iteration did not converge");
}

EvalReport policy_value_spectral(const CtmdpModel& model, const DetPolicy& f) {
  if (!irreducible_under(model, f))
    throw std::runtime_error("policy not irreducible");
  EvalReport report;
  report.policy = f;
  report.method = "spectral";
  const auto gen = induced_generator(model, f);
  report.value = spectral_value(gen, model.lambda, &report.iterations);
  return report;
}

double risk_neutral_value(const InducedGenerator& gen) {
  const std::size_t n = gen.c.size();
  // pi Q = 0 with sum(pi) = 1, solved as a stacked least-squares system.
  Eigen::MatrixXd A(n + 1, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) A(j, i) = gen.q[i][j];
    A(n, j) = 1.0;
  }
  b(n) = 1.0;
  Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += pi(i) * gen.c[i];
  return value;
}

double policy_value_risk_neutral(const CtmdpModel& model, const DetPolicy& f) {
  if (!irreducible_under(model, f))
    throw std::runtime_error("policy not irreducible");
  return risk_neutral_value(induced_generator(model, f));
}

BruteForceResult brute_force_optimal(const CtmdpModel& model) {
  const std::size_t n = model.num_states();
  double count = 1.0;
  for (std::size_t i = 0; i < n; ++i) count *= double(model.num_actions(i));
  if (count > 1e6) throw std::runtime_error("policy space too large");

  BruteForceResult result;
  result.value = kInf;
  DetPolicy f;
  f.choice.assign(n, 0);
  // Odometer enumeration is lexicographic, so strict improvement keeps the
  // lexicographically smallest argmin.
  while (true) {
    if (irreducible_under(model, f)) {
      ++result.policies_evaluated;
      const double v = policy_value_spectral(model, f).value;
      if (v < result.value) {
        result.value = v;
        result.policy = f;
      }
    } else {
      ++result.policies_skipped;
    }
    std::size_t i = 0;
    while (i < n) {
      if (++f.choice[i] < model.num_actions(i)) break;
      f.choice[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  if (!std::isfinite(result.value))
    throw std::runtime_error("no irreducible policy exists");
  return result;
}

std::pair<DetPolicy, double> extract_policy(const CtmdpModel& model, double g,
                                            const std::vector<double>& h) {
  const std::size_t n = model.num_states();
  const double lambda = model.lambda;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::exp(lambda * h[i]);

  DetPolicy f;
  f.choice.resize(n);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = kInf;
    std::size_t best_a = 0;
    double best_scale = 1.0;
    for (std::size_t a = 0; a < model.num_actions(i); ++a) {
      double v = lambda * model.costs[i][a] * x[i];
      double scale = std::abs(v);
      for (std::size_t j = 0; j < n; ++j) {
        v += x[j] * model.rates[i][a][j];
        scale += std::abs(x[j] * model.rates[i][a][j]);
      }
      if (v < best) {
        best = v;
        best_a = a;
        best_scale = scale;
      }
    }
    f.choice[i] = best_a;
    const double defect = std::abs(lambda * g * x[i] - best);
    residual = std::max(residual, defect / std::max(1.0, best_scale));
  }
  return {f, residual};
}

SolveReport solve(const CtmdpModel& model, std::size_t z,
                  const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const std::size_t n = model.num_states();
  if (z >= n) throw std::invalid_argument("reference state out of range");

  SolveReport report;
  report.z = z;

  if (n == 1) {
    std::size_t best_a = 0;
    for (std::size_t a = 1; a < model.num_actions(0); ++a)
      if (model.costs[0][a] < model.costs[0][best_a]) best_a = a;
    report.g_star = model.costs[0][best_a];
    report.h_star = {0.0};
    report.policy.choice = {best_a};
    return report;
  }

  const double c_lo = model.min_cost();
  const double c_hi = model.max_cost();

  if (c_lo == c_hi) {
    report.g_star = c_lo;
    report.h_star.assign(n, 0.0);
    auto [f, res] = extract_policy(model, report.g_star, report.h_star);
    report.policy = std::move(f);
    report.residual_op = res;
    return report;
  }

  auto [sign_hi, sol_hi] = membership_in_G(model, c_hi, z);
  if (sign_hi == GSign::Positive)
    throw std::runtime_error(
        "bracket invalid: h*_g(z) > 0 at g = max cost; model assumptions "
        "violated");
  auto [sign_lo, sol_lo] = membership_in_G(model, c_lo, z);

  double g_low = c_lo;
  double g_high = c_hi;
  FirstPassageSolution best = std::move(sol_hi);
  if (sign_lo != GSign::Positive) {
    // Already a member at the lower cost bound, so g_star = min cost.
    g_high = c_lo;
    best = std::move(sol_lo);
  }
  report.bracket_trace.emplace_back(g_low, g_high);

  auto bisect_step = [&]() {
    const double mid = 0.5 * (g_low + g_high);
    if (mid <= g_low || mid >= g_high) return false;  // bracket exhausted
    auto [sign, sol] = membership_in_G(model, mid, z);
    if (sign == GSign::Positive) {
      g_low = mid;
    } else {
      g_high = mid;
      best = std::move(sol);
    }
    report.bracket_trace.emplace_back(g_low, g_high);
    ++report.iterations;
    return true;
  };
  while (g_high - g_low > opts.tol)
    if (!bisect_step()) break;
  // h_g(z) can move faster than g; keep halving until the residual at the
  // member-side endpoint is comfortably small.
  while (std::abs(best.h[z]) > 1e-9 * std::max(1.0, std::abs(g_high)) &&
         report.iterations < 200)
    if (!bisect_step()) break;

  report.g_star = g_high;
  report.residual_hz = std::abs(best.h[z]);
  report.h_star.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.h_star[i] = best.h[i] - best.h[z];
  auto [f, res] = extract_policy(model, report.g_star, report.h_star);
  report.policy = std::move(f);
  report.residual_op = res;
  return report;
}

} // namespace rsac
