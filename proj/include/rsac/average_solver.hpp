#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rsac/first_passage.hpp"
#include "rsac/model.hpp"

namespace rsac {

struct SolveReport {
  double g_star = 0.0;
  std::vector<double> h_star;  // normalized so h_star[z] = 0
  DetPolicy policy;
  double residual_op = 0.0;  // sup-norm relative residual of the optimality eq
  double residual_hz = 0.0;  // |h*_g(z)|
  std::vector<std::pair<double, double>> bracket_trace;
  std::size_t z = 0;
  std::size_t iterations = 0;
};

struct SolveOptions {
  double tol = 1e-10;  // bracket width
  OptimalFirstPassageOptions inner;
};

/// Bisection on g over [min c, max c] with the membership predicate
/// h*_g(z) <= 0; g_star is reported from the member-side endpoint.
SolveReport solve(const CtmdpModel& model, std::size_t z,
                  const SolveOptions& opts = {});

/// Per-state argmin of the optimality-equation right-hand side at (g, h),
/// with the sup-norm relative defect of (g, h) as residual.
std::pair<DetPolicy, double> extract_policy(const CtmdpModel& model, double g,
                                            const std::vector<double>& h);

struct EvalReport {
  DetPolicy policy;
  double value = 0.0;
  std::string method;        // "spectral" | "monte_carlo"
  std::size_t iterations = 0;
};

/// J(f) as the principal eigenvalue of Q_f + lambda*diag(c_f), divided by
/// lambda; shifted power iteration.
EvalReport policy_value_spectral(const CtmdpModel& model, const DetPolicy& f);

/// Same evaluation on an explicit generator/cost pair (e.g. the averaged
/// rows of a randomized stationary policy).
double spectral_value(const InducedGenerator& gen, double lambda,
                      std::size_t* iterations = nullptr);

/// Stationary-distribution average cost of an explicit generator.
double risk_neutral_value(const InducedGenerator& gen);

struct BruteForceResult {
  DetPolicy policy;
  double value = 0.0;
  std::size_t policies_evaluated = 0;
  std::size_t policies_skipped = 0;  // non-irreducible
};

/// Exhaustive enumeration of deterministic stationary policies.
/// Guarded at 10^6 policies.
BruteForceResult brute_force_optimal(const CtmdpModel& model);

/// Stationary-distribution average of c_f (the lambda -> 0 criterion).
double policy_value_risk_neutral(const CtmdpModel& model, const DetPolicy& f);

} // namespace rsac
