#pragma once

#include <cstddef>
#include <vector>

#include "rsac/model.hpp"

namespace rsac {

/// Q(i,a,g) = \int_0^inf exp((lambda(c-g) + q(i|i,a)) s) ds, evaluated in
/// closed form. Divergent when the exponent coefficient is >= 0.
struct QFactor {
  double value;  // > 0, +inf when divergent
  bool finite;
};

QFactor q_factor(const CtmdpModel& model, std::size_t i, std::size_t a,
                 double g);

/// Solution of the first-passage equations for candidate rate g and
/// reference state z, carried in x = exp(lambda h) space.
struct FirstPassageSolution {
  double g = 0.0;
  std::size_t z = 0;
  std::vector<double> x;  // x[i] > 0, +inf on divergent coordinates
  std::vector<double> h;  // ln(x)/lambda
  DetPolicy policy;       // minimizer (optimal problem) or the evaluated f
  bool finite = true;     // all x[i] < inf
  std::size_t iterations = 0;
};

/// Minimal positive solution of the fixed-policy linear system.
/// Requires n >= 2 and an irreducible policy.
FirstPassageSolution first_passage_value(const CtmdpModel& model,
                                         const DetPolicy& f, double g,
                                         std::size_t z);

struct OptimalFirstPassageOptions {
  std::size_t max_policy_updates = 1000;
};

/// Policy iteration on the min-linear first-passage equations; the returned
/// policy attains the per-state minimum.
FirstPassageSolution optimal_first_passage(
    const CtmdpModel& model, double g, std::size_t z,
    const OptimalFirstPassageOptions& opts = {});

enum class GSign { Negative, Zero, Positive };

/// Sign of h*_g(z), i.e. raw comparison of x_z against 1. Divergent
/// solutions classify as Positive.
std::pair<GSign, FirstPassageSolution> membership_in_G(const CtmdpModel& model,
                                                       double g,
                                                       std::size_t z);

} // namespace rsac
