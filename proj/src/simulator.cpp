#include "rsac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rsac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent per-trajectory stream: mixing keeps streams decorrelated and
// the aggregate independent of scheduling.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

double uniform_open(std::mt19937_64& rng) {
  // In (0, 1]; never 0 so -log(u) is finite.
  return (double(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double sample_exponential(std::mt19937_64& rng, double rate) {
  return -std::log(uniform_open(rng)) / rate;
}

Trajectory run_gillespie(const InducedGenerator& gen, std::size_t i0,
                         double horizon, std::mt19937_64 rng,
                         std::optional<std::size_t> stop_at) {
  const std::size_t n = gen.c.size();
  Trajectory traj;
  traj.initial_state = i0;
  traj.horizon = horizon;
  traj.states.push_back(i0);

  double t = 0.0;
  std::size_t state = i0;
  while (true) {
    const double exit_rate = -gen.q[state][state];
    if (!(exit_rate > 0.0)) break;  // absorbing; impossible for valid models
    t += sample_exponential(rng, exit_rate);
    if (t > horizon) break;
    // Successor by inverse cdf over the off-diagonal row.
    const double u = uniform_open(rng) * exit_rate;
    double acc = 0.0;
    std::size_t next = state;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == state) continue;
      acc += gen.q[state][j];
      if (u <= acc) {
        next = j;
        break;
      }
    }
    if (next == state) {  // u landed past acc by rounding; take last positive
      for (std::size_t j = n; j-- > 0;) {
        if (j != state && gen.q[state][j] > 0.0) {
          next = j;
          break;
        }
      }
    }
    traj.jump_times.push_back(t);
    traj.states.push_back(next);
    state = next;
    if (stop_at && state == *stop_at) {
      traj.tau_z = t;
      break;
    }
  }
  return traj;
}

} // namespace

double Trajectory::cost_integral(double T, const std::vector<double>& cbar) const {
  T = std::min(T, horizon);
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    const double t = std::min(jump_times[k], T);
    total += cbar[states[k]] * (t - prev);
    prev = t;
    if (jump_times[k] >= T) return total;
  }
  total += cbar[states.back()] * (T - prev);
  return total;
}

Trajectory simulate_trajectory(const CtmdpModel& model, const DetPolicy& f,
                               std::size_t i0, double horizon,
                               std::uint64_t seed,
                               std::optional<std::size_t> stop_at) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  return run_gillespie(induced_generator(model, f), i0, horizon,
                       stream_for(seed, 0), stop_at);
}

Trajectory simulate_trajectory(const CtmdpModel& model,
                               const RandStationaryPolicy& pi, std::size_t i0,
                               double horizon, std::uint64_t seed,
                               std::optional<std::size_t> stop_at) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  return run_gillespie(induced_generator(model, pi), i0, horizon,
                       stream_for(seed, 0), stop_at);
}

namespace {

McEstimate average_cost_impl(const InducedGenerator& gen, double lambda,
                             std::size_t i0, double horizon, std::size_t n,
                             std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least 2 trajectories");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  std::vector<double> exponents(n);  // lambda * cost integral
  for (std::size_t k = 0; k < n; ++k) {
    Trajectory traj = run_gillespie(gen, i0, horizon, stream_for(seed, k), {});
    exponents[k] = lambda * traj.cost_integral(horizon, gen.c);
  }
  const double shift = *std::max_element(exponents.begin(), exponents.end());
  // Fixed index order keeps the sum bit-reproducible.
  double sum = 0.0, sumsq = 0.0;
  for (double e : exponents) {
    const double y = std::exp(e - shift);
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / double(n);
  const double var = std::max(0.0, (sumsq - sum * mean) / double(n - 1));

  McEstimate est;
  est.point = (shift + std::log(mean)) / (lambda * horizon);
  // Delta method on ln of the sample mean.
  est.std_error =
      std::sqrt(var / double(n)) / (mean * lambda * horizon);
  est.n_trajectories = n;
  est.horizon = horizon;
  est.seed = seed;
  return est;
}

} // namespace

McEstimate estimate_average_cost(const CtmdpModel& model, const DetPolicy& f,
                                 std::size_t i0, double horizon, std::size_t n,
                                 std::uint64_t seed) {
  return average_cost_impl(induced_generator(model, f), model.lambda, i0,
                           horizon, n, seed);
}

McEstimate estimate_average_cost(const CtmdpModel& model,
                                 const RandStationaryPolicy& pi,
                                 std::size_t i0, double horizon, std::size_t n,
                                 std::uint64_t seed) {
  return average_cost_impl(induced_generator(model, pi), model.lambda, i0,
                           horizon, n, seed);
}

McEstimate estimate_first_passage(const CtmdpModel& model, const DetPolicy& f,
                                  double g, std::size_t z, std::size_t i0,
                                  std::size_t n, std::uint64_t seed,
                                  double max_time) {
  if (!irreducible_under(model, f))
    throw std::runtime_error("policy not irreducible");
  const auto gen = induced_generator(model, f);
  if (max_time <= 0.0) {
    double slowest = 0.0;
    for (std::size_t i = 0; i < gen.c.size(); ++i)
      slowest = std::max(slowest, -1.0 / gen.q[i][i]);
    max_time = 1e6 * slowest;
  }
  std::vector<double> g_adjusted(gen.c.size());
  for (std::size_t i = 0; i < gen.c.size(); ++i) g_adjusted[i] = gen.c[i] - g;

  std::vector<double> exponents;
  exponents.reserve(n);
  std::size_t censored = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Trajectory traj = run_gillespie(gen, i0, max_time, stream_for(seed, k), z);
    if (!traj.tau_z) {
      ++censored;
      continue;
    }
    exponents.push_back(model.lambda *
                        traj.cost_integral(*traj.tau_z, g_adjusted));
  }
  if (exponents.empty()) throw std::runtime_error("all trajectories censored");

  const double shift = *std::max_element(exponents.begin(), exponents.end());
  double sum = 0.0, sumsq = 0.0;
  for (double e : exponents) {
    const double y = std::exp(e - shift);
    sum += y;
    sumsq += y * y;
  }
  const double m = double(exponents.size());
  const double mean = sum / m;
  const double var =
      exponents.size() > 1 ? std::max(0.0, (sumsq - sum * mean) / (m - 1.0))
                           : 0.0;

  McEstimate est;
  est.point = (shift + std::log(mean)) / model.lambda;
  est.std_error = std::sqrt(var / m) / (mean * model.lambda);
  est.n_trajectories = n;
  est.horizon = max_time;
  est.seed = seed;
  est.censored = censored;
  est.flagged = double(censored) > 0.001 * double(n);
  return est;
}

} // namespace rsac
