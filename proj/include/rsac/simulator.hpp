#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rsac/model.hpp"

namespace rsac {

/// One realized jump chain up to a horizon. jump_times[k] is T_{k+1};
/// states[0] is the initial state, states[k+1] the state entered at
/// jump_times[k].
struct Trajectory {
  std::size_t initial_state = 0;
  std::vector<double> jump_times;   // strictly increasing
  std::vector<std::size_t> states;  // visited states, size jump_times+1
  double horizon = 0.0;
  std::optional<double> tau_z;      // first t >= T_1 with state == z

  /// Exact piecewise-linear accumulated cost \int_0^T cbar dt, T <= horizon.
  double cost_integral(double T, const std::vector<double>& cbar) const;
};

struct McEstimate {
  double point = 0.0;
  double std_error = 0.0;
  std::size_t n_trajectories = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::size_t censored = 0;  // first-passage runs exceeding max_time
  bool flagged = false;      // censoring above 0.1%
};

Trajectory simulate_trajectory(const CtmdpModel& model, const DetPolicy& f,
                               std::size_t i0, double horizon,
                               std::uint64_t seed,
                               std::optional<std::size_t> stop_at = {});
Trajectory simulate_trajectory(const CtmdpModel& model,
                               const RandStationaryPolicy& pi, std::size_t i0,
                               double horizon, std::uint64_t seed,
                               std::optional<std::size_t> stop_at = {});

/// (1/(lambda T)) ln of the sample mean of exp(lambda * cost integral),
/// max-shifted; std error by the delta method.
McEstimate estimate_average_cost(const CtmdpModel& model, const DetPolicy& f,
                                 std::size_t i0, double horizon, std::size_t n,
                                 std::uint64_t seed);
McEstimate estimate_average_cost(const CtmdpModel& model,
                                 const RandStationaryPolicy& pi,
                                 std::size_t i0, double horizon, std::size_t n,
                                 std::uint64_t seed);

/// Monte Carlo h_g(i0, f): mean of exp(lambda \int_0^{tau_z} (c - g) dt).
/// max_time <= 0 selects the default cap of 1e6 x the slowest mean
/// holding time.
McEstimate estimate_first_passage(const CtmdpModel& model, const DetPolicy& f,
                                  double g, std::size_t z, std::size_t i0,
                                  std::size_t n, std::uint64_t seed,
                                  double max_time = 0.0);

} // namespace rsac
