#pragma once

#include <string>
#include <vector>

namespace rsac {

/// Finite-state controlled jump chain: per-state action sets, transition
/// rate rows q[i][a][.], cost rates c[i][a], and the risk coefficient
/// lambda of the exponential utility.
struct CtmdpModel {
  std::vector<std::string> states;               // n labels
  std::vector<std::vector<std::string>> actions; // per state, m_i labels
  // rates[i][a][j]: off-diagonal >= 0, rows sum to 0
  std::vector<std::vector<std::vector<double>>> rates;
  std::vector<std::vector<double>> costs;        // costs[i][a]
  double lambda = 1.0;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_actions(std::size_t i) const { return actions[i].size(); }

  double min_cost() const;
  double max_cost() const;
  int state_index(const std::string& label) const; // -1 if absent
  int action_index(std::size_t i, const std::string& label) const;
};

/// One action index per state.
struct DetPolicy {
  std::vector<std::size_t> choice;

  bool operator==(const DetPolicy&) const = default;
};

/// One probability row over actions per state.
struct RandStationaryPolicy {
  std::vector<std::vector<double>> weights;
};

struct Violation {
  std::string rule;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
};

ValidationReport validate_model(const CtmdpModel& model);

/// Policy-averaged generator row and cost vector. Deterministic policies
/// are the degenerate case.
struct InducedGenerator {
  std::vector<std::vector<double>> q; // n x n, rows sum to 0
  std::vector<double> c;              // n
};

InducedGenerator induced_generator(const CtmdpModel& model, const DetPolicy& f);
InducedGenerator induced_generator(const CtmdpModel& model,
                                   const RandStationaryPolicy& pi);

/// Strong connectivity of {(i,j): j != i, q(j|i,f) > 0}. True for n = 1.
bool irreducible_under(const CtmdpModel& model, const DetPolicy& f);

} // namespace rsac
