#include "rsac/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

namespace rsac {

namespace {

constexpr double kRowSumTol = 1e-12;

// BFS reachability over an adjacency structure given by an edge predicate.
template <typename HasEdge>
bool strongly_connected(std::size_t n, HasEdge has_edge) {
  if (n <= 1) return true;
  auto reaches_all = [&](std::size_t start, bool forward) {
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> frontier;
    seen[start] = 1;
    frontier.push(start);
    std::size_t count = 1;
    while (!frontier.empty()) {
      std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) continue;
        bool edge = forward ? has_edge(u, v) : has_edge(v, u);
        if (edge) {
          seen[v] = 1;
          ++count;
          frontier.push(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(0, true) && reaches_all(0, false);
}

} // namespace

double CtmdpModel::min_cost() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : costs)
    for (double c : row) m = std::min(m, c);
  return m;
}

double CtmdpModel::max_cost() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : costs)
    for (double c : row) m = std::max(m, c);
  return m;
}

int CtmdpModel::state_index(const std::string& label) const {
  auto it = std::find(states.begin(), states.end(), label);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int CtmdpModel::action_index(std::size_t i, const std::string& label) const {
  const auto& row = actions[i];
  auto it = std::find(row.begin(), row.end(), label);
  return it == row.end() ? -1 : static_cast<int>(it - row.begin());
}

ValidationReport validate_model(const CtmdpModel& model) {
  ValidationReport report;
  auto fail = [&](std::string rule, std::string loc, std::string msg) {
    report.ok = false;
    report.violations.push_back(
        {std::move(rule), std::move(loc), std::move(msg)});
  };

  const std::size_t n = model.num_states();
  if (n == 0) {
    fail("nonempty-states", "states", "at least one state is required");
    return report;
  }
  if (model.actions.size() != n || model.rates.size() != n ||
      model.costs.size() != n) {
    fail("shape", "model",
         "actions, rates and costs must have one entry per state");
    return report;
  }
  if (!(model.lambda > 0.0) || !std::isfinite(model.lambda))
    fail("lambda-positive", "lambda", "lambda must be a positive real");

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = model.actions[i].size();
    if (m == 0) {
      fail("nonempty-actions", fmt::format("state {}", model.states[i]),
           "empty action set");
      continue;
    }
    if (model.rates[i].size() != m || model.costs[i].size() != m) {
      fail("shape", fmt::format("state {}", model.states[i]),
           "rates/costs rows must match the action count");
      continue;
    }
    for (std::size_t a = 0; a < m; ++a) {
      const auto& row = model.rates[i][a];
      auto loc = fmt::format("state {} action {}", model.states[i],
                             model.actions[i][a]);
      if (row.size() != n) {
        fail("shape", loc, "rate row must have one entry per state");
        continue;
      }
      if (!std::isfinite(model.costs[i][a]))
        fail("finite", loc, "cost is not finite");
      double sum = 0.0;
      bool finite = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(row[j])) {
          finite = false;
          break;
        }
        sum += row[j];
        if (j != i && row[j] < 0.0)
          fail("offdiag-nonneg", loc,
               fmt::format("rate to {} is negative", model.states[j]));
      }
      if (!finite) {
        fail("finite", loc, "rate row contains a non-finite entry");
        continue;
      }
      if (std::abs(sum) > kRowSumTol)
        fail("row-sum", loc, fmt::format("row sum {} != 0", sum));
      if (n >= 2 && !(row[i] < 0.0))
        fail("absorbing-action", loc,
             "zero exit rate makes the state absorbing under this action");
    }
  }
  if (!report.ok) return report;

  // Cheap necessary condition: union support graph strongly connected.
  if (n >= 2) {
    auto union_edge = [&](std::size_t i, std::size_t j) {
      if (i == j) return false;
      for (std::size_t a = 0; a < model.num_actions(i); ++a)
        if (model.rates[i][a][j] > 0.0) return true;
      return false;
    };
    if (!strongly_connected(n, union_edge))
      fail("union-irreducibility", "model",
           "support graph over all actions is not strongly connected");
  }
  return report;
}

namespace {

InducedGenerator induce(const CtmdpModel& model,
                        const std::vector<std::vector<double>>& weights) {
  const std::size_t n = model.num_states();
  InducedGenerator out;
  out.q.assign(n, std::vector<double>(n, 0.0));
  out.c.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < model.num_actions(i); ++a) {
      const double w = weights[i][a];
      if (w == 0.0) continue;
      out.c[i] += w * model.costs[i][a];
      for (std::size_t j = 0; j < n; ++j)
        out.q[i][j] += w * model.rates[i][a][j];
    }
  }
  return out;
}

} // namespace

InducedGenerator induced_generator(const CtmdpModel& model,
                                   const DetPolicy& f) {
  const std::size_t n = model.num_states();
  if (f.choice.size() != n)
    throw std::invalid_argument("policy incompatible with model");
  std::vector<std::vector<double>> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (f.choice[i] >= model.num_actions(i))
      throw std::invalid_argument("policy incompatible with model");
    weights[i].assign(model.num_actions(i), 0.0);
    weights[i][f.choice[i]] = 1.0;
  }
  return induce(model, weights);
}

InducedGenerator induced_generator(const CtmdpModel& model,
                                   const RandStationaryPolicy& pi) {
  const std::size_t n = model.num_states();
  if (pi.weights.size() != n)
    throw std::invalid_argument("policy incompatible with model");
  for (std::size_t i = 0; i < n; ++i) {
    if (pi.weights[i].size() != model.num_actions(i))
      throw std::invalid_argument("policy incompatible with model");
    double sum = 0.0;
    for (double w : pi.weights[i]) {
      if (w < 0.0) throw std::invalid_argument("policy incompatible with model");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("policy incompatible with model");
  }
  return induce(model, pi.weights);
}

bool irreducible_under(const CtmdpModel& model, const DetPolicy& f) {
  const std::size_t n = model.num_states();
  if (f.choice.size() != n)
    throw std::invalid_argument("policy incompatible with model");
  return strongly_connected(n, [&](std::size_t i, std::size_t j) {
    return i != j && model.rates[i][f.choice[i]][j] > 0.0;
  });
}

} // namespace rsac
