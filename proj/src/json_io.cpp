#include "rsac/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace rsac {

using nlohmann::json;

namespace {

constexpr double kLoadRowSumTol = 1e-9;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError(fmt::format("cannot open {}", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

LoadedModel parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(fmt::format("model is not valid JSON: {}", e.what()));
  }
  LoadedModel out;
  CtmdpModel& m = out.model;
  try {
    doc.at("states").get_to(m.states);
    doc.at("actions").get_to(m.actions);
    doc.at("rates").get_to(m.rates);
    doc.at("costs").get_to(m.costs);
    doc.at("lambda").get_to(m.lambda);
  } catch (const json::exception& e) {
    throw ModelFormatError(fmt::format("malformed model document: {}", e.what()));
  }

  // Small row-sum residuals are re-centered on the diagonal.
  for (std::size_t i = 0; i < m.rates.size(); ++i) {
    for (std::size_t a = 0; a < m.rates[i].size(); ++a) {
      auto& row = m.rates[i][a];
      if (row.size() != m.states.size() || i >= m.states.size()) continue;
      double sum = 0.0;
      for (double v : row) sum += v;
      // Residuals below 1e-13 are summation noise; leave the row bit-exact.
      if (std::abs(sum) > 1e-13 && std::abs(sum) <= kLoadRowSumTol &&
          std::isfinite(sum)) {
        row[i] -= sum;
        out.warnings.push_back(fmt::format(
            "state {} action {}: rate row re-centered by {}", i, a, sum));
      }
    }
  }

  double cmax = 0.0;
  for (const auto& row : m.costs)
    for (double c : row) cmax = std::max(cmax, std::abs(c));
  if (m.lambda * cmax > 200.0)
    out.warnings.push_back(fmt::format(
        "lambda*max|c| = {} risks overflow in exp(lambda h) arithmetic",
        m.lambda * cmax));
  return out;
}

LoadedModel load_model(const std::string& path) {
  return parse_model(read_file(path));
}

std::string serialize_model(const CtmdpModel& model) {
  json doc;
  doc["states"] = model.states;
  doc["actions"] = model.actions;
  doc["rates"] = model.rates;
  doc["costs"] = model.costs;
  doc["lambda"] = model.lambda;
  return doc.dump(2);
}

Policy parse_policy(const std::string& json_text, const CtmdpModel& model) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(fmt::format("policy is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object())
    throw ModelFormatError("policy document must be a JSON object");

  const std::size_t n = model.num_states();
  bool randomized = false;
  for (const auto& [key, value] : doc.items()) {
    (void)key;
    if (value.is_object()) randomized = true;
  }

  auto require_state = [&](const std::string& label) {
    const int i = model.state_index(label);
    if (i < 0)
      throw ModelFormatError(fmt::format("unknown state label '{}'", label));
    return std::size_t(i);
  };
  auto require_action = [&](std::size_t i, const std::string& label) {
    const int a = model.action_index(i, label);
    if (a < 0)
      throw ModelFormatError(fmt::format("unknown action '{}' at state '{}'",
                                         label, model.states[i]));
    return std::size_t(a);
  };

  if (!randomized) {
    DetPolicy f;
    f.choice.assign(n, 0);
    std::vector<char> seen(n, 0);
    for (const auto& [key, value] : doc.items()) {
      const std::size_t i = require_state(key);
      if (!value.is_string())
        throw ModelFormatError("deterministic policy entries must be strings");
      f.choice[i] = require_action(i, value.get<std::string>());
      seen[i] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!seen[i])
        throw ModelFormatError(
            fmt::format("policy missing state '{}'", model.states[i]));
    return f;
  }

  RandStationaryPolicy pi;
  pi.weights.resize(n);
  std::vector<char> seen(n, 0);
  for (const auto& [key, value] : doc.items()) {
    const std::size_t i = require_state(key);
    pi.weights[i].assign(model.num_actions(i), 0.0);
    if (value.is_string()) {
      pi.weights[i][require_action(i, value.get<std::string>())] = 1.0;
    } else if (value.is_object()) {
      for (const auto& [alabel, w] : value.items())
        pi.weights[i][require_action(i, alabel)] = w.get<double>();
    } else {
      throw ModelFormatError("policy entries must be strings or weight maps");
    }
    seen[i] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      throw ModelFormatError(
          fmt::format("policy missing state '{}'", model.states[i]));
  return pi;
}

Policy load_policy(const std::string& path, const CtmdpModel& model) {
  return parse_policy(read_file(path), model);
}

} // namespace rsac
