#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "rsac/model.hpp"

namespace rsac {

struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedModel {
  CtmdpModel model;
  std::vector<std::string> warnings;  // row re-centering, overflow risk
};

/// Parses the JSON model document. Rows with |sum| <= 1e-9 are re-centered
/// on the diagonal with a warning; larger residuals are left for
/// validate_model to reject.
LoadedModel parse_model(const std::string& json_text);
LoadedModel load_model(const std::string& path);

std::string serialize_model(const CtmdpModel& model);

using Policy = std::variant<DetPolicy, RandStationaryPolicy>;

/// Policy documents map state label -> action label, or state label ->
/// {action label: weight}.
Policy parse_policy(const std::string& json_text, const CtmdpModel& model);
Policy load_policy(const std::string& path, const CtmdpModel& model);

} // namespace rsac
