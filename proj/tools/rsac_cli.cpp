#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsac/average_solver.hpp"
#include "rsac/json_io.hpp"
#include "rsac/simulator.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidModel = 2;
constexpr int kExitSolverError = 3;
constexpr int kExitBadArguments = 4;

json policy_to_json(const rsac::CtmdpModel& model, const rsac::DetPolicy& f) {
  json out = json::object();
  for (std::size_t i = 0; i < model.num_states(); ++i)
    out[model.states[i]] = model.actions[i][f.choice[i]];
  return out;
}

json validation_to_json(const rsac::ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations)
    violations.push_back(
        {{"rule", v.rule}, {"location", v.location}, {"message", v.message}});
  return {{"ok", report.ok}, {"violations", violations}};
}

json solve_to_json(const rsac::CtmdpModel& model,
                   const rsac::SolveReport& report) {
  json trace = json::array();
  for (const auto& [lo, hi] : report.bracket_trace) trace.push_back({lo, hi});
  return {{"g_star", report.g_star},
          {"h_star", report.h_star},
          {"policy", policy_to_json(model, report.policy)},
          {"residual_op", report.residual_op},
          {"residual_hz", report.residual_hz},
          {"z", model.states[report.z]},
          {"iterations", report.iterations},
          {"bracket_trace", trace}};
}

json estimate_to_json(const rsac::McEstimate& est) {
  return {{"point", est.point},
          {"std_error", est.std_error},
          {"n_trajectories", est.n_trajectories},
          {"horizon", est.horizon},
          {"seed", est.seed},
          {"censored", est.censored},
          {"flagged", est.flagged}};
}

// note: elapsed_s is stamped by main() so every exit path carries it
struct Options {
  std::string command;
  std::string model_path;
  std::string z_label;
  std::string i0_label;
  std::string policy_path;
  double tol = 1e-10;
  std::optional<double> lambda_override;
  std::uint64_t seed = 42;
  std::size_t n = 10000;
  double horizon = 200.0;
  std::vector<double> lambda_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  std::optional<double> passage_g;
  std::string passage_to;
};

int run(const Options& opt, json& report) {
  rsac::LoadedModel loaded;
  try {
    loaded = rsac::load_model(opt.model_path);
  } catch (const rsac::ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    report["error"] = e.what();
    return kExitInvalidModel;
  }
  if (opt.lambda_override) loaded.model.lambda = *opt.lambda_override;
  rsac::CtmdpModel& model = loaded.model;
  report["warnings"] = loaded.warnings;

  const auto validation = rsac::validate_model(model);
  if (opt.command == "validate") {
    report["results"] = validation_to_json(validation);
    if (!validation.ok) {
      std::cerr << "error: model is invalid ("
                << validation.violations.size() << " violations)\n";
      return kExitInvalidModel;
    }
    return kExitOk;
  }
  if (!validation.ok) {
    report["results"] = validation_to_json(validation);
    std::cerr << "error: model is invalid; run the validate command for "
                 "details\n";
    return kExitInvalidModel;
  }

  auto resolve_state = [&](const std::string& label,
                           std::size_t fallback) -> std::size_t {
    if (label.empty()) return fallback;
    const int idx = model.state_index(label);
    if (idx < 0) throw rsac::ModelFormatError("unknown state label '" + label + "'");
    return std::size_t(idx);
  };

  try {
    const std::size_t z = resolve_state(opt.z_label, 0);
    const std::size_t i0 = resolve_state(opt.i0_label, 0);

    if (opt.command == "solve") {
      rsac::SolveOptions sopts;
      sopts.tol = opt.tol;
      report["results"] = solve_to_json(model, rsac::solve(model, z, sopts));
    } else if (opt.command == "eval") {
      if (opt.policy_path.empty())
        throw rsac::ModelFormatError("eval requires --policy");
      auto policy = rsac::load_policy(opt.policy_path, model);
      rsac::InducedGenerator gen =
          std::holds_alternative<rsac::DetPolicy>(policy)
              ? rsac::induced_generator(model, std::get<rsac::DetPolicy>(policy))
              : rsac::induced_generator(
                    model, std::get<rsac::RandStationaryPolicy>(policy));
      if (std::holds_alternative<rsac::DetPolicy>(policy) &&
          !rsac::irreducible_under(model, std::get<rsac::DetPolicy>(policy)))
        throw std::runtime_error("policy not irreducible");
      report["results"] = {
          {"spectral", rsac::spectral_value(gen, model.lambda)},
          {"risk_neutral", rsac::risk_neutral_value(gen)}};
    } else if (opt.command == "simulate") {
      rsac::DetPolicy f;
      if (!opt.policy_path.empty()) {
        auto policy = rsac::load_policy(opt.policy_path, model);
        if (std::holds_alternative<rsac::RandStationaryPolicy>(policy)) {
          const auto& pi = std::get<rsac::RandStationaryPolicy>(policy);
          report["results"] = estimate_to_json(rsac::estimate_average_cost(
              model, pi, i0, opt.horizon, opt.n, opt.seed));
          return kExitOk;
        }
        f = std::get<rsac::DetPolicy>(policy);
      } else {
        rsac::SolveOptions sopts;
        sopts.tol = opt.tol;
        f = rsac::solve(model, z, sopts).policy;
        report["note"] = "no policy file given; simulating the solver's f*";
      }
      if (opt.passage_g || !opt.passage_to.empty()) {
        const std::size_t zt = resolve_state(opt.passage_to, z);
        const double g = opt.passage_g.value_or(0.0);
        report["results"] = estimate_to_json(rsac::estimate_first_passage(
            model, f, g, zt, i0, opt.n, opt.seed));
      } else {
        report["results"] = estimate_to_json(rsac::estimate_average_cost(
            model, f, i0, opt.horizon, opt.n, opt.seed));
      }
    } else if (opt.command == "brute") {
      const auto brute = rsac::brute_force_optimal(model);
      rsac::SolveOptions sopts;
      sopts.tol = opt.tol;
      const auto solved = rsac::solve(model, z, sopts);
      report["results"] = {
          {"brute_value", brute.value},
          {"brute_policy", policy_to_json(model, brute.policy)},
          {"policies_evaluated", brute.policies_evaluated},
          {"policies_skipped", brute.policies_skipped},
          {"solve_g_star", solved.g_star},
          {"agreement_delta", std::abs(brute.value - solved.g_star)}};
    } else if (opt.command == "sweep") {
      json rows = json::array();
      for (double lam : opt.lambda_grid) {
        rsac::CtmdpModel m = model;
        m.lambda = lam;
        rsac::SolveOptions sopts;
        sopts.tol = opt.tol;
        const auto solved = rsac::solve(m, z, sopts);
        rows.push_back({{"lambda", lam},
                        {"g_star", solved.g_star},
                        {"policy", policy_to_json(m, solved.policy)}});
      }
      report["results"] = {{"sweep", rows}};
    }
  } catch (const rsac::ModelFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    report["error"] = e.what();
    return kExitBadArguments;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    report["error"] = e.what();
    return kExitSolverError;
  }

  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk-sensitive average-cost CTMDP solver"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", opt.model_path, "model JSON file")->required();
    sub->add_option("--z", opt.z_label, "reference state label (default: first)");
    sub->add_option("--tol", opt.tol, "bisection bracket tolerance");
    sub->add_option("--lambda", opt.lambda_override,
                    "override the model's risk coefficient");
    sub->add_option("--seed", opt.seed, "RNG seed (default 42)");
    return sub;
  };

  add_common(app.add_subcommand("validate", "check model invariants"));
  add_common(app.add_subcommand("solve", "compute g_star, h_star, f*"));
  auto* eval = add_common(
      app.add_subcommand("eval", "spectral + risk-neutral policy value"));
  eval->add_option("--policy", opt.policy_path, "policy JSON file")->required();
  auto* sim = add_common(
      app.add_subcommand("simulate", "Monte Carlo cost estimation"));
  sim->add_option("--policy", opt.policy_path, "policy JSON file");
  sim->add_option("--i0", opt.i0_label, "initial state label");
  sim->add_option("--n", opt.n, "number of trajectories");
  sim->add_option("--horizon", opt.horizon, "time horizon per trajectory");
  sim->add_option("--g", opt.passage_g,
                  "estimate the first-passage functional at this g");
  sim->add_option("--passage-to", opt.passage_to,
                  "first-passage target state (default: --z)");
  add_common(app.add_subcommand("brute", "exhaustive policy enumeration"));
  auto* sweep = add_common(
      app.add_subcommand("sweep", "solve over a lambda grid"));
  sweep->add_option("--grid", opt.lambda_grid, "lambda grid")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    json report = {{"schema_version", 1}, {"error", "bad arguments"}};
    std::cerr << "error: " << e.what() << "\n";
    std::cout << report.dump(2) << "\n";
    return e.get_exit_code() == 0 ? 0 : kExitBadArguments;
  }

  opt.command = app.get_subcommands().front()->get_name();
  json report = {{"schema_version", 1},
                 {"command", opt.command},
                 {"config",
                  {{"model", opt.model_path},
                   {"z", opt.z_label},
                   {"tol", opt.tol},
                   {"seed", opt.seed}}}};
  const auto t0 = std::chrono::steady_clock::now();
  const int code = run(opt, report);
  report["elapsed_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << report.dump(2) << "\n";
  return code;
}
