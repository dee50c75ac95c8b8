#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rsac/average_solver.hpp"
#include "rsac/first_passage.hpp"
#include "rsac/json_io.hpp"
#include "rsac/simulator.hpp"

namespace py = pybind11;
using namespace rsac;

namespace {

DetPolicy make_policy(const std::vector<std::size_t>& choice) {
  return DetPolicy{choice};
}

py::dict solution_dict(const FirstPassageSolution& sol) {
  py::dict d;
  d["g"] = sol.g;
  d["z"] = sol.z;
  d["x"] = sol.x;
  d["h"] = sol.h;
  d["policy"] = sol.policy.choice;
  d["finite"] = sol.finite;
  d["iterations"] = sol.iterations;
  return d;
}

py::dict estimate_dict(const McEstimate& est) {
  py::dict d;
  d["point"] = est.point;
  d["std_error"] = est.std_error;
  d["n_trajectories"] = est.n_trajectories;
  d["horizon"] = est.horizon;
  d["seed"] = est.seed;
  d["censored"] = est.censored;
  d["flagged"] = est.flagged;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "risk-sensitive average-cost CTMDP solver";

  py::class_<CtmdpModel>(m, "CtmdpModel")
      .def(py::init([](std::vector<std::string> states,
                       std::vector<std::vector<std::string>> actions,
                       std::vector<std::vector<std::vector<double>>> rates,
                       std::vector<std::vector<double>> costs, double lambda) {
             return CtmdpModel{std::move(states), std::move(actions),
                               std::move(rates), std::move(costs), lambda};
           }),
           py::arg("states"), py::arg("actions"), py::arg("rates"),
           py::arg("costs"), py::arg("lambda_"))
      .def_readonly("states", &CtmdpModel::states)
      .def_readonly("actions", &CtmdpModel::actions)
      .def_readonly("rates", &CtmdpModel::rates)
      .def_readonly("costs", &CtmdpModel::costs)
      .def_readwrite("lambda_", &CtmdpModel::lambda)
      .def("__repr__", [](const CtmdpModel& mdl) {
        return "<CtmdpModel n=" + std::to_string(mdl.num_states()) + ">";
      });

  m.def("parse_model", [](const std::string& text) {
    auto loaded = parse_model(text);
    return py::make_tuple(loaded.model, loaded.warnings);
  });
  m.def("load_model", [](const std::string& path) {
    auto loaded = load_model(path);
    return py::make_tuple(loaded.model, loaded.warnings);
  });
  m.def("serialize_model", &serialize_model);

  m.def("validate_model", [](const CtmdpModel& model) {
    const auto report = validate_model(model);
    py::list violations;
    for (const auto& v : report.violations)
      violations.append(py::make_tuple(v.rule, v.location, v.message));
    py::dict d;
    d["ok"] = report.ok;
    d["violations"] = violations;
    return d;
  });

  m.def("irreducible_under",
        [](const CtmdpModel& model, const std::vector<std::size_t>& f) {
          return irreducible_under(model, make_policy(f));
        });

  m.def(
      "q_factor",
      [](const CtmdpModel& model, std::size_t i, std::size_t a, double g) {
        const auto qf = q_factor(model, i, a, g);
        return py::make_tuple(qf.value, qf.finite);
      },
      py::arg("model"), py::arg("i"), py::arg("a"), py::arg("g"));

  m.def("first_passage_value",
        [](const CtmdpModel& model, const std::vector<std::size_t>& f,
           double g, std::size_t z) {
          return solution_dict(first_passage_value(model, make_policy(f), g, z));
        });
  m.def("optimal_first_passage",
        [](const CtmdpModel& model, double g, std::size_t z) {
          return solution_dict(optimal_first_passage(model, g, z));
        });

  m.def(
      "solve",
      [](const CtmdpModel& model, std::size_t z, double tol) {
        SolveOptions opts;
        opts.tol = tol;
        const auto report = solve(model, z, opts);
        py::dict d;
        d["g_star"] = report.g_star;
        d["h_star"] = report.h_star;
        d["policy"] = report.policy.choice;
        d["residual_op"] = report.residual_op;
        d["residual_hz"] = report.residual_hz;
        d["z"] = report.z;
        d["iterations"] = report.iterations;
        return d;
      },
      py::arg("model"), py::arg("z") = 0, py::arg("tol") = 1e-10);

  m.def("extract_policy",
        [](const CtmdpModel& model, double g, const std::vector<double>& h) {
          auto [f, residual] = extract_policy(model, g, h);
          return py::make_tuple(f.choice, residual);
        });

  m.def("policy_value_spectral",
        [](const CtmdpModel& model, const std::vector<std::size_t>& f) {
          return policy_value_spectral(model, make_policy(f)).value;
        });
  m.def("policy_value_risk_neutral",
        [](const CtmdpModel& model, const std::vector<std::size_t>& f) {
          return policy_value_risk_neutral(model, make_policy(f));
        });
  m.def("brute_force_optimal", [](const CtmdpModel& model) {
    const auto result = brute_force_optimal(model);
    py::dict d;
    d["policy"] = result.policy.choice;
    d["value"] = result.value;
    d["policies_evaluated"] = result.policies_evaluated;
    d["policies_skipped"] = result.policies_skipped;
    return d;
  });

  m.def(
      "simulate_trajectory",
      [](const CtmdpModel& model, const std::vector<std::size_t>& f,
         std::size_t i0, double horizon, std::uint64_t seed) {
        const auto traj =
            simulate_trajectory(model, make_policy(f), i0, horizon, seed);
        py::dict d;
        d["initial_state"] = traj.initial_state;
        d["jump_times"] = traj.jump_times;
        d["states"] = traj.states;
        d["horizon"] = traj.horizon;
        return d;
      },
      py::arg("model"), py::arg("policy"), py::arg("i0"), py::arg("horizon"),
      py::arg("seed") = 42);

  m.def(
      "estimate_average_cost",
      [](const CtmdpModel& model, const std::vector<std::size_t>& f,
         std::size_t i0, double horizon, std::size_t n, std::uint64_t seed) {
        return estimate_dict(
            estimate_average_cost(model, make_policy(f), i0, horizon, n, seed));
      },
      py::arg("model"), py::arg("policy"), py::arg("i0") = 0,
      py::arg("horizon") = 200.0, py::arg("n") = 10000, py::arg("seed") = 42);
  m.def(
      "estimate_first_passage",
      [](const CtmdpModel& model, const std::vector<std::size_t>& f, double g,
         std::size_t z, std::size_t i0, std::size_t n, std::uint64_t seed,
         double max_time) {
        return estimate_dict(estimate_first_passage(model, make_policy(f), g,
                                                    z, i0, n, seed, max_time));
      },
      py::arg("model"), py::arg("policy"), py::arg("g"), py::arg("z"),
      py::arg("i0"), py::arg("n") = 100000, py::arg("seed") = 42,
      py::arg("max_time") = 0.0);
}
