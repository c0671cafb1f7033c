// Python bindings for the main operations: single-relay optima, sum-power
// allocation, N-relay placement, the as-you-go MDP, and deployment runs.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relayline/channel.hpp"
#include "relayline/deploy.hpp"
#include "relayline/io.hpp"
#include "relayline/mdp.hpp"
#include "relayline/placement.hpp"
#include "relayline/single_relay.hpp"
#include "relayline/sum_power.hpp"

namespace py = pybind11;
using namespace relayline;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Achievable rates, relay placement, and as-you-go deployment on line "
      "networks";

  m.def("awgn_capacity", &awgn_capacity, py::arg("snr"));

  py::class_<PathLossModel>(m, "PathLossModel")
      .def_static("exponential", &PathLossModel::exponential, py::arg("rho"))
      .def_static("power_law", &PathLossModel::power_law, py::arg("eta"))
      .def_static("modified_power_law", &PathLossModel::modified_power_law,
                  py::arg("eta"), py::arg("reference"));
  m.def("gain", &gain, py::arg("model"), py::arg("distance"));

  py::class_<LinePlacement>(m, "LinePlacement")
      .def(py::init<double, std::vector<double>>(), py::arg("length"),
           py::arg("relays"))
      .def_readonly("length", &LinePlacement::length)
      .def_readonly("relays", &LinePlacement::relays)
      .def("node_count", &LinePlacement::node_count)
      .def("position", &LinePlacement::position, py::arg("node"));

  py::class_<GainMatrix>(m, "GainMatrix")
      .def(py::init<std::size_t>(), py::arg("node_count"))
      .def_static("from_placement", &GainMatrix::from_placement,
                  py::arg("placement"), py::arg("model"))
      .def("node_count", &GainMatrix::node_count)
      .def("get", [](const GainMatrix& g, std::size_t i,
                     std::size_t j) { return g(i, j); })
      .def("set", [](GainMatrix& g, std::size_t i, std::size_t j,
                     double value) { g(i, j) = value; });

  py::class_<PowerMatrix>(m, "PowerMatrix")
      .def(py::init<std::size_t>(), py::arg("node_count"))
      .def("node_count", &PowerMatrix::node_count)
      .def("total", &PowerMatrix::total)
      .def("get", [](const PowerMatrix& p, std::size_t i,
                     std::size_t j) { return p(i, j); })
      .def("set", [](PowerMatrix& p, std::size_t i, std::size_t j,
                     double value) { p(i, j) = value; });

  m.def("achievable_rate_terms", &achievable_rate_terms, py::arg("gains"),
        py::arg("powers"), py::arg("sigma2") = 1.0);
  m.def("achievable_rate", &achievable_rate, py::arg("gains"),
        py::arg("powers"), py::arg("sigma2") = 1.0);

  py::class_<SingleRelaySolution>(m, "SingleRelaySolution")
      .def_readonly("regime", &SingleRelaySolution::regime)
      .def_readonly("x_star", &SingleRelaySolution::x_star)
      .def_readonly("alpha_star", &SingleRelaySolution::alpha_star)
      .def_readonly("rate", &SingleRelaySolution::rate)
      .def_readonly("p_over_sigma2", &SingleRelaySolution::p_over_sigma2);
  m.def("solve_exponential_node_power", &solve_exponential_node_power,
        py::arg("lambda_"), py::arg("p_over_sigma2") = 1.0);
  m.def("solve_powerlaw_node_power", &solve_powerlaw_node_power,
        py::arg("eta"), py::arg("p_over_sigma2") = 1.0);
  m.def("solve_modified_powerlaw_node_power",
        &solve_modified_powerlaw_node_power, py::arg("eta"),
        py::arg("b_over_l"), py::arg("p_over_sigma2") = 1.0);
  m.def("single_relay_rate", &single_relay_rate, py::arg("alpha"),
        py::arg("relay_position"), py::arg("model"), py::arg("length"),
        py::arg("p_over_sigma2") = 1.0);
  m.def("alpha_threshold", &alpha_threshold, py::arg("g01"), py::arg("g02"),
        py::arg("g12"));

  py::class_<PowerAllocation>(m, "PowerAllocation")
      .def_readonly("gamma", &PowerAllocation::gamma)
      .def_readonly("powers", &PowerAllocation::powers)
      .def_readonly("total_power", &PowerAllocation::total_power)
      .def_readonly("net_attenuation", &PowerAllocation::net_attenuation)
      .def_readonly("rate", &PowerAllocation::rate);
  py::class_<DualCertificate>(m, "DualCertificate")
      .def_readonly("theta", &DualCertificate::theta)
      .def_readonly("mu", &DualCertificate::mu)
      .def_readonly("zeta", &DualCertificate::zeta)
      .def_readonly("gamma", &DualCertificate::gamma);
  m.def("net_attenuation", &net_attenuation, py::arg("source_gains"));
  m.def("allocate_sum_power", &allocate_sum_power, py::arg("source_gains"),
        py::arg("total_power"), py::arg("sigma2") = 1.0);
  m.def("dual_certificate", &dual_certificate, py::arg("source_gains"),
        py::arg("total_power"));
  m.def("uniform_placement_attenuation", &uniform_placement_attenuation,
        py::arg("relay_count"), py::arg("lambda_"));
  m.def("uniform_placement_rate", &uniform_placement_rate,
        py::arg("relay_count"), py::arg("lambda_"),
        py::arg("pt_over_sigma2") = 1.0);
  py::class_<SingleRelaySumPowerSolution>(m, "SingleRelaySumPowerSolution")
      .def_readonly("y1_over_l", &SingleRelaySumPowerSolution::y1_over_l)
      .def_readonly("regime", &SingleRelaySumPowerSolution::regime)
      .def_readonly("p_01", &SingleRelaySumPowerSolution::p_01)
      .def_readonly("p_02", &SingleRelaySumPowerSolution::p_02)
      .def_readonly("p_12", &SingleRelaySumPowerSolution::p_12)
      .def_readonly("rate", &SingleRelaySumPowerSolution::rate);
  m.def("single_relay_sum_power", &single_relay_sum_power, py::arg("lambda_"),
        py::arg("total_power") = 1.0, py::arg("sigma2") = 1.0);

  py::class_<PlacementProblem>(m, "PlacementProblem")
      .def(py::init<>())
      .def(py::init([](int relay_count, double lambda) {
             return PlacementProblem{relay_count, lambda};
           }),
           py::arg("relay_count"), py::arg("lambda_"))
      .def_readwrite("relay_count", &PlacementProblem::relay_count)
      .def_readwrite("lambda_", &PlacementProblem::lambda);
  py::class_<PlacementSolution>(m, "PlacementSolution")
      .def_readonly("z", &PlacementSolution::z)
      .def_readonly("y_over_l", &PlacementSolution::y_over_l)
      .def_readonly("objective", &PlacementSolution::objective)
      .def_readonly("gain", &PlacementSolution::gain)
      .def_readonly("converged", &PlacementSolution::converged)
      .def_readonly("sweeps", &PlacementSolution::sweeps)
      .def_readonly("seed_index", &PlacementSolution::seed_index)
      .def("rate", &PlacementSolution::rate, py::arg("pt_over_sigma2") = 1.0);
  m.def(
      "solve_placement",
      [](const PlacementProblem& problem) { return solve_placement(problem); },
      py::arg("problem"));
  py::class_<RateTableRow>(m, "RateTableRow")
      .def_readonly("relay_count", &RateTableRow::relay_count)
      .def_readonly("rate", &RateTableRow::rate)
      .def_readonly("gain", &RateTableRow::gain);
  m.def("rate_vs_N_table", &rate_vs_N_table, py::arg("lambda_"),
        py::arg("n_max"), py::arg("pt_over_sigma2") = 1.0);

  py::class_<MdpConfig>(m, "MdpConfig")
      .def(py::init<>())
      .def(py::init([](double Lambda, double xi, double state_step,
                       double action_step, double a_max, double tol,
                       int iter_cap) {
             MdpConfig cfg;
             cfg.Lambda = Lambda;
             cfg.xi = xi;
             cfg.state_step = state_step;
             cfg.action_step = action_step;
             cfg.a_max = a_max;
             cfg.tol = tol;
             cfg.iter_cap = iter_cap;
             return cfg;
           }),
           py::arg("Lambda"), py::arg("xi") = 0.01,
           py::arg("state_step") = 0.01, py::arg("action_step") = 0.001,
           py::arg("a_max") = 0.0, py::arg("tol") = 1e-9,
           py::arg("iter_cap") = 100000)
      .def_readwrite("Lambda", &MdpConfig::Lambda)
      .def_readwrite("xi", &MdpConfig::xi)
      .def_readwrite("state_step", &MdpConfig::state_step)
      .def_readwrite("action_step", &MdpConfig::action_step)
      .def_readwrite("a_max", &MdpConfig::a_max)
      .def_readwrite("tol", &MdpConfig::tol)
      .def_readwrite("iter_cap", &MdpConfig::iter_cap)
      .def("resolved_a_max", &MdpConfig::resolved_a_max)
      .def("state_count", &MdpConfig::state_count)
      .def("grid_state", &MdpConfig::grid_state, py::arg("index"));
  py::class_<MdpSolution>(m, "MdpSolution")
      .def_readonly("config", &MdpSolution::config)
      .def_readonly("states", &MdpSolution::states)
      .def_readonly("J", &MdpSolution::J)
      .def_readonly("policy", &MdpSolution::policy)
      .def_readonly("theta", &MdpSolution::theta)
      .def_readonly("iterations", &MdpSolution::iterations)
      .def_readonly("final_sup_diff", &MdpSolution::final_sup_diff)
      .def_readonly("converged", &MdpSolution::converged)
      .def_readonly("monotone_iterates", &MdpSolution::monotone_iterates);
  m.def("solve_mdp", &solve_mdp, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("transition_index", &transition_index, py::arg("s"), py::arg("a"),
        py::arg("config"));

  py::class_<DeploymentTrace>(m, "DeploymentTrace")
      .def_readonly("line_length", &DeploymentTrace::line_length)
      .def_readonly("placements", &DeploymentTrace::placements)
      .def_readonly("states", &DeploymentTrace::states)
      .def_readonly("relay_count", &DeploymentTrace::relay_count)
      .def_readonly("h_sequential", &DeploymentTrace::h_sequential)
      .def_readonly("h_offline", &DeploymentTrace::h_offline)
      .def_readonly("e_percent", &DeploymentTrace::e_percent);
  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("Lambda", &ComparisonReport::Lambda)
      .def_readonly("xi", &ComparisonReport::xi)
      .def_readonly("sample_count", &ComparisonReport::sample_count)
      .def_readonly("seed", &ComparisonReport::seed)
      .def_readonly("mean_percent_error",
                    &ComparisonReport::mean_percent_error)
      .def_readonly("mean_relays", &ComparisonReport::mean_relays)
      .def_readonly("zero_relay_cases", &ComparisonReport::zero_relay_cases)
      .def_readonly("max_percent_error", &ComparisonReport::max_percent_error);
  py::class_<MonteCarloResult>(m, "MonteCarloResult")
      .def_readonly("report", &MonteCarloResult::report)
      .def_readonly("traces", &MonteCarloResult::traces);
  m.def("deploy", &deploy, py::arg("policy"), py::arg("line_length"),
        py::arg("Lambda"), py::arg("with_offline") = true);
  m.def("offline_oracle", &offline_oracle, py::arg("line_length"),
        py::arg("relay_count"), py::arg("Lambda"));
  m.def("line_net_attenuation", &line_net_attenuation, py::arg("relays"),
        py::arg("length"), py::arg("rho"));
  m.def("sample_line_length", &sample_line_length, py::arg("seed"),
        py::arg("sample_index"));
  m.def("monte_carlo_compare", &monte_carlo_compare, py::arg("policy"),
        py::arg("samples"), py::arg("seed"), py::arg("with_offline") = true,
        py::call_guard<py::gil_scoped_release>());

  m.def("format_policy_csv", &format_policy_csv, py::arg("solution"));
  m.def("format_trace_csv", &format_trace_csv, py::arg("traces"));
  m.def("format_report_json", &format_report_json, py::arg("report"));
}
