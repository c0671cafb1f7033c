// Command-line front end: single-relay placement, N-relay placement under a
// sum power budget, MDP policy solving, and as-you-go deployment simulation.
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relayline/channel.hpp"
#include "relayline/deploy.hpp"
#include "relayline/io.hpp"
#include "relayline/mdp.hpp"
#include "relayline/placement.hpp"
#include "relayline/single_relay.hpp"

namespace {

using relayline::format_fixed;

struct Sweep {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

bool parse_sweep(const std::string& text, Sweep& sweep) {
  char tail = '\0';
  const int got = std::sscanf(text.c_str(), "%lf:%lf:%d%c", &sweep.lo,
                              &sweep.hi, &sweep.count, &tail);
  return got == 3 && sweep.count >= 2 && sweep.hi >= sweep.lo;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    relayline::write_text_file(out_path, text);
  }
}

struct SingleRelayArgs {
  std::string model;
  double lambda = 0.0;
  double eta = 0.0;
  double b_over_l = 0.0;
  double pt_over_sigma2 = 1.0;
  std::string sweep;
  std::string out;
  std::string format = "json";
  bool lambda_set = false;
  bool eta_set = false;
  bool b_set = false;
};

relayline::SingleRelaySolution solve_single(const SingleRelayArgs& a,
                                            double param) {
  if (a.model == "exp") {
    return relayline::solve_exponential_node_power(param, a.pt_over_sigma2);
  }
  if (a.model == "powerlaw") {
    return relayline::solve_powerlaw_node_power(param, a.pt_over_sigma2);
  }
  return relayline::solve_modified_powerlaw_node_power(param, a.b_over_l,
                                                       a.pt_over_sigma2);
}

int run_single_relay(const SingleRelayArgs& a) {
  const bool exponential = a.model == "exp";
  if (exponential && a.eta_set) {
    std::cerr << "error: --eta is not valid with --model exp\n";
    return 2;
  }
  if (exponential && a.b_set) {
    std::cerr << "error: --b-over-l is not valid with --model exp\n";
    return 2;
  }
  if (!exponential && a.lambda_set) {
    std::cerr << "error: --lambda is only valid with --model exp\n";
    return 2;
  }
  if (a.model == "powerlaw" && a.b_set) {
    std::cerr << "error: --b-over-l is only valid with --model modified\n";
    return 2;
  }
  // A sweep supplies the swept scalar (lambda for exp, eta otherwise), so
  // the scalar is required without a sweep and rejected with one.
  if (a.sweep.empty()) {
    if (exponential && !a.lambda_set) {
      std::cerr << "error: --model exp requires --lambda\n";
      return 2;
    }
    if (!exponential && !a.eta_set) {
      std::cerr << "error: --model " << a.model << " requires --eta\n";
      return 2;
    }
  } else {
    if (exponential && a.lambda_set) {
      std::cerr << "error: --sweep replaces --lambda for --model exp\n";
      return 2;
    }
    if (!exponential && a.eta_set) {
      std::cerr << "error: --sweep replaces --eta for --model " << a.model
                << "\n";
      return 2;
    }
  }
  if (a.model == "modified" && !a.b_set) {
    std::cerr << "error: --model modified requires --b-over-l\n";
    return 2;
  }

  if (!a.sweep.empty()) {
    Sweep sweep;
    if (!parse_sweep(a.sweep, sweep)) {
      std::cerr << "error: --sweep expects lo:hi:count with count >= 2\n";
      return 2;
    }
    std::string csv = exponential ? "lambda" : "eta";
    csv += ",x_star,alpha_star,rate\n";
    for (int i = 0; i < sweep.count; ++i) {
      const double param =
          sweep.lo + (sweep.hi - sweep.lo) * i / (sweep.count - 1);
      const auto sol = solve_single(a, param);
      csv += format_fixed(param) + ',' + format_fixed(sol.x_star) + ',' +
             format_fixed(sol.alpha_star) + ',' + format_fixed(sol.rate) +
             '\n';
    }
    emit(csv, a.out);
    return 0;
  }

  const auto sol = solve_single(a, exponential ? a.lambda : a.eta);
  nlohmann::ordered_json j;
  j["model"] = a.model;
  j["regime"] = sol.regime;
  j["x_star"] = sol.x_star;
  j["alpha_star"] = sol.alpha_star;
  j["rate"] = sol.rate;
  j["p_over_sigma2"] = sol.p_over_sigma2;
  emit(j.dump(2) + "\n", a.out);
  return 0;
}

struct PlaceArgs {
  double lambda = 1.0;
  int n = 1;
  double pt_over_sigma2 = 1.0;
  int n_max = 0;
  std::string sweep;
  std::string out;
  std::string format = "json";
};

int run_place(const PlaceArgs& a) {
  if (a.n_max > 0) {
    const auto rows =
        relayline::rate_vs_N_table(a.lambda, a.n_max, a.pt_over_sigma2);
    std::string csv = "n,rate,gain\n";
    for (const auto& row : rows) {
      csv += std::to_string(row.relay_count) + ',' + format_fixed(row.rate) +
             ',' + format_fixed(row.gain) + '\n';
    }
    emit(csv, a.out);
    return 0;
  }

  if (!a.sweep.empty()) {
    Sweep sweep;
    if (!parse_sweep(a.sweep, sweep)) {
      std::cerr << "error: --sweep expects lo:hi:count with count >= 2\n";
      return 2;
    }
    std::string csv = "lambda,k,y_over_l\n";
    for (int i = 0; i < sweep.count; ++i) {
      const double lambda =
          sweep.lo + (sweep.hi - sweep.lo) * i / (sweep.count - 1);
      const auto sol = relayline::solve_placement({a.n, lambda});
      for (int k = 0; k < a.n; ++k) {
        csv += format_fixed(lambda) + ',' + std::to_string(k + 1) + ',' +
               format_fixed(sol.y_over_l[k]) + '\n';
      }
    }
    emit(csv, a.out);
    return 0;
  }

  const auto sol = relayline::solve_placement({a.n, a.lambda});
  nlohmann::ordered_json j;
  j["lambda"] = a.lambda;
  j["relay_count"] = a.n;
  j["y_over_l"] = sol.y_over_l;
  j["z"] = sol.z;
  j["objective"] = sol.objective;
  j["gain"] = sol.gain;
  j["rate"] = sol.rate(a.pt_over_sigma2);
  j["converged"] = sol.converged;
  j["sweeps"] = sol.sweeps;
  j["seed_index"] = sol.seed_index;
  emit(j.dump(2) + "\n", a.out);
  return 0;
}

struct MdpArgs {
  relayline::MdpConfig cfg;
  std::string out;
  std::string format = "csv";
};

int run_mdp(const MdpArgs& a) {
  const auto sol = relayline::solve_mdp(a.cfg);
  const std::string meta = relayline::format_policy_metadata_json(sol);
  if (!a.out.empty()) {
    relayline::write_policy_csv(sol, a.out);
    relayline::write_text_file(a.out + ".meta.json", meta);
    return sol.converged ? 0 : 1;
  }
  if (a.format == "json") {
    std::cout << meta;
  } else {
    std::cout << relayline::format_policy_csv(sol);
  }
  return sol.converged ? 0 : 1;
}

struct DeployArgs {
  relayline::MdpConfig cfg;
  double length = 0.0;
  bool length_set = false;
  int samples = 0;
  std::uint64_t seed = 1;
  bool interactive = false;
  bool no_offline = false;
  std::string out;
  std::string format = "json";
};

int run_interactive(const relayline::MdpSolution& policy) {
  const relayline::MdpConfig& cfg = policy.config;
  int idx = cfg.state_count() - 1;
  std::printf("%.6f\n", policy.policy[idx]);
  std::fflush(stdout);
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line == "end") return 0;
    std::istringstream in(line);
    std::string word;
    double walked = 0.0;
    std::string tail;
    if (!(in >> word >> walked) || word != "continue" || walked < 0.0 ||
        (in >> tail)) {
      std::cerr << "error: expected 'continue <distance>' or 'end', got '"
                << line << "'\n";
      return 2;
    }
    idx = relayline::transition_index(policy.states[idx], walked, cfg);
    std::printf("%.6f\n", policy.policy[idx]);
    std::fflush(stdout);
  }
  return 0;
}

int run_deploy(const DeployArgs& a) {
  const int modes = (a.length_set ? 1 : 0) + (a.samples > 0 ? 1 : 0) +
                    (a.interactive ? 1 : 0);
  if (modes != 1) {
    std::cerr << "error: deploy needs exactly one of --length, --samples, "
                 "--interactive\n";
    return 2;
  }
  const auto policy = relayline::solve_mdp(a.cfg);
  if (a.interactive) {
    return run_interactive(policy);
  }
  if (a.length_set) {
    const auto trace =
        relayline::deploy(policy, a.length, a.cfg.Lambda, !a.no_offline);
    if (a.format == "csv") {
      emit(relayline::format_trace_csv({trace}), a.out);
    } else {
      nlohmann::ordered_json j;
      j["line_length"] = trace.line_length;
      j["relay_count"] = trace.relay_count;
      j["placements"] = trace.placements;
      j["states"] = trace.states;
      j["h_sequential"] = trace.h_sequential;
      if (a.no_offline) {
        j["h_offline"] = nullptr;
        j["e_percent"] = nullptr;
      } else {
        j["h_offline"] = trace.h_offline;
        j["e_percent"] = trace.e_percent;
      }
      emit(j.dump(2) + "\n", a.out);
    }
    return 0;
  }
  const auto mc = relayline::monte_carlo_compare(policy, a.samples, a.seed,
                                                 !a.no_offline);
  emit(relayline::format_report_json(mc.report), a.out);
  if (!a.out.empty()) {
    relayline::write_trace_csv(mc.traces, a.out + ".traces.csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay line-network rates, placement, and as-you-go policies"};
  app.require_subcommand(1);
  int rc = 0;

  SingleRelayArgs sr;
  auto* sr_cmd = app.add_subcommand(
      "single-relay", "One relay on a line under per-node power");
  sr_cmd->add_option("--model", sr.model, "Path loss: exp, powerlaw, modified")
      ->required()
      ->check(CLI::IsMember({"exp", "powerlaw", "modified"}));
  auto* sr_lambda =
      sr_cmd->add_option("--lambda", sr.lambda, "Total attenuation rho*L")
          ->check(CLI::PositiveNumber);
  auto* sr_eta = sr_cmd->add_option("--eta", sr.eta, "Path loss exponent")
                     ->check(CLI::Range(1.0 + 1e-9, 1e9));
  auto* sr_b = sr_cmd
                   ->add_option("--b-over-l", sr.b_over_l,
                                "Reference distance over line length")
                   ->check(CLI::Range(1e-12, 1.0));
  sr_cmd->add_option("--pt-over-sigma2", sr.pt_over_sigma2,
                     "Per-node power over noise power")
      ->check(CLI::PositiveNumber);
  sr_cmd->add_option("--sweep", sr.sweep,
                     "Sweep the model parameter: lo:hi:count (emits CSV)");
  sr_cmd->add_option("--out", sr.out, "Output path (default: stdout)");
  sr_cmd->add_option("--format", sr.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sr_cmd->callback([&] {
    sr.lambda_set = sr_lambda->count() > 0;
    sr.eta_set = sr_eta->count() > 0;
    sr.b_set = sr_b->count() > 0;
    rc = run_single_relay(sr);
  });

  PlaceArgs pl;
  auto* pl_cmd = app.add_subcommand(
      "place", "N relays on a line under a sum power budget");
  pl_cmd->add_option("--lambda", pl.lambda, "Total attenuation rho*L")
      ->required()
      ->check(CLI::PositiveNumber);
  pl_cmd->add_option("--n", pl.n, "Relay count")->check(CLI::Range(0, 10000));
  pl_cmd->add_option("--pt-over-sigma2", pl.pt_over_sigma2,
                     "Sum power over noise power")
      ->check(CLI::PositiveNumber);
  pl_cmd->add_option("--n-max", pl.n_max,
                     "Emit a rate/gain table for N = 1..n_max (CSV)")
      ->check(CLI::Range(1, 10000));
  pl_cmd->add_option("--sweep", pl.sweep,
                     "Sweep lambda: lo:hi:count (emits positions CSV)");
  pl_cmd->add_option("--out", pl.out, "Output path (default: stdout)");
  pl_cmd->add_option("--format", pl.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  pl_cmd->callback([&] { rc = run_place(pl); });

  MdpArgs md;
  auto* md_cmd = app.add_subcommand(
      "mdp", "Solve the as-you-go placement policy by value iteration");
  md_cmd->add_option("--Lambda", md.cfg.Lambda, "Attenuation per mean length")
      ->required()
      ->check(CLI::PositiveNumber);
  md_cmd->add_option("--xi", md.cfg.xi, "Relay price")
      ->check(CLI::PositiveNumber);
  md_cmd->add_option("--state-step", md.cfg.state_step, "State grid step");
  md_cmd->add_option("--action-step", md.cfg.action_step, "Action grid step");
  md_cmd->add_option("--a-max", md.cfg.a_max, "Action cap (0 = automatic)");
  md_cmd->add_option("--tol", md.cfg.tol, "Sup-norm convergence tolerance");
  md_cmd->add_option("--iter-cap", md.cfg.iter_cap, "Max value iterations");
  md_cmd->add_option("--out", md.out,
                     "Policy CSV path; metadata lands at <out>.meta.json");
  md_cmd->add_option("--format", md.format,
                     "stdout format without --out: csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  md_cmd->callback([&] { rc = run_mdp(md); });

  DeployArgs dp;
  auto* dp_cmd = app.add_subcommand(
      "deploy", "Walk a line under the solved policy and compare offline");
  dp_cmd->add_option("--Lambda", dp.cfg.Lambda, "Attenuation per mean length")
      ->required()
      ->check(CLI::PositiveNumber);
  dp_cmd->add_option("--xi", dp.cfg.xi, "Relay price")
      ->check(CLI::PositiveNumber);
  dp_cmd->add_option("--state-step", dp.cfg.state_step, "State grid step");
  dp_cmd->add_option("--action-step", dp.cfg.action_step, "Action grid step");
  dp_cmd->add_option("--a-max", dp.cfg.a_max, "Action cap (0 = automatic)");
  dp_cmd->add_option("--tol", dp.cfg.tol, "Sup-norm convergence tolerance");
  dp_cmd->add_option("--iter-cap", dp.cfg.iter_cap, "Max value iterations");
  auto* dp_len =
      dp_cmd->add_option("--length", dp.length, "Deploy on one known length")
          ->check(CLI::NonNegativeNumber);
  dp_cmd->add_option("--samples", dp.samples,
                     "Monte Carlo sample count over random lengths")
      ->check(CLI::Range(1, 100000000));
  dp_cmd->add_option("--seed", dp.seed, "Monte Carlo seed");
  dp_cmd->add_flag("--interactive", dp.interactive,
                   "Advise placement distances over stdin/stdout");
  dp_cmd->add_flag("--no-offline", dp.no_offline,
                   "Skip the offline-optimal comparison");
  dp_cmd->add_option("--out", dp.out,
                     "Output path; Monte Carlo traces land at "
                     "<out>.traces.csv");
  dp_cmd->add_option("--format", dp.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  dp_cmd->callback([&] {
    dp.length_set = dp_len->count() > 0;
    rc = run_deploy(dp);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
