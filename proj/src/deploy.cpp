#include "relayline/deploy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "relayline/placement.hpp"

namespace relayline {

namespace {

constexpr std::size_t kRelayBudget = 1000000;

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_policy(const MdpSolution& policy) {
  const int k = policy.config.state_count();
  if (static_cast<int>(policy.J.size()) != k ||
      static_cast<int>(policy.policy.size()) != k ||
      static_cast<int>(policy.states.size()) != k) {
    throw std::invalid_argument("deploy: policy tables do not match the grid");
  }
}

}  // namespace

double line_net_attenuation(const std::vector<double>& relays, double length,
                            double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("line_net_attenuation: rho must be > 0");
  }
  if (!(length >= 0.0)) {
    throw std::invalid_argument("line_net_attenuation: length must be >= 0");
  }
  double prev_y = 0.0;
  for (double y : relays) {
    if (y < prev_y || y > length) {
      throw std::invalid_argument(
          "line_net_attenuation: relays must be ascending within [0, length]");
    }
    prev_y = y;
  }
  const double big_e = std::exp(rho * length);
  const int n = static_cast<int>(relays.size());
  if (n == 0) return big_e;
  const double z0 = std::exp(rho * relays[0]);
  double value = z0;
  double prefix = 1.0 + z0;
  for (int k = 1; k < n; ++k) {
    const double zk = std::exp(rho * relays[k]);
    const double zprev = std::exp(rho * relays[k - 1]);
    value += (zk - zprev) / prefix;
    prefix += zk;
  }
  value += (big_e - std::exp(rho * relays[n - 1])) / prefix;
  return value;
}

double offline_oracle(double line_length, int relay_count, double Lambda) {
  if (!(Lambda > 0.0)) {
    throw std::invalid_argument("offline_oracle: Lambda must be > 0");
  }
  if (!(line_length >= 0.0)) {
    throw std::invalid_argument("offline_oracle: line_length must be >= 0");
  }
  if (relay_count < 0) {
    throw std::invalid_argument("offline_oracle: relay_count must be >= 0");
  }
  if (line_length == 0.0) return 1.0;
  if (relay_count == 0) return std::exp(Lambda * line_length);
  PlacementProblem problem{relay_count, Lambda * line_length};
  return solve_placement(problem).objective;
}

DeploymentTrace deploy(const MdpSolution& policy, double line_length,
                       double Lambda, bool with_offline) {
  check_policy(policy);
  if (Lambda != policy.config.Lambda) {
    throw std::invalid_argument(
        "deploy: Lambda must match the policy configuration");
  }
  if (!(line_length >= 0.0)) {
    throw std::invalid_argument("deploy: line_length must be >= 0");
  }
  const MdpConfig& cfg = policy.config;
  const int k = cfg.state_count();

  DeploymentTrace trace;
  trace.line_length = line_length;
  int idx = k - 1;  // fresh start: the last relay (the source) is adjacent
  double pos = 0.0;
  trace.states.push_back(policy.states[idx]);
  while (true) {
    const double a = policy.policy[idx];
    if (pos + a < line_length) {
      pos += a;
      trace.placements.push_back(pos);
      if (trace.placements.size() > kRelayBudget) {
        throw std::runtime_error("deploy: relay budget exceeded");
      }
      const int next = transition_index(policy.states[idx], a, cfg);
      if (a == 0.0 && next == idx) {
        throw std::runtime_error("deploy: policy loops without advancing");
      }
      idx = next;
      trace.states.push_back(policy.states[idx]);
    } else {
      trace.placements.push_back(line_length);  // the line ends: place sink
      break;
    }
  }
  trace.relay_count = static_cast<int>(trace.placements.size()) - 1;

  std::vector<double> relays(trace.placements.begin(),
                             trace.placements.end() - 1);
  trace.h_sequential = line_net_attenuation(relays, line_length, Lambda);
  if (with_offline) {
    trace.h_offline = offline_oracle(line_length, trace.relay_count, Lambda);
    trace.e_percent =
        std::abs(trace.h_offline - trace.h_sequential) / trace.h_offline *
        100.0;
  } else {
    trace.h_offline = std::numeric_limits<double>::quiet_NaN();
    trace.e_percent = 0.0;
  }
  return trace;
}

double sample_line_length(std::uint64_t seed, std::uint64_t sample_index) {
  const std::uint64_t z = splitmix64(seed ^ sample_index);
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return -std::log1p(-u);
}

MonteCarloResult monte_carlo_compare(const MdpSolution& policy, int samples,
                                     std::uint64_t seed, bool with_offline) {
  if (samples <= 0) {
    throw std::invalid_argument("monte_carlo_compare: samples must be > 0");
  }
  check_policy(policy);
  MonteCarloResult result;
  result.traces.reserve(samples);
  double sum_e = 0.0;
  double max_e = 0.0;
  double sum_relays = 0.0;
  int zero_cases = 0;
  for (int i = 0; i < samples; ++i) {
    const double raw =
        sample_line_length(seed, static_cast<std::uint64_t>(i));
    const double length = std::max(raw, 1e-12);
    DeploymentTrace trace =
        deploy(policy, length, policy.config.Lambda, with_offline);
    sum_e += trace.e_percent;
    max_e = std::max(max_e, trace.e_percent);
    sum_relays += trace.relay_count;
    if (trace.relay_count == 0) ++zero_cases;
    result.traces.push_back(std::move(trace));
  }
  result.report.Lambda = policy.config.Lambda;
  result.report.xi = policy.config.xi;
  result.report.sample_count = samples;
  result.report.seed = seed;
  result.report.mean_percent_error = with_offline ? sum_e / samples : 0.0;
  result.report.mean_relays = sum_relays / samples;
  result.report.zero_relay_cases = zero_cases;
  result.report.max_percent_error = with_offline ? max_e : 0.0;
  return result;
}

TuningResult constrained_tuning(double target_mean_relays, MdpConfig base,
                                const TuningOptions& options) {
  if (!(target_mean_relays >= 0.0)) {
    throw std::invalid_argument(
        "constrained_tuning: target mean must be >= 0");
  }
  if (!(options.xi_lo > 0.0 && options.xi_hi > options.xi_lo)) {
    throw std::invalid_argument("constrained_tuning: bad xi bracket");
  }
  auto evaluate = [&](double xi, MdpSolution* keep) {
    base.xi = xi;
    MdpSolution sol = solve_mdp(base);
    const double mean =
        monte_carlo_compare(sol, options.samples, options.seed, false)
            .report.mean_relays;
    if (keep) *keep = std::move(sol);
    return mean;
  };

  TuningResult result;
  // Mean relay count is nonincreasing in xi: the cheap end gives the most
  // relays, the expensive end the fewest. Verify the target is attainable.
  MdpSolution lo_sol;
  const double mean_lo = evaluate(options.xi_lo, &lo_sol);
  if (std::abs(mean_lo - target_mean_relays) <= options.tolerance) {
    result.xi = options.xi_lo;
    result.mean_relays = mean_lo;
    result.converged = true;
    result.solution = std::move(lo_sol);
    return result;
  }
  MdpSolution hi_sol;
  const double mean_hi = evaluate(options.xi_hi, &hi_sol);
  if (std::abs(mean_hi - target_mean_relays) <= options.tolerance) {
    result.xi = options.xi_hi;
    result.mean_relays = mean_hi;
    result.converged = true;
    result.solution = std::move(hi_sol);
    return result;
  }
  if (target_mean_relays > mean_lo || target_mean_relays < mean_hi) {
    throw std::runtime_error(
        "constrained_tuning: target mean relay count is outside the bracket");
  }

  double log_lo = std::log(options.xi_lo);
  double log_hi = std::log(options.xi_hi);
  for (int step = 1; step <= options.max_steps; ++step) {
    const double xi = std::exp(0.5 * (log_lo + log_hi));
    MdpSolution sol;
    const double mean = evaluate(xi, &sol);
    result.xi = xi;
    result.mean_relays = mean;
    result.steps = step;
    result.solution = std::move(sol);
    if (std::abs(mean - target_mean_relays) <= options.tolerance) {
      result.converged = true;
      break;
    }
    if (mean > target_mean_relays) {
      log_lo = std::log(xi);  // too many relays: price must rise
    } else {
      log_hi = std::log(xi);
    }
  }
  return result;
}

}  // namespace relayline
