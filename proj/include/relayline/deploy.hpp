#pragma once

#include <cstdint>
#include <vector>

#include "relayline/mdp.hpp"

namespace relayline {

/// One as-you-go deployment: relay coordinates followed by the sink
/// coordinate, the visited decision states, and the net-attenuation
/// comparison against offline-optimal placement of the same relay count.
struct DeploymentTrace {
  double line_length = 0.0;
  std::vector<double> placements;  // relays then sink == line_length
  std::vector<double> states;      // s at each decision, starting at 1
  int relay_count = 0;
  double h_sequential = 1.0;
  double h_offline = 1.0;          // NaN when the comparison is skipped
  double e_percent = 0.0;
};

/// Walks the line under the solved policy: at state s commit to a*(s);
/// if the line ends first the sink is placed, otherwise a relay. Lambda must
/// match the policy's configuration.
DeploymentTrace deploy(const MdpSolution& policy, double line_length,
                       double Lambda, bool with_offline = true);

/// Minimized net attenuation for `relay_count` relays on a revealed length
/// (offline placement knows the length in advance).
double offline_oracle(double line_length, int relay_count, double Lambda);

/// Net attenuation of an explicit deployment: relays at `relays` (ascending,
/// repeats allowed), sink at `length`, exponential decay rho.
double line_net_attenuation(const std::vector<double>& relays, double length,
                            double rho);

struct ComparisonReport {
  double Lambda = 0.0;
  double xi = 0.0;
  int sample_count = 0;
  std::uint64_t seed = 0;
  double mean_percent_error = 0.0;
  double mean_relays = 0.0;
  int zero_relay_cases = 0;
  double max_percent_error = 0.0;
};

struct MonteCarloResult {
  ComparisonReport report;
  std::vector<DeploymentTrace> traces;  // one per sample, in sample order
};

/// Deterministic per-sample line length: Exponential(mean 1) driven by a
/// counter-based generator keyed by seed XOR sample_index.
double sample_line_length(std::uint64_t seed, std::uint64_t sample_index);

/// Draws `samples` random line lengths, deploys under the policy, and
/// aggregates the offline comparison. Reruns with the same seed are
/// bit-identical. with_offline = false skips the oracle (relay statistics
/// only; error fields are zero).
MonteCarloResult monte_carlo_compare(const MdpSolution& policy, int samples,
                                     std::uint64_t seed,
                                     bool with_offline = true);

struct TuningOptions {
  double xi_lo = 1e-5;
  double xi_hi = 10.0;
  int samples = 2000;
  std::uint64_t seed = 1;
  double tolerance = 0.05;  // acceptable |mean relays - target|
  int max_steps = 30;
};

struct TuningResult {
  double xi = 0.0;
  double mean_relays = 0.0;
  int steps = 0;
  bool converged = false;
  MdpSolution solution;  // policy at the returned xi
};

/// Bisects the relay price xi so the simulated mean relay count meets the
/// target: mean count is nonincreasing in xi. Throws if the target lies
/// outside what the bracket can produce.
TuningResult constrained_tuning(double target_mean_relays, MdpConfig base,
                                const TuningOptions& options = {});

}  // namespace relayline
