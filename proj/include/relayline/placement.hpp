#pragma once

#include <vector>

namespace relayline {

/// N-relay placement on a line with attenuation lambda = rho*L, in the
/// variables z_k = e^{rho y_k}: minimize
///   z_1 + sum_{k=2..N+1} (z_k - z_{k-1}) / (sum_{l<k} z_l)
/// subject to 1 <= z_1 <= ... <= z_N <= z_{N+1} = e^lambda, z_0 = 1.
/// The objective is the net attenuation H; it is convex in each z_k alone.
struct PlacementProblem {
  int relay_count = 1;  // N >= 0
  double lambda = 1.0;  // > 0
};

struct PlacementOptions {
  double coordinate_tol = 1e-10;  // golden-section interval width, in z units
  double objective_tol = 1e-12;   // per-sweep improvement threshold
  int max_sweeps = 10000;
  bool unimodality_probe = false;  // sample each 1-D slice for a second valley
  std::vector<std::vector<double>> extra_seeds;  // additional z starts
};

struct PlacementSolution {
  std::vector<double> z;         // optimal variables, nondecreasing
  std::vector<double> y_over_l;  // normalized positions ln(z)/lambda
  double objective = 0.0;        // minimized net attenuation H >= 1
  double gain = 1.0;             // e^lambda / H
  bool converged = true;
  int sweeps = 0;
  int seed_index = 0;            // multi-start seed that won
  bool unimodality_ok = true;    // meaningful only with the probe enabled

  double rate(double pt_over_sigma2 = 1.0) const;
};

/// Multi-start cyclic coordinate minimization; each 1-D subproblem is solved
/// by golden section clamped to [z_{k-1}, z_{k+1}]. Non-convergence within
/// the sweep cap is reported through `converged`, never thrown.
PlacementSolution solve_placement(const PlacementProblem& problem,
                                  const PlacementOptions& options = {});

struct RateTableRow {
  int relay_count = 0;
  double rate = 0.0;
  double gain = 1.0;
};

/// Optimal rate and relaying gain for N = 1..n_max relays, warm-starting
/// each N from the previous optimum extended by a relay at the sink.
std::vector<RateTableRow> rate_vs_N_table(double lambda, int n_max,
                                          double pt_over_sigma2 = 1.0);

}  // namespace relayline
