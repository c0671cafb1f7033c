#pragma once

#include <optional>
#include <vector>

namespace relayline {

/// Total-cost MDP for as-you-go relay placement on a line whose length is
/// Exponential(beta); everything is normalized to beta = 1, leaving the
/// attenuation-per-mean-length Lambda = rho/beta and the relay price xi.
/// State s in (0,1] tracks the deployed prefix; placing a relay at distance
/// a costs xi plus the attenuation accumulated while walking.
struct MdpConfig {
  double Lambda = 1.0;        // > 0
  double xi = 0.01;           // > 0
  double state_step = 0.01;   // grid on (0,1]; 1/state_step must be integral
  double action_step = 0.001; // grid on [0, a_max]
  double a_max = 0.0;         // 0 = auto: max(25, 5/Lambda)
  double tol = 1e-9;          // sup-norm convergence threshold
  int iter_cap = 100000;

  double resolved_a_max() const;
  int state_count() const;          // number of grid states
  double grid_state(int index) const;  // 0-based -> (index+1)*state_step
  void validate() const;

  /// Converts an unnormalized (rho, beta) pair; distances produced under the
  /// returned config are in units of the mean line length 1/beta.
  static MdpConfig normalized(double rho, double beta);
};

struct BellmanDiagnostics {
  bool boundary_minimizer = false;  // some state chose a = a_max: cap too small
  bool no_relay_preferred = false;  // Lambda < 1: stopping value theta*s won
};

enum class BackupForm {
  Integral,  // expected-cost form with the walking integral in closed form
  Theta      // equivalent form via theta = Lambda/(1-Lambda); Lambda < 1 only
};

/// Expected cost-to-go of committing to walk distance a from state s:
/// the attenuation integral up to the line's end plus, if the line survives,
/// the relay price and the value at the gridded next state.
/// J must hold one value per grid state; the next state is rounded up.
double stage_cost_expectation(double s, double a, const MdpConfig& cfg,
                              const std::vector<double>& J);

/// One value-iteration sweep: J'(s) = min over the action grid of
/// stage_cost_expectation. Ties pick the smaller action.
std::vector<double> bellman_backup(const std::vector<double>& J,
                                   const MdpConfig& cfg,
                                   std::vector<double>* policy = nullptr,
                                   BellmanDiagnostics* diagnostics = nullptr,
                                   BackupForm form = BackupForm::Integral);

/// Index (0-based) of the grid state reached from s after walking a:
/// smallest grid point >= s e^{Lambda a} / (1 + s e^{Lambda a}).
int transition_index(double s, double a, const MdpConfig& cfg);

struct MdpSolution {
  MdpConfig config;
  std::vector<double> states;  // ascending grid, last = 1.0
  std::vector<double> J;       // optimal expected cost per state
  std::vector<double> policy;  // optimal walk distance per state
  std::optional<double> theta; // Lambda/(1-Lambda) when Lambda < 1
  int iterations = 0;
  double final_sup_diff = 0.0;
  bool converged = false;
  bool monotone_iterates = true;  // J^{k+1} >= J^k held at every sweep
  BellmanDiagnostics diagnostics;
};

/// Value iteration from J = 0 until the sup-norm difference drops below
/// cfg.tol or iter_cap sweeps elapse (then converged = false, best iterate
/// returned). Iterates increase monotonically.
MdpSolution solve_mdp(const MdpConfig& cfg);

}  // namespace relayline
