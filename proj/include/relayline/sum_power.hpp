#pragma once

#include <string>
#include <vector>

#include "relayline/channel.hpp"

namespace relayline {

/// Optimal division of a total budget P_T across source and relays for a
/// fixed ordered placement. gamma[k-1] is the budget of stage k (the power
/// spent, across transmitters, on the message decoded by node k).
struct PowerAllocation {
  std::vector<double> gamma;
  PowerMatrix powers;
  double total_power = 0.0;
  double net_attenuation = 0.0;  // H; received SNR is P_T / (sigma2 * H)
  double rate = 0.0;
};

/// Net attenuation H = 1/g01 + sum_{k>=2} (1/g0k - 1/g0,k-1) / a_k with
/// a_k = sum_{l<k} 1/g0l. Requires source gains g0k positive, <= 1,
/// nonincreasing in k.
double net_attenuation(const GainMatrix& gains);

/// Stage budgets equalizing all decoding constraints, split per link as
/// P[i][j] = ((1/g0i) / a_j) * gamma_j. Throws if the source-gain sequence
/// is not nonincreasing or not positive.
PowerAllocation allocate_sum_power(const GainMatrix& gains, double total_power,
                                   double sigma2 = 1.0);

/// Primal/dual optimality certificate for the stage-budget linear program.
/// Feasibility and the zero gap zeta = P_T * theta certify allocate_sum_power.
struct DualCertificate {
  double theta = 0.0;
  std::vector<double> mu;     // dual multipliers, nonnegative, sum to 1
  double zeta = 0.0;          // optimal common received-power numerator
  std::vector<double> gamma;  // primal optimizer in closed form
};

DualCertificate dual_certificate(const GainMatrix& gains, double total_power);

/// G = e^{rho L} / H for the given placement: the factor by which relaying
/// beats the direct link in received SNR. Always in [1, e^{rho L}].
double relaying_gain(const LinePlacement& placement, double rho);

/// Optimal single-relay placement and allocation under a sum power budget.
struct SingleRelaySumPowerSolution {
  double y1_over_l = 0.0;
  std::string regime;  // "at_source" (lambda <= log 3) or "interior"
  double p_01 = 0.0, p_02 = 0.0, p_12 = 0.0;  // closed-form link powers
  PowerAllocation allocation;
  double rate = 0.0;
};

SingleRelaySumPowerSolution single_relay_sum_power(double lambda,
                                                   double total_power = 1.0,
                                                   double sigma2 = 1.0);

/// Net attenuation f(N) for N relays equally spaced on a line with
/// attenuation lambda; stays within [1, 2 - e^-lambda + o(1)] as N grows.
double uniform_placement_attenuation(int relay_count, double lambda);

double uniform_placement_rate(int relay_count, double lambda,
                              double pt_over_sigma2 = 1.0);

}  // namespace relayline
