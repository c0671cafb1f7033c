#pragma once

#include <string>
#include <vector>

#include "relayline/channel.hpp"

namespace relayline {

/// Optimal single-relay placement under individual node power constraints.
/// Positions are normalized by the line length; powers enter only through
/// the ratio P/sigma2.
struct SingleRelaySolution {
  std::string regime;        // closed-form branch that produced the optimum
  double x_star = 0.0;       // normalized relay location, always in [0, 1/2]
  double alpha_star = 1.0;   // source power fraction on the relay link
  double rate = 0.0;         // achievable rate at the optimum
  double p_over_sigma2 = 1.0;
};

/// Single-relay rate for source power split alpha and relay distance r:
/// min{ C(alpha g01 P/s2), C((P/s2)(g02 + g12 + 2 sqrt((1-alpha) g02 g12))) }.
double single_relay_rate(double alpha, double r, const PathLossModel& model,
                         double length, double p_over_sigma2 = 1.0);

/// Exponential path loss, attenuation lambda = rho*L. Three branches:
/// lambda <= log 2: relay at source, full power on the relay link;
/// lambda <= log 4: relay at source, split power;
/// otherwise: interior optimum x+ = -(1/lambda) log(2e^-lambda + e^-lambda/2).
SingleRelaySolution solve_exponential_node_power(double lambda,
                                                 double p_over_sigma2 = 1.0);

/// Power-law path loss with exponent eta > 1. The optimum is the unique
/// crossing of the balance functions below on (0, 1/2).
SingleRelaySolution solve_powerlaw_node_power(double eta,
                                              double p_over_sigma2 = 1.0);

/// Power law clamped at reference distance b (gain min{r^-eta, b^-eta}),
/// 0 < b_over_l < 1/2: optimum is the power-law root pushed out to b/L.
SingleRelaySolution solve_modified_powerlaw_node_power(double eta,
                                                       double b_over_l,
                                                       double p_over_sigma2 = 1.0);

/// Balance functions whose unique crossing on (0, 1/2) is the power-law
/// optimum: the first decreases from +inf to 0, the second increases from 0
/// to 2^eta - 1.
double powerlaw_balance_decreasing(double eta, double x);
double powerlaw_balance_increasing(double eta, double x);

struct BisectionTrace {
  std::vector<double> midpoints;
  double root = 0.0;
  int iterations = 0;
};

/// Bisection for the balance-function crossing; bracket [1e-9, 1/2 - 1e-9],
/// absolute tolerance 1e-14 in x (tight enough that the balance residual at
/// the root stays below 1e-10 even where the crossing is steep).
double bisect_powerlaw_crossing(double eta, BisectionTrace* trace = nullptr);

/// Source power fraction equalizing the two decoding constraints, valid when
/// g01 >= g02 + g12 (otherwise the relay link never binds and alpha* = 1).
double alpha_threshold(double g01, double g02, double g12);

}  // namespace relayline
