#include "relayline/single_relay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relayline {

namespace {
const double kLog2 = std::log(2.0);
const double kLog4 = std::log(4.0);
}  // namespace

double single_relay_rate(double alpha, double r, const PathLossModel& model,
                         double length, double p_over_sigma2) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("single_relay_rate: alpha must be in [0,1]");
  }
  if (!(r >= 0.0 && r <= length)) {
    throw std::invalid_argument("single_relay_rate: r must be in [0,L]");
  }
  if (!(p_over_sigma2 > 0.0)) {
    throw std::invalid_argument("single_relay_rate: P/sigma2 must be > 0");
  }
  const double g01 = gain(model, r);
  const double g02 = gain(model, length);
  const double g12 = gain(model, length - r);
  const double relay_arg = alpha * g01 * p_over_sigma2;
  const double sink_arg =
      p_over_sigma2 * (g02 + g12 + 2.0 * std::sqrt((1.0 - alpha) * g02 * g12));
  return awgn_capacity(std::min(relay_arg, sink_arg));
}

double alpha_threshold(double g01, double g02, double g12) {
  if (!(g01 > 0.0) || !(g02 >= 0.0) || !(g12 >= 0.0)) {
    throw std::invalid_argument("alpha_threshold: gains must be positive");
  }
  if (g01 < g02 + g12) return 1.0;  // relay link binds for every split
  const double ta = std::sqrt(g02 * std::max(0.0, 1.0 - g12 / g01));
  const double tb = std::sqrt(g12 * std::max(0.0, 1.0 - g02 / g01));
  const double s = ta + tb;
  return std::min(1.0, s * s / g01);
}

SingleRelaySolution solve_exponential_node_power(double lambda,
                                                 double p_over_sigma2) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "solve_exponential_node_power: lambda must be > 0");
  }
  if (!(p_over_sigma2 > 0.0)) {
    throw std::invalid_argument(
        "solve_exponential_node_power: P/sigma2 must be > 0");
  }
  SingleRelaySolution sol;
  sol.p_over_sigma2 = p_over_sigma2;
  if (lambda <= kLog2) {
    // Weak attenuation: the sink hears the full cooperative power even with
    // everything spent on the relay link.
    sol.regime = "at_source_full_power";
    sol.x_star = 0.0;
    sol.alpha_star = 1.0;
    sol.rate = awgn_capacity(p_over_sigma2);
  } else if (lambda <= kLog4) {
    const double k = std::exp(-lambda);
    sol.regime = "at_source_split";
    sol.x_star = 0.0;
    sol.alpha_star = 4.0 * k * (1.0 - k);
    sol.rate = awgn_capacity(sol.alpha_star * p_over_sigma2);
  } else {
    const double k = std::exp(-lambda);
    const double u = 2.0 * k + std::sqrt(k);  // e^{-lambda x+}
    sol.regime = "interior";
    sol.x_star = -std::log(u) / lambda;
    const double s = std::sqrt(1.0 - k / (u * u)) +
                     std::sqrt((1.0 - k / u) / u);
    sol.alpha_star = (k / u) * s * s;
    sol.rate = awgn_capacity(p_over_sigma2 * k * s * s);
  }
  return sol;
}

double powerlaw_balance_decreasing(double eta, double x) {
  if (!(eta > 1.0)) {
    throw std::invalid_argument("powerlaw balance: eta must be > 1");
  }
  if (!(x > 0.0 && x < 0.5)) {
    throw std::invalid_argument("powerlaw balance: x must be in (0, 1/2)");
  }
  const double lhs = std::pow(x, -eta + 1.0) - 1.0;
  return lhs * lhs * (1.0 - std::pow(1.0 / x - 1.0, -eta));
}

double powerlaw_balance_increasing(double eta, double x) {
  if (!(eta > 1.0)) {
    throw std::invalid_argument("powerlaw balance: eta must be > 1");
  }
  if (!(x > 0.0 && x < 0.5)) {
    throw std::invalid_argument("powerlaw balance: x must be in (0, 1/2)");
  }
  return std::pow(1.0 - x, -eta) - std::pow(1.0 / x - 1.0, -eta);
}

double bisect_powerlaw_crossing(double eta, BisectionTrace* trace) {
  if (!(eta > 1.0)) {
    throw std::invalid_argument("bisect_powerlaw_crossing: eta must be > 1");
  }
  auto h = [eta](double x) {
    return powerlaw_balance_decreasing(eta, x) -
           powerlaw_balance_increasing(eta, x);
  };
  double lo = 1e-9;
  double hi = 0.5 - 1e-9;
  if (!(h(lo) > 0.0) || !(h(hi) < 0.0)) {
    throw std::runtime_error(
        "bisect_powerlaw_crossing: bracket lost its sign change");
  }
  int iterations = 0;
  // Stop at width 1e-14: the balance functions cross steeply (slope ~2e2 for
  // eta = 4), so a tighter x-interval is needed to keep the residual
  // |f1(root) - f2(root)| below 1e-10.
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (trace) trace->midpoints.push_back(mid);
    ++iterations;
    if (h(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (trace) {
    trace->root = root;
    trace->iterations = iterations;
  }
  return root;
}

SingleRelaySolution solve_powerlaw_node_power(double eta,
                                              double p_over_sigma2) {
  if (!(p_over_sigma2 > 0.0)) {
    throw std::invalid_argument(
        "solve_powerlaw_node_power: P/sigma2 must be > 0");
  }
  const double p = bisect_powerlaw_crossing(eta);
  const PathLossModel model = PathLossModel::power_law(eta);
  SingleRelaySolution sol;
  sol.regime = "interior";
  sol.x_star = p;
  sol.p_over_sigma2 = p_over_sigma2;
  const double g01 = std::pow(p, -eta);
  const double g02 = 1.0;  // unit-length normalization
  const double g12 = std::pow(1.0 - p, -eta);
  sol.alpha_star = alpha_threshold(g01, g02, g12);
  sol.rate = single_relay_rate(sol.alpha_star, p, model, 1.0, p_over_sigma2);
  return sol;
}

SingleRelaySolution solve_modified_powerlaw_node_power(double eta,
                                                       double b_over_l,
                                                       double p_over_sigma2) {
  if (!(b_over_l > 0.0 && b_over_l < 0.5)) {
    throw std::invalid_argument(
        "solve_modified_powerlaw_node_power: need 0 < b/L < 1/2");
  }
  if (!(p_over_sigma2 > 0.0)) {
    throw std::invalid_argument(
        "solve_modified_powerlaw_node_power: P/sigma2 must be > 0");
  }
  const double p = bisect_powerlaw_crossing(eta);
  const double x = std::max(p, b_over_l);
  const PathLossModel model = PathLossModel::modified_power_law(eta, b_over_l);
  SingleRelaySolution sol;
  sol.regime = x > p ? "clamped_at_reference" : "interior";
  sol.x_star = x;
  sol.p_over_sigma2 = p_over_sigma2;
  const double g01 = gain(model, x);
  const double g02 = gain(model, 1.0);
  const double g12 = gain(model, 1.0 - x);
  sol.alpha_star = alpha_threshold(g01, g02, g12);
  sol.rate = single_relay_rate(sol.alpha_star, x, model, 1.0, p_over_sigma2);
  return sol;
}

}  // namespace relayline
