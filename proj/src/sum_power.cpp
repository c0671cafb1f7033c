#include "relayline/sum_power.hpp"

#include <cmath>
#include <stdexcept>

namespace relayline {

namespace {

// Source gains b_k = g_{0,k} for k = 1..N+1 with b_0 = 1, checked positive,
// <= 1, nonincreasing (relays ordered away from the source).
std::vector<double> source_gain_sequence(const GainMatrix& gains) {
  const std::size_t n = gains.node_count();
  std::vector<double> b(n, 1.0);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = gains(0, k);
    if (!(b[k] > 0.0) || b[k] > 1.0) {
      throw std::invalid_argument(
          "sum_power: source gains must lie in (0, 1]");
    }
    if (b[k] > b[k - 1]) {
      throw std::invalid_argument(
          "sum_power: source gains must be nonincreasing (ordered relays)");
    }
  }
  return b;
}

// a_k = sum_{l<k} 1/b_l, k = 1..N+1 (a[0] unused).
std::vector<double> stage_denominators(const std::vector<double>& b) {
  std::vector<double> a(b.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 1; k < b.size(); ++k) {
    acc += 1.0 / b[k - 1];
    a[k] = acc;
  }
  return a;
}

}  // namespace

double net_attenuation(const GainMatrix& gains) {
  const std::vector<double> b = source_gain_sequence(gains);
  const std::vector<double> a = stage_denominators(b);
  const std::size_t m = b.size() - 1;  // decoding stages
  double h = 1.0 / b[1];
  for (std::size_t k = 2; k <= m; ++k) {
    h += (1.0 / b[k] - 1.0 / b[k - 1]) / a[k];
  }
  return h;
}

PowerAllocation allocate_sum_power(const GainMatrix& gains, double total_power,
                                   double sigma2) {
  if (!(total_power > 0.0)) {
    throw std::invalid_argument("allocate_sum_power: P_T must be > 0");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("allocate_sum_power: sigma2 must be > 0");
  }
  const std::vector<double> b = source_gain_sequence(gains);
  const std::vector<double> a = stage_denominators(b);
  const std::size_t m = b.size() - 1;

  // Unnormalized stage budgets equalizing the received powers:
  // gamma_k = d_k * sum_{j<k} a_j gamma_j keeps every b_k * sum a_j gamma_j
  // equal; the recursion sidesteps the overflowing product form.
  std::vector<double> gamma(m, 1.0);
  double weighted = a[1] * gamma[0];
  for (std::size_t k = 2; k <= m; ++k) {
    const double d = ((b[k - 1] - b[k]) / b[k]) / a[k];
    gamma[k - 1] = d * weighted;  // exact 0 for co-located relays
    weighted += a[k] * gamma[k - 1];
  }
  double sum = 0.0;
  for (double g : gamma) sum += g;
  const double scale = total_power / sum;
  for (double& g : gamma) g *= scale;

  PowerAllocation out;
  out.gamma = gamma;
  out.total_power = total_power;
  out.powers = PowerMatrix(b.size());
  for (std::size_t j = 1; j <= m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      out.powers(i, j) = (1.0 / b[i]) / a[j] * gamma[j - 1];
    }
  }
  out.net_attenuation = net_attenuation(gains);
  out.rate = awgn_capacity(total_power / (sigma2 * out.net_attenuation));
  return out;
}

DualCertificate dual_certificate(const GainMatrix& gains, double total_power) {
  if (!(total_power > 0.0)) {
    throw std::invalid_argument("dual_certificate: P_T must be > 0");
  }
  const std::vector<double> b = source_gain_sequence(gains);
  const std::vector<double> a = stage_denominators(b);
  const std::size_t m = b.size() - 1;

  DualCertificate cert;
  // zeta = P_T / sum_k (1/a_k)(1/b_k - 1/b_{k-1}) with the k = 1 term
  // degenerating to 1/b_1; the denominator is the net attenuation.
  double h = 1.0 / b[1];
  for (std::size_t k = 2; k <= m; ++k) {
    h += (1.0 / b[k] - 1.0 / b[k - 1]) / a[k];
  }
  cert.zeta = total_power / h;
  cert.gamma.resize(m);
  cert.gamma[0] = cert.zeta / b[1];
  for (std::size_t k = 2; k <= m; ++k) {
    cert.gamma[k - 1] = (cert.zeta / a[k]) * (1.0 / b[k] - 1.0 / b[k - 1]);
  }
  // theta = 1 / sum_k (1/b_k)(1/a_k - 1/a_{k+1}), final term taking
  // 1/a_{m+1} = 0; mu is the matching dual point on the simplex.
  double t = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double next = k < m ? 1.0 / a[k + 1] : 0.0;
    t += (1.0 / b[k]) * (1.0 / a[k] - next);
  }
  cert.theta = 1.0 / t;
  cert.mu.resize(m);
  for (std::size_t k = 1; k <= m; ++k) {
    const double next = k < m ? 1.0 / a[k + 1] : 0.0;
    cert.mu[k - 1] = cert.theta * (1.0 / b[k]) * (1.0 / a[k] - next);
  }
  return cert;
}

double relaying_gain(const LinePlacement& placement, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("relaying_gain: rho must be > 0");
  }
  const GainMatrix gains =
      GainMatrix::from_placement(placement, PathLossModel::exponential(rho));
  return std::exp(rho * placement.length) / net_attenuation(gains);
}

SingleRelaySumPowerSolution single_relay_sum_power(double lambda,
                                                   double total_power,
                                                   double sigma2) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("single_relay_sum_power: lambda must be > 0");
  }
  if (!(total_power > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument(
        "single_relay_sum_power: P_T and sigma2 must be > 0");
  }
  const double E = std::exp(lambda);
  SingleRelaySumPowerSolution sol;
  if (lambda <= std::log(3.0)) {
    sol.regime = "at_source";
    sol.y1_over_l = 0.0;
    sol.p_01 = 2.0 * total_power / (E + 1.0);
    sol.p_02 = (E - 1.0) / (E + 1.0) * total_power / 2.0;
    sol.p_12 = sol.p_02;
    sol.rate = awgn_capacity(2.0 * total_power / ((E + 1.0) * sigma2));
  } else {
    const double w = std::sqrt(E + 1.0);
    sol.regime = "interior";
    sol.y1_over_l = std::log(w - 1.0) / lambda;
    sol.p_01 = total_power / 2.0;
    sol.p_02 = total_power / (2.0 * w);
    sol.p_12 = (w - 1.0) * total_power / (2.0 * w);
    sol.rate = awgn_capacity(total_power / (2.0 * sigma2 * (w - 1.0)));
  }
  const LinePlacement placement(1.0, {sol.y1_over_l});
  const GainMatrix gains =
      GainMatrix::from_placement(placement, PathLossModel::exponential(lambda));
  sol.allocation = allocate_sum_power(gains, total_power, sigma2);
  return sol;
}

double uniform_placement_attenuation(int relay_count, double lambda) {
  if (relay_count < 0) {
    throw std::invalid_argument(
        "uniform_placement_attenuation: relay count must be >= 0");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "uniform_placement_attenuation: lambda must be > 0");
  }
  const double h = lambda / (relay_count + 1);
  const double dh = std::expm1(h);
  double f = std::exp(h);
  for (int k = 2; k <= relay_count + 1; ++k) {
    f += std::exp((k - 1) * h) * dh * dh / std::expm1(k * h);
  }
  return f;
}

double uniform_placement_rate(int relay_count, double lambda,
                              double pt_over_sigma2) {
  if (!(pt_over_sigma2 > 0.0)) {
    throw std::invalid_argument(
        "uniform_placement_rate: P_T/sigma2 must be > 0");
  }
  return awgn_capacity(pt_over_sigma2 /
                       uniform_placement_attenuation(relay_count, lambda));
}

}  // namespace relayline
