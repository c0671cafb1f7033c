#include "relayline/placement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "relayline/channel.hpp"

namespace relayline {

namespace {

// Net attenuation in the z variables; fresh prefix sums every call keep the
// coordinate updates free of stale-state bugs at O(N) per evaluation.
double objective_value(const std::vector<double>& z, double big_e) {
  const int n = static_cast<int>(z.size());
  if (n == 0) return big_e;
  double value = z[0];
  double prefix = 1.0 + z[0];
  for (int k = 1; k < n; ++k) {
    value += (z[k] - z[k - 1]) / prefix;
    prefix += z[k];
  }
  value += (big_e - z[n - 1]) / prefix;
  return value;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  static const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;
  double a = lo;
  double b = hi;
  double h = b - a;
  if (h <= tol) return 0.5 * (a + b);
  double c = a + invphi2 * h;
  double d = a + invphi * h;
  double fc = f(c);
  double fd = f(d);
  while (h > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + invphi2 * h;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + invphi * h;
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

bool slice_is_unimodal(const std::function<double(double)>& f, double lo,
                       double hi) {
  if (!(hi - lo > 0.0)) return true;
  constexpr int kSamples = 64;
  double prev = f(lo);
  bool ascended = false;
  for (int i = 1; i < kSamples; ++i) {
    const double t = lo + (hi - lo) * i / (kSamples - 1);
    const double cur = f(t);
    const double eps = 1e-12 * std::max({1.0, std::abs(prev), std::abs(cur)});
    if (cur - prev > eps) {
      ascended = true;
    } else if (prev - cur > eps && ascended) {
      return false;  // a second descent: the slice has another valley
    }
    prev = cur;
  }
  return true;
}

struct DescentResult {
  std::vector<double> z;
  double objective = 0.0;
  bool converged = false;
  int sweeps = 0;
};

DescentResult coordinate_descent(std::vector<double> z, double big_e,
                                 const PlacementOptions& opt) {
  const int n = static_cast<int>(z.size());
  DescentResult res;
  double value = objective_value(z, big_e);
  // The reported iterate must be the one the reported objective was
  // evaluated at, so track them as a pair.
  std::vector<double> best_z = z;
  double best_value = value;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    for (int k = 0; k < n; ++k) {
      const double lo = k == 0 ? 1.0 : z[k - 1];
      const double hi = k == n - 1 ? big_e : z[k + 1];
      auto slice = [&](double v) {
        z[k] = v;
        return objective_value(z, big_e);
      };
      z[k] = golden_min(slice, lo, hi, opt.coordinate_tol);
    }
    const double next = objective_value(z, big_e);
    res.sweeps = sweep + 1;
    if (next < best_value) {
      best_value = next;
      best_z = z;
    }
    if (value - next < opt.objective_tol) {
      res.converged = true;
      break;
    }
    value = next;
  }
  res.z = std::move(best_z);
  res.objective = best_value;
  return res;
}

}  // namespace

double PlacementSolution::rate(double pt_over_sigma2) const {
  return awgn_capacity(pt_over_sigma2 / objective);
}

PlacementSolution solve_placement(const PlacementProblem& problem,
                                  const PlacementOptions& options) {
  if (problem.relay_count < 0) {
    throw std::invalid_argument("solve_placement: relay_count must be >= 0");
  }
  if (!(problem.lambda > 0.0)) {
    throw std::invalid_argument("solve_placement: lambda must be > 0");
  }
  const int n = problem.relay_count;
  const double big_e = std::exp(problem.lambda);

  PlacementSolution sol;
  if (n == 0) {
    sol.objective = big_e;
    sol.gain = 1.0;
    return sol;
  }

  std::vector<std::vector<double>> seeds;
  seeds.emplace_back(n, 1.0);  // everything at the source
  {
    std::vector<double> uniform(n);
    for (int k = 0; k < n; ++k) {
      uniform[k] = std::exp(problem.lambda * (k + 1) / (n + 1));
    }
    seeds.push_back(std::move(uniform));
  }
  if (n == 1) {
    // Stationary point of z + (E - z)/(1 + z), clamped to the feasible set.
    seeds.push_back({std::max(std::sqrt(1.0 + big_e) - 1.0, 1.0)});
  }
  for (const auto& extra : options.extra_seeds) {
    if (static_cast<int>(extra.size()) != n) {
      throw std::invalid_argument(
          "solve_placement: extra seed size must equal relay_count");
    }
    std::vector<double> cleaned = extra;
    for (double& v : cleaned) v = std::clamp(v, 1.0, big_e);
    std::sort(cleaned.begin(), cleaned.end());
    seeds.push_back(std::move(cleaned));
  }

  bool have_best = false;
  DescentResult best;
  int best_seed = 0;
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    DescentResult run = coordinate_descent(seeds[i], big_e, options);
    if (!have_best || run.objective < best.objective) {
      best = std::move(run);
      best_seed = i;
      have_best = true;
    }
  }

  sol.z = best.z;
  sol.objective = best.objective;
  sol.gain = big_e / best.objective;
  sol.converged = best.converged;
  sol.sweeps = best.sweeps;
  sol.seed_index = best_seed;
  sol.y_over_l.resize(n);
  for (int k = 0; k < n; ++k) {
    sol.y_over_l[k] = std::log(sol.z[k]) / problem.lambda;
  }

  if (options.unimodality_probe) {
    std::vector<double> probe = sol.z;
    for (int k = 0; k < n && sol.unimodality_ok; ++k) {
      const double lo = k == 0 ? 1.0 : probe[k - 1];
      const double hi = k == n - 1 ? big_e : probe[k + 1];
      const double keep = probe[k];
      auto slice = [&](double v) {
        probe[k] = v;
        return objective_value(probe, big_e);
      };
      sol.unimodality_ok = slice_is_unimodal(slice, lo, hi);
      probe[k] = keep;
    }
  }
  return sol;
}

std::vector<RateTableRow> rate_vs_N_table(double lambda, int n_max,
                                          double pt_over_sigma2) {
  if (n_max < 1) {
    throw std::invalid_argument("rate_vs_N_table: n_max must be >= 1");
  }
  const double big_e = std::exp(lambda);
  std::vector<RateTableRow> rows;
  rows.reserve(n_max);
  std::vector<double> prev;
  for (int n = 1; n <= n_max; ++n) {
    PlacementProblem problem{n, lambda};
    PlacementOptions options;
    if (!prev.empty()) {
      // A relay parked at the sink leaves H unchanged, so the warm start
      // already achieves the previous optimum: H(N) <= H(N-1).
      std::vector<double> warm = prev;
      warm.push_back(big_e);
      options.extra_seeds.push_back(std::move(warm));
    }
    PlacementSolution sol = solve_placement(problem, options);
    rows.push_back({n, sol.rate(pt_over_sigma2), sol.gain});
    prev = sol.z;
  }
  return rows;
}

}  // namespace relayline
