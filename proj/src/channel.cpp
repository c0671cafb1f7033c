#include "relayline/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace relayline {

double awgn_capacity(double snr) {
  if (!(snr >= 0.0)) {
    throw std::invalid_argument("awgn_capacity: snr must be >= 0");
  }
  // log2(1+x) via log1p for accuracy near zero.
  return 0.5 * std::log1p(snr) / std::log(2.0);
}

PathLossModel PathLossModel::exponential(double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("PathLossModel: rho must be > 0");
  }
  PathLossModel m;
  m.family = PathLossFamily::Exponential;
  m.rho = rho;
  return m;
}

PathLossModel PathLossModel::power_law(double eta) {
  if (!(eta > 1.0)) {
    throw std::invalid_argument("PathLossModel: eta must be > 1");
  }
  PathLossModel m;
  m.family = PathLossFamily::PowerLaw;
  m.eta = eta;
  return m;
}

PathLossModel PathLossModel::modified_power_law(double eta, double b) {
  if (!(eta > 1.0)) {
    throw std::invalid_argument("PathLossModel: eta must be > 1");
  }
  if (!(b > 0.0)) {
    throw std::invalid_argument("PathLossModel: b must be > 0");
  }
  PathLossModel m;
  m.family = PathLossFamily::ModifiedPowerLaw;
  m.eta = eta;
  m.b = b;
  return m;
}

double gain(const PathLossModel& model, double r) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("gain: distance must be >= 0");
  }
  switch (model.family) {
    case PathLossFamily::Exponential:
      return std::exp(-model.rho * r);
    case PathLossFamily::PowerLaw:
      if (r == 0.0) {
        throw std::invalid_argument("gain: power law undefined at r = 0");
      }
      return std::pow(r, -model.eta);
    case PathLossFamily::ModifiedPowerLaw:
      // min{r^-eta, b^-eta}: the bound takes over for r <= b.
      return r <= model.b ? std::pow(model.b, -model.eta)
                          : std::pow(r, -model.eta);
  }
  throw std::logic_error("gain: unknown path-loss family");
}

LinePlacement::LinePlacement(double length_, std::vector<double> relays_)
    : length(length_), relays(std::move(relays_)) {
  if (!(length > 0.0)) {
    throw std::invalid_argument("LinePlacement: length must be > 0");
  }
  double prev = 0.0;
  for (double y : relays) {
    if (!(y >= prev)) {
      throw std::invalid_argument(
          "LinePlacement: relay coordinates must be nondecreasing and >= 0");
    }
    prev = y;
  }
  if (!relays.empty() && relays.back() > length) {
    throw std::invalid_argument(
        "LinePlacement: relay coordinates must not exceed length");
  }
}

double LinePlacement::position(std::size_t node) const {
  if (node == 0) return 0.0;
  if (node == relays.size() + 1) return length;
  if (node > relays.size() + 1) {
    throw std::out_of_range("LinePlacement::position: node index too large");
  }
  return relays[node - 1];
}

namespace detail {

PairMatrix::PairMatrix(std::size_t node_count, double fill)
    : n_(node_count), v_(node_count * (node_count - 1) / 2, fill) {
  if (node_count < 2) {
    throw std::invalid_argument("PairMatrix: need at least 2 nodes");
  }
}

std::size_t PairMatrix::index(std::size_t i, std::size_t j) const {
  if (i >= j || j >= n_) {
    throw std::out_of_range("PairMatrix: require i < j < node_count");
  }
  // Row-major upper triangle: row i starts after i full rows of
  // shrinking width n-1, n-2, ...
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double PairMatrix::operator()(std::size_t i, std::size_t j) const {
  return v_[index(i, j)];
}

double& PairMatrix::operator()(std::size_t i, std::size_t j) {
  return v_[index(i, j)];
}

}  // namespace detail

GainMatrix GainMatrix::from_placement(const LinePlacement& placement,
                                      const PathLossModel& model) {
  const std::size_t n = placement.node_count();
  GainMatrix g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      g(i, j) = gain(model, placement.position(j) - placement.position(i));
    }
  }
  return g;
}

GainMatrix GainMatrix::from_points(const std::vector<Point2>& nodes,
                                   const PathLossModel& model) {
  const std::size_t n = nodes.size();
  if (n < 2) {
    throw std::invalid_argument("GainMatrix::from_points: need >= 2 nodes");
  }
  GainMatrix g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r =
          std::hypot(nodes[j].x - nodes[i].x, nodes[j].y - nodes[i].y);
      g(i, j) = gain(model, r);
    }
  }
  return g;
}

double PowerMatrix::total() const {
  const std::size_t n = node_count();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sum += (*this)(i, j);
    }
  }
  return sum;
}

std::vector<double> achievable_rate_terms(const GainMatrix& gains,
                                          const PowerMatrix& powers,
                                          double sigma2) {
  const std::size_t n = gains.node_count();
  if (powers.node_count() != n) {
    throw std::invalid_argument(
        "achievable_rate_terms: gain/power node counts differ");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("achievable_rate_terms: sigma2 must be > 0");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(powers(i, j) >= 0.0)) {
        throw std::invalid_argument(
            "achievable_rate_terms: powers must be >= 0");
      }
    }
  }
  // Constraint k: node k decodes from the coherent sum of everything the
  // earlier nodes spent on messages it can already strip or is receiving.
  std::vector<double> terms(n - 1, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double total = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      double amplitude = 0.0;
      for (std::size_t i = 0; i < j; ++i) {
        amplitude += std::sqrt(gains(i, k)) * std::sqrt(powers(i, j));
      }
      total += amplitude * amplitude;
    }
    terms[k - 1] = total / sigma2;
  }
  return terms;
}

double achievable_rate(const GainMatrix& gains, const PowerMatrix& powers,
                       double sigma2) {
  const std::vector<double> terms = achievable_rate_terms(gains, powers, sigma2);
  const double weakest = *std::min_element(terms.begin(), terms.end());
  return awgn_capacity(weakest);
}

ProjectionCheck projection_improves_rate_check(const std::vector<Point2>& nodes,
                                               const PowerMatrix& powers,
                                               const PathLossModel& model,
                                               double sigma2) {
  const std::size_t n = nodes.size();
  if (n < 2) {
    throw std::invalid_argument("projection check: need >= 2 nodes");
  }
  if (nodes.front().x != 0.0 || nodes.front().y != 0.0) {
    throw std::invalid_argument("projection check: source must sit at (0,0)");
  }
  const double L = nodes.back().x;
  if (!(L > 0.0) || nodes.back().y != 0.0) {
    throw std::invalid_argument(
        "projection check: sink must sit at (L,0), L > 0");
  }

  ProjectionCheck out;
  out.rate_before =
      achievable_rate(GainMatrix::from_points(nodes, model), powers, sigma2);

  // Step 1: project onto the source-sink axis; every pairwise distance
  // weakly shrinks.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = nodes[i].x;

  // Step 2: compact off-segment relays into the segment. The compaction
  // window width is half the minimum pairwise coordinate gap, so each moved
  // relay ends up closer to everything than it started.
  double min_gap = L;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      min_gap = std::min(min_gap, std::abs(x[i] - x[j]));
    }
  }

  std::vector<std::size_t> beyond, before;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (x[i] > L) beyond.push_back(i);
    if (x[i] < 0.0) before.push_back(i);
  }
  auto by_coordinate = [&x](std::size_t a, std::size_t b) {
    return x[a] < x[b];
  };
  std::sort(beyond.begin(), beyond.end(), by_coordinate);
  std::sort(before.begin(), before.end(), by_coordinate);

  if (min_gap > 0.0) {
    const double w = min_gap / 2.0;
    for (std::size_t t = 0; t < beyond.size(); ++t) {
      x[beyond[t]] =
          L - w + w * static_cast<double>(t + 1) / (beyond.size() + 1);
    }
    for (std::size_t t = 0; t < before.size(); ++t) {
      x[before[t]] = w * static_cast<double>(t + 1) / (before.size() + 1);
    }
  } else {
    // Coincident projections: plain clamping still weakly shrinks distances.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      x[i] = std::clamp(x[i], 0.0, L);
    }
  }

  std::vector<Point2> compacted(n);
  for (std::size_t i = 0; i < n; ++i) compacted[i] = {x[i], 0.0};
  out.rate_after = achievable_rate(GainMatrix::from_points(compacted, model),
                                   powers, sigma2);
  out.projected_x.assign(x.begin() + 1, x.end() - 1);
  out.improved = out.rate_after >= out.rate_before - 1e-12;
  return out;
}

}  // namespace relayline
