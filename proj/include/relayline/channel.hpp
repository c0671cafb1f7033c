#pragma once

#include <cstddef>
#include <vector>

namespace relayline {

/// Shannon capacity of a real AWGN channel at signal-to-noise ratio `snr`,
/// in bits per channel use: C(x) = (1/2) log2(1 + x). Requires snr >= 0.
double awgn_capacity(double snr);

enum class PathLossFamily { Exponential, PowerLaw, ModifiedPowerLaw };

/// Distance-to-power-gain law. Exponential: g(r) = exp(-rho*r).
/// PowerLaw: g(r) = r^-eta, defined for r > 0 only. ModifiedPowerLaw:
/// g(r) = min{r^-eta, b^-eta}, bounded near the transmitter.
struct PathLossModel {
  PathLossFamily family = PathLossFamily::Exponential;
  double rho = 1.0;  // exponential decay rate, > 0
  double eta = 2.0;  // power-law exponent, > 1
  double b = 0.1;    // reference distance bounding the modified law, > 0

  static PathLossModel exponential(double rho);
  static PathLossModel power_law(double eta);
  static PathLossModel modified_power_law(double eta, double b);
};

/// Power gain over distance r under `model`. Throws std::invalid_argument
/// for negative r or PowerLaw at r = 0 (unbounded near-field).
double gain(const PathLossModel& model, double r);

/// Nodes on a segment of given length: source at 0, relays at the stored
/// coordinates (nondecreasing, inside [0, length]), sink at `length`.
struct LinePlacement {
  double length = 1.0;
  std::vector<double> relays;

  LinePlacement(double length, std::vector<double> relays);
  std::size_t node_count() const { return relays.size() + 2; }
  double position(std::size_t node) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

namespace detail {
// Upper-triangular pair matrix (entries for i < j only).
class PairMatrix {
 public:
  PairMatrix() = default;
  explicit PairMatrix(std::size_t node_count, double fill = 0.0);
  std::size_t node_count() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  double& operator()(std::size_t i, std::size_t j);

 private:
  std::size_t index(std::size_t i, std::size_t j) const;
  std::size_t n_ = 0;
  std::vector<double> v_;
};
}  // namespace detail

/// Pairwise power gains g[i][j] for node indices i < j.
class GainMatrix : public detail::PairMatrix {
 public:
  GainMatrix() = default;
  explicit GainMatrix(std::size_t node_count) : PairMatrix(node_count, 1.0) {}

  static GainMatrix from_placement(const LinePlacement& placement,
                                   const PathLossModel& model);
  static GainMatrix from_points(const std::vector<Point2>& nodes,
                                const PathLossModel& model);
};

/// Pairwise transmit powers P[i][j] >= 0: power node i spends on the
/// message decoded by node j.
class PowerMatrix : public detail::PairMatrix {
 public:
  PowerMatrix() = default;
  explicit PowerMatrix(std::size_t node_count) : PairMatrix(node_count, 0.0) {}
  double total() const;
};

/// Received-SNR argument of each decoding constraint k = 1..n-1:
/// (1/sigma2) * sum_{j<=k} ( sum_{i<j} sqrt(g[i][k] P[i][j]) )^2.
std::vector<double> achievable_rate_terms(const GainMatrix& gains,
                                          const PowerMatrix& powers,
                                          double sigma2);

/// Decode-and-forward achievable rate: min over the decoding constraints
/// of awgn_capacity applied to achievable_rate_terms.
double achievable_rate(const GainMatrix& gains, const PowerMatrix& powers,
                       double sigma2);

struct ProjectionCheck {
  double rate_before = 0.0;
  double rate_after = 0.0;
  std::vector<double> projected_x;  // relay coordinates after compaction
  bool improved = false;            // rate_after >= rate_before - 1e-12
};

/// Projects an arbitrary planar relay deployment onto the source-sink
/// segment and compacts off-segment relays into the segment, keeping the
/// power matrix fixed. Every pairwise distance weakly shrinks, so the
/// returned rate_after is never below rate_before.
/// `nodes` lists all nodes in order: source (0,0), relays, sink (L,0), L > 0.
ProjectionCheck projection_improves_rate_check(const std::vector<Point2>& nodes,
                                               const PowerMatrix& powers,
                                               const PathLossModel& model,
                                               double sigma2);

}  // namespace relayline
