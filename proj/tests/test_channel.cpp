#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "relayline/channel.hpp"

using namespace relayline;

namespace {

// Deterministic uniform doubles for property tests.
std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t i) {
  return static_cast<double>(mix64(seed ^ i) >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("awgn capacity basics") {
  CHECK(awgn_capacity(0.0) == 0.0);
  CHECK(awgn_capacity(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(awgn_capacity(3.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(awgn_capacity(2.0) > awgn_capacity(1.0));
  CHECK_THROWS_AS(awgn_capacity(-0.1), std::invalid_argument);
}

TEST_CASE("path loss families") {
  const auto expo = PathLossModel::exponential(2.0);
  CHECK(gain(expo, 0.0) == 1.0);
  CHECK(gain(expo, 1.5) == doctest::Approx(std::exp(-3.0)).epsilon(1e-14));

  const auto pl = PathLossModel::power_law(2.0);
  CHECK(gain(pl, 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(gain(pl, 0.0), std::invalid_argument);

  const auto mpl = PathLossModel::modified_power_law(2.0, 0.5);
  CHECK(gain(mpl, 0.0) == doctest::Approx(4.0).epsilon(1e-14));  // clamped
  CHECK(gain(mpl, 0.25) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(gain(mpl, 2.0) == doctest::Approx(0.25).epsilon(1e-14));

  CHECK_THROWS_AS(gain(expo, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(PathLossModel::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PathLossModel::power_law(1.0), std::invalid_argument);
  CHECK_THROWS_AS(PathLossModel::modified_power_law(2.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("line placement positions") {
  LinePlacement p(2.0, {0.5, 1.5});
  CHECK(p.node_count() == 4);
  CHECK(p.position(0) == 0.0);
  CHECK(p.position(1) == 0.5);
  CHECK(p.position(2) == 1.5);
  CHECK(p.position(3) == 2.0);
  CHECK_THROWS_AS(p.position(4), std::out_of_range);
  CHECK_THROWS_AS(LinePlacement(1.0, {0.7, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(LinePlacement(1.0, {1.5}), std::invalid_argument);
  CHECK_THROWS_AS(LinePlacement(-1.0, {}), std::invalid_argument);
}

TEST_CASE("pair matrix is strictly upper triangular") {
  detail::PairMatrix m(3, 0.25);
  CHECK(m(0, 1) == 0.25);
  m(0, 2) = 0.5;
  CHECK(m(0, 2) == 0.5);
  CHECK_THROWS_AS(m(1, 1), std::out_of_range);
  CHECK_THROWS_AS(m(2, 1), std::out_of_range);
  CHECK_THROWS_AS(m(0, 3), std::out_of_range);
}

TEST_CASE("gain matrix from a line placement") {
  const auto model = PathLossModel::exponential(1.0);
  LinePlacement p(2.0, {0.5});
  const auto g = GainMatrix::from_placement(p, model);
  CHECK(g(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(g(0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(g(1, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
}

TEST_CASE("rate terms match the hand expansion for one relay") {
  const auto model = PathLossModel::exponential(1.0);
  LinePlacement p(1.0, {0.4});
  const auto g = GainMatrix::from_placement(p, model);
  PowerMatrix powers(3);
  powers(0, 1) = 0.6;
  powers(0, 2) = 0.4;
  powers(1, 2) = 1.0;
  const double sigma2 = 0.5;
  const auto terms = achievable_rate_terms(g, powers, sigma2);
  REQUIRE(terms.size() == 2);
  const double relay_snr = g(0, 1) * 0.6 / sigma2;
  const double sink_sum = g(0, 2) * 0.6 +
                          std::pow(std::sqrt(g(0, 2) * 0.4) +
                                       std::sqrt(g(1, 2) * 1.0),
                                   2.0);
  CHECK(terms[0] == doctest::Approx(relay_snr).epsilon(1e-12));
  CHECK(terms[1] == doctest::Approx(sink_sum / sigma2).epsilon(1e-12));
  CHECK(achievable_rate(g, powers, sigma2) ==
        doctest::Approx(awgn_capacity(std::min(terms[0], terms[1])))
            .epsilon(1e-12));
}

TEST_CASE("rate with no relays reduces to the direct link") {
  const auto model = PathLossModel::exponential(1.2);
  LinePlacement p(1.0, {});
  const auto g = GainMatrix::from_placement(p, model);
  PowerMatrix powers(2);
  powers(0, 1) = 2.0;
  CHECK(achievable_rate(g, powers, 1.0) ==
        doctest::Approx(awgn_capacity(2.0 * std::exp(-1.2))).epsilon(1e-12));
}

TEST_CASE("projection onto the segment never lowers the rate") {
  PowerMatrix powers(3);
  powers(0, 1) = 1.0;
  powers(0, 2) = 0.5;
  powers(1, 2) = 1.0;
  const auto model = PathLossModel::exponential(1.0);

  SUBCASE("relay lifted off the segment") {
    std::vector<Point2> nodes{{0.0, 0.0}, {0.5, 0.8}, {1.0, 0.0}};
    const auto check = projection_improves_rate_check(nodes, powers, model, 1.0);
    CHECK(check.improved);
    CHECK(check.rate_after >= check.rate_before - 1e-12);
    REQUIRE(check.projected_x.size() == 1);
    CHECK(check.projected_x[0] >= 0.0);
    CHECK(check.projected_x[0] <= 1.0);
  }

  SUBCASE("relay beyond the sink gets compacted inside") {
    std::vector<Point2> nodes{{0.0, 0.0}, {1.4, -0.3}, {1.0, 0.0}};
    const auto check = projection_improves_rate_check(nodes, powers, model, 1.0);
    CHECK(check.improved);
    CHECK(check.projected_x[0] <= 1.0);
  }

  SUBCASE("random planar deployments, all three loss models") {
    int improved_count = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t key = 977 + 31 * t;
      const double length = 0.5 + 2.5 * uniform01(key, 1);
      const int n = 1 + static_cast<int>(uniform01(key, 2) * 5.0);
      std::vector<Point2> nodes;
      nodes.push_back({0.0, 0.0});
      for (int i = 0; i < n; ++i) {
        nodes.push_back({length * (2.0 * uniform01(key, 10 + 2 * i) - 0.5),
                         length * (2.0 * uniform01(key, 11 + 2 * i) - 1.0)});
      }
      nodes.push_back({length, 0.0});
      PowerMatrix pw(nodes.size());
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          pw(i, j) = 2.0 * uniform01(key, 100 + 17 * i + j);
        }
      }
      PathLossModel m = PathLossModel::exponential(0.5 + uniform01(key, 3));
      if (t % 3 == 1) m = PathLossModel::power_law(1.5 + 2.0 * uniform01(key, 4));
      if (t % 3 == 2) {
        m = PathLossModel::modified_power_law(1.5 + 2.0 * uniform01(key, 4),
                                              0.05 + 0.2 * uniform01(key, 5));
      }
      const auto check = projection_improves_rate_check(nodes, pw, m, 1.0);
      if (check.improved) ++improved_count;
      for (double x : check.projected_x) {
        CHECK(x >= 0.0);
        CHECK(x <= length);
      }
    }
    CHECK(improved_count == trials);
  }
}
