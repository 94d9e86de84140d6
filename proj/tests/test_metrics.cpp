#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mmfair/metrics.hpp"

using namespace mmfair;

TEST_CASE("gini of known vectors") {
  CHECK(*gini(std::span<const double>(std::vector<double>{100, 300})) == doctest::Approx(0.25));
  CHECK(*gini(std::span<const double>(std::vector<double>{5, 5, 5})) == doctest::Approx(0.0));
  CHECK(*gini(std::span<const double>(std::vector<double>{0, 0, 9})) == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(gini(std::span<const double>(std::vector<double>{})).has_value());
  CHECK_FALSE(gini(std::span<const double>(std::vector<double>{0, 0})).has_value());
}

TEST_CASE("max-min measure") {
  const auto a = max_min_measure(std::span<const double>(std::vector<double>{100, 300}));
  CHECK(a.value == doctest::Approx(-4.0));
  CHECK_FALSE(a.degenerate);
  const auto b = max_min_measure(std::span<const double>(std::vector<double>{763, 763, 1504}));
  CHECK(b.value == doctest::Approx(-3.97116).epsilon(1e-5));
  const auto c = max_min_measure(std::span<const double>(std::vector<double>{0, 10}));
  CHECK(c.degenerate);
  CHECK(std::isinf(c.value));
  CHECK(max_min_measure(std::span<const double>(std::vector<double>{4, 4, 4, 4})).value == doctest::Approx(-4.0));
}

TEST_CASE_TEMPLATE("scalar-generic metrics agree", Scalar, float, double, long double) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(3);
  v << Scalar(763), Scalar(763), Scalar(1504);
  CHECK(static_cast<double>(*gini(v)) == doctest::Approx(0.1630).epsilon(1e-3));
  CHECK(static_cast<double>(max_min_measure(v).value) == doctest::Approx(-3.97116).epsilon(1e-4));
}

TEST_CASE("summary block") {
  const auto r = summarize(std::vector<double>{100, 300});
  CHECK(r.total_throughput == 400.0);
  CHECK(r.mean_throughput == 200.0);
  CHECK(*r.gini == doctest::Approx(0.25));
  CHECK(r.max_min.value == doctest::Approx(-4.0));
}

TEST_CASE("gini properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng() % 12);
    for (auto& x : v) x = u(rng);
    const double g = *gini(std::span<const double>(v));
    const auto n = static_cast<double>(v.size());
    CHECK(g >= -1e-12);
    CHECK(g <= (n - 1) / n + 1e-12);
    // scale invariance
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= 7.5;
    CHECK(*gini(std::span<const double>(scaled)) == doctest::Approx(g));
    // the measure lies in [-inf, -n], with -n only for equal rates
    CHECK(max_min_measure(std::span<const double>(v)).value <= -n + 1e-9);
  }
}
