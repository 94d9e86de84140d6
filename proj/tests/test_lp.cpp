#include <doctest.h>

#include <random>

#include "mmfair/lp.hpp"

using namespace mmfair;

TEST_CASE_TEMPLATE("textbook maximisation", Scalar, double, long double) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
  lp::Problem<Scalar> p(3, 2);
  p.A << 1, 0, 0, 2, 3, 2;
  p.b << 4, 12, 18;
  p.c << 3, 5;
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(static_cast<double>(s.objective) == doctest::Approx(36.0));
  CHECK(static_cast<double>(s.x(0)) == doctest::Approx(2.0));
  CHECK(static_cast<double>(s.x(1)) == doctest::Approx(6.0));
}

TEST_CASE("negative right-hand sides go through phase one") {
  // max -x - y, x + y >= 2, x <= 5  ->  objective -2
  lp::Problem<double> p(2, 2);
  p.A << -1, -1, 1, 0;
  p.b << -2, 5;
  p.c << -1, -1;
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(-2.0));
  CHECK(s.x(0) + s.x(1) == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded problems") {
  lp::Problem<double> bad(2, 1);
  bad.A << 1, -1;
  bad.b << 1, -3;  // x <= 1 and x >= 3
  bad.c << 1;
  CHECK(lp::solve(bad).status == lp::Status::infeasible);

  lp::Problem<double> open(1, 2);
  open.A << 1, -1;
  open.b << 1;
  open.c << 1, 0;
  CHECK(lp::solve(open).status == lp::Status::unbounded);
}

TEST_CASE("random packing problems: feasible solution beats every probe") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 6);
    lp::Problem<double> p(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.A(i, j) = coef(rng) < 0.3 ? 0.0 : coef(rng) * 1e-3;
      p.b(i) = 1.0;
    }
    for (int j = 0; j < n; ++j) p.A(0, j) = std::max(p.A(0, j), 1e-4);
    for (int j = 0; j < n; ++j) p.c(j) = coef(rng);
    const auto s = lp::solve(p);
    REQUIRE(s.status == lp::Status::optimal);
    CHECK((s.x.array() >= -1e-9).all());
    CHECK(((p.A * s.x - p.b).array() <= 1e-7).all());
    for (int probe = 0; probe < 20; ++probe) {
      Eigen::VectorXd x(n);
      for (int j = 0; j < n; ++j) x(j) = coef(rng) * 1e4;
      const double worst = (p.A * x).cwiseQuotient(p.b).maxCoeff();
      if (worst > 0) x /= worst;
      CHECK(p.c.dot(x) <= s.objective + 1e-6 * std::max(1.0, s.objective));
    }
  }
}
