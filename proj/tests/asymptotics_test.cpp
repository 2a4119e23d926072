#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/mpfr.hpp>

#include "pmaps/asymptotics.hpp"
#include "pmaps/equations.hpp"

using namespace pmaps;

namespace {

using Big = boost::multiprecision::mpfr_float_100;

std::string dec(const Big& x) { return x.str(0, std::ios_base::scientific); }

// a_n(x) = c(x) n^(-5/2) rho(x)^n (1 + 0.3/n), with quadratic rho and c.
struct Planted {
  std::vector<std::string> A, B, C2;
};
Planted planted(double r0, double r1, double r2, double c0, double c1, double c2, int len) {
  Planted p;
  for (int n = 0; n < len; ++n) {
    const Big N = n == 0 ? Big(1) : Big(n);
    const Big w = pow(N, Big(-2.5)) * (1 + Big(0.3) / N);
    const Big p0 = pow(Big(r0), n);
    const Big p1 = n >= 1 ? n * pow(Big(r0), n - 1) : Big(0);
    const Big p2 = n >= 2 ? Big(n) * (n - 1) * pow(Big(r0), n - 2) : Big(0);
    p.A.push_back(dec(c0 * p0 * w));
    p.B.push_back(dec((c1 * p0 + c0 * p1 * r1) * w));
    p.C2.push_back(dec((c2 * p0 + 2 * c1 * p1 * r1 + c0 * (p2 * r1 * r1 + p1 * r2)) * w));
  }
  return p;
}

DistributionTable table(std::map<long, long> hist) {
  DistributionTable d;
  for (auto [x, c] : hist) {
    d.histogram[x] = c;
    d.total += c;
  }
  return d;
}

}  // namespace

TEST_CASE("growth of a synthetic sequence") {
  std::vector<std::string> A;
  for (int n = 0; n < 60; ++n) A.push_back(dec(n == 0 ? Big(1) : pow(Big(12), n) * pow(Big(n), Big(-2.5))));
  GrowthEstimate g = estimate_growth_decimal(A);
  CHECK(std::abs(g.rho0 - 12) < 1e-6);
  CHECK(std::abs(g.alpha_free + 2.5) < 1e-6);
  CHECK_THROWS_AS(estimate_growth_decimal(std::vector<std::string>(10, "1")), UsageError);
  std::vector<std::string> bad(40, "1");
  bad[35] = "0";
  CHECK_THROWS_AS(estimate_growth_decimal(bad), UsageError);
}

TEST_CASE("planted rho, rho', rho'' are recovered") {
  for (auto [r0, r1, r2] : {std::tuple{5.0, 0.7, 0.3}, {12.0, 0.05, 0.01}, {6.75, 1.5, -0.4}}) {
    Planted p = planted(r0, r1, r2, 2, 0.5, 0.1, 200);
    GrowthEstimate g = estimate_growth_decimal(p.A, p.B, p.C2);
    CHECK(std::abs(g.rho0 / r0 - 1) < 1e-3);
    CHECK(std::abs(g.rho1 / r1 - 1) < 1e-3);
    CHECK(std::abs(g.rho2 / r2 - 1) < 1e-3);
    CHECK(std::abs(g.c_log_deriv - 0.25) < 1e-3);
  }
}

TEST_CASE("growth of the class series") {
  for (auto [cls, rho] : {std::pair{MapClass::Bipartite, 8.0}, {MapClass::TwoConnected, 6.75}, {MapClass::All, 12.0}}) {
    LabeledCoefficients L = labeled_coefficients(solve_tutte(cls, 120));
    GrowthEstimate g = estimate_growth(L.A);
    CHECK(std::abs(g.rho0 / rho - 1) < 1e-6);
  }
}

TEST_CASE("moment constants") {
  GrowthEstimate g;
  g.rho0 = 4;
  g.rho1 = 0;
  g.rho2 = 2;
  MomentConstants m = moment_constants(g);
  CHECK(m.c1 == 0);
  CHECK(m.c2_sq == doctest::Approx(0.5));
  g.rho1 = 1;
  m = moment_constants(g);
  CHECK(m.c1 == doctest::Approx(0.25));
  CHECK(m.c2_sq == doctest::Approx((2 * 4 + 4 - 1) / 16.0));
}

TEST_CASE("saddle formula special cases") {
  SaddleInput s{1000, 0, std::log(12.0), 0.3, 0.1, 0.5};
  CHECK(saddle_factorial_moment(s) == doctest::Approx(0.5 - 2.5 * std::log(1000.0) + 1000 * std::log(12.0)));
  // rho'' rho = rho'^2 means f'' = 0: no exponential correction
  SaddleInput a{1e4, 50, 1, 0.3, 0, 0}, b = a;
  b.f2 = 1e-9;
  CHECK(saddle_factorial_moment(b) - saddle_factorial_moment(a) == doctest::Approx(2500 * 1e-9 / (2e4 * 0.09)));
  SaddleInput bad{100, 3, 0, -1, 0, 0};
  CHECK_THROWS_AS(saddle_factorial_moment(bad), UsageError);
}

TEST_CASE("contour oracle") {
  // [x^k] e^{n x} = n^k / k!, on the radius 1 when n = k
  for (double k : {5.0, 20.0, 60.0}) {
    ContourResult r = contour_oracle({0, 1}, {}, k, k);
    CHECK(r.log_value == doctest::Approx(k * std::log(k) - std::lgamma(k + 1)).epsilon(1e-10));
  }
  CHECK(contour_oracle({0.7, 0.2}, {0.1}, 50, 0).log_value == doctest::Approx(50 * 0.7 + 0.1));
  CHECK_THROWS_AS(contour_oracle({0, -1}, {}, 10, 2), UsageError);
  CHECK(contour_oracle({0, 1}, {}, 20, 20, 30).log_value ==
        doctest::Approx(contour_oracle({0, 1}, {}, 20, 20, 100).log_value).epsilon(1e-12));
}

TEST_CASE("saddle formula converges to the contour integral") {
  const std::vector<double> f = {std::log(12.0), 0.3, -0.05, 0.01}, g = {0.1, 0.2};
  double prev = 1;
  for (double n : {1e4, 1e5, 1e6}) {
    const double k = std::floor(std::sqrt(n));
    SaddleInput s{n, k, f[0], f[1], 2 * f[2], g[0]};
    const double err = std::abs(std::expm1(saddle_factorial_moment(s) - contour_factorial_moment(f, g, n, k)));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("Gao-Wormald ratios") {
  auto rows = gw_condition_check({table({{0, 3}, {1, 4}, {2, 2}, {3, 1}})}, 3);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ratio == 1);
  CHECK(rows[1].ratio == 1);
  CHECK(rows[1].ratio_k_squared != doctest::Approx(1));
  // second order: mu^2 exp((var - mu)/mu^2) is close to E[(X)_2]
  CHECK(rows[2].ratio == doctest::Approx(1).epsilon(0.1));
  auto deg = gw_condition_check({table({{2, 5}})}, 2);
  CHECK(deg[1].degenerate);
  CHECK(deg[0].ratio == 1);
}

TEST_CASE("sandwich rows") {
  DistributionTable d = table({{0, 2}, {2, 2}});
  d.n = 3;
  std::vector<LabeledConfigCounts> rows = {{3, 0, 4, 4}, {3, 2, 4, 4}, {3, 3, 0, 0}};
  auto s = sandwich_check(rows, {d});
  CHECK(s[0].left_equal);
  CHECK(s[0].right == doctest::Approx(8));
  CHECK(s[1].left_holds);
  CHECK(s[2].right == doctest::Approx(0.125 * 4));
  rows[0].n = 9;
  CHECK_THROWS_AS(sandwich_check(rows, {d}), UsageError);
}

TEST_CASE("Kolmogorov distance to the normal law") {
  CHECK(normal_cdf(0) == doctest::Approx(0.5));
  CHECK(normal_cdf(-1) == doctest::Approx(0.158655254).epsilon(1e-9));
  KsResult point = ks_normality(table({{4, 7}}));
  CHECK(point.degenerate);
  CHECK(point.distance == doctest::Approx(0.5));
  // atoms at -1 and +1: the largest gap is 1/2 - Phi(-1), on either atom
  KsResult two = ks_normality(table({{0, 1}, {2, 1}}));
  CHECK_FALSE(two.degenerate);
  CHECK(two.distance == doctest::Approx(0.5 - 0.158655254).epsilon(1e-4));
}
