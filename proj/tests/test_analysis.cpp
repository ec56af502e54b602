#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracrd/analysis.hpp"
#include "fracrd/norms.hpp"
#include "fracrd/spectral.hpp"
#include "oracles.hpp"

using namespace fracrd;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

TEST_CASE("lp norms") {
  SUBCASE("constant field") {
    auto g = build_grid(Domain::box({0, 2}, {-1, 0.5}, Boundary::Neumann), {10, 6});
    ScalarField c(g);
    for (double& v : c.values()) v = -1.5;
    const double measure = 2.0 * 1.5;
    for (double p : {1.0, 2.0, 3.5})
      CHECK(lp_norm(c, p).value == Approx(std::pow(std::pow(1.5, p) * measure, 1.0 / p)).epsilon(1e-13));
    CHECK(lp_norm(c, kInfinity).value == 1.5);
    CHECK(integral(c) == Approx(-1.5 * measure));
    CHECK(mean(c) == Approx(-1.5));
  }
  SUBCASE("normalised eigenfunction has unit L2 norm") {
    for (std::size_t K : {64u, 128u}) {
      auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {K});
      CHECK(std::abs(lp_norm(sample_eigenfunction(g, {1}), 2.0).value - 1.0) < 2e-3);
    }
  }
  SUBCASE("sup norm is the largest magnitude") {
    auto g = build_grid(Domain::interval(0, 1, Boundary::Dirichlet), {33});
    const auto u = oracle::random_field(g, 5);
    CHECK(lp_norm(u, kInfinity).value == oracle::max_abs(u.values()));
    CHECK(lp_norm(u, kInfinity).quadrature == "max");
    CHECK(lp_norm(u, 2.0).quadrature == "rectangle");
  }
  SUBCASE("monotone in pointwise magnitude") {
    auto g = build_grid(Domain::interval(0, 1, Boundary::Neumann), {40});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0, 1);
    for (int n = 0; n < 20; ++n) {
      const auto v = oracle::random_field(g, 100 + n);
      ScalarField u = v;
      for (double& x : u.values()) x *= dist(rng);
      for (double p : {1.0, 1.5, 2.0, 7.0, kInfinity}) CHECK(lp_norm(u, p).value <= lp_norm(v, p).value);
    }
  }
  SUBCASE("p below one is rejected") {
    auto g = build_grid(Domain::interval(0, 1, Boundary::Neumann), {4});
    CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), std::invalid_argument);
  }
  SUBCASE("inner product is the quadrature of the product") {
    auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {50});
    CHECK(inner_product(sample_eigenfunction(g, {2}), sample_eigenfunction(g, {5})) == Approx(0.0).scale(1.0));
    CHECK(inner_product(sample_eigenfunction(g, {3}), sample_eigenfunction(g, {3})) == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("interpolation inequality") {
  auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {64});
  SUBCASE("equal orders are tight") {
    const auto u = oracle::random_field(g, 1);
    const auto r = interpolation_check(u, 0.6, 0.6, 2.0);
    CHECK(std::abs(r.slack) <= 1e-12 * r.rhs);
    CHECK(r.passed);
  }
  SUBCASE("single modes are tight") {
    for (std::size_t k : {1u, 7u, 40u}) {
      const auto e = sample_eigenfunction(g, {k});
      const auto r = interpolation_check(e, 0.3, 0.7, 2.0);
      CHECK(r.lhs == Approx(std::pow(static_cast<double>(k * k), 0.3)).epsilon(1e-10));
      CHECK(std::abs(r.slack) <= 1e-10 * r.rhs);
      CHECK(r.passed);
    }
  }
  SUBCASE("random fields never violate the p = 2 case") {
    for (auto [s1, s2] : {std::pair{0.3, 0.7}, {0.5, 0.9}, {0.1, 1.0}})
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = interpolation_check(oracle::random_field(g, seed), s1, s2, 2.0);
        CHECK(r.slack >= -1e-12 * r.rhs);
        CHECK(r.tolerance == Approx(1e-12 * r.rhs));
      }
  }
  SUBCASE("other exponents use the looser tolerance") {
    const auto r = interpolation_check(oracle::random_field(g, 3), 0.3, 0.7, 4.0);
    CHECK(r.tolerance == Approx(1e-6 * r.rhs));
  }
  SUBCASE("inverted orders are rejected") {
    CHECK_THROWS_AS(interpolation_check(oracle::random_field(g, 3), 0.7, 0.3, 2.0), std::invalid_argument);
  }
}

TEST_CASE("semigroup contraction check") {
  auto g = build_grid(Domain::box({0, 1}, {0, 1}, Boundary::Neumann), {16, 16});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = contraction_check(oracle::random_field(g, seed), 0.5, 1.0, 0.1);
    CHECK(r.passed);
    CHECK(r.lhs <= r.rhs);
    CHECK(r.tolerance == 0.0);
  }
  ScalarField c(g);
  for (double& v : c.values()) v = 2.0;
  const auto r = contraction_check(c, 0.5, 1.0, 3.0);
  CHECK(r.slack == Approx(0.0).scale(1.0));
}

TEST_CASE("Stroock-Varopoulos diagnostic") {
  SUBCASE("Neumann constants give zero on both sides") {
    auto g = build_grid(Domain::interval(0, 1, Boundary::Neumann), {32});
    ScalarField c(g);
    for (double& v : c.values()) v = 1.3;
    const auto r = stroock_varopoulos_check(c, 0.5, 2.0);
    CHECK(std::abs(r.lhs) < 1e-12);
    CHECK(std::abs(r.rhs) < 1e-12);
  }
  SUBCASE("scaled first Dirichlet mode against scalar quadrature") {
    auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {256});
    const double c = 1.7, s = 0.5, q = 2.0;
    const auto u = c * sample_eigenfunction(g, {1});
    const auto r = stroock_varopoulos_check(u, s, q);
    // rhs holds <A^s u, u^q>; int_0^pi (sqrt(2/pi) sin x)^3 dx = (2/pi)^{3/2} * 4/3, lambda_1 = 1.
    const double expected = std::pow(c, q + 1) * 1.0 * std::pow(2.0 / pi, 1.5) * 4.0 / 3.0;
    CHECK(r.rhs == Approx(expected).epsilon(1e-6));
    MESSAGE("first-mode slack " << r.slack << " tolerance " << r.tolerance);
  }
  SUBCASE("q must exceed one") {
    auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {16});
    CHECK_THROWS_AS(stroock_varopoulos_check(ScalarField(g), 0.5, 1.0), std::invalid_argument);
  }
}

TEST_CASE("decay exponent") {
  std::vector<TimeSample> power, flat;
  for (int i = 0; i < 12; ++i) {
    const double t = std::pow(10.0, -2 + 0.25 * i);
    power.push_back({t, 3.0 * std::pow(t, -2.0)});
    flat.push_back({t, 0.42});
  }
  CHECK(decay_exponent(power) == Approx(-2.0).epsilon(1e-10));
  CHECK(std::abs(decay_exponent(flat)) < 1e-12);
  CHECK_THROWS_AS(decay_exponent({power.begin(), power.begin() + 4}), std::invalid_argument);
  auto bad = power;
  bad[3].value = 0.0;
  CHECK_THROWS_AS(decay_exponent(bad), std::invalid_argument);
  bad = power;
  bad[0].t = -1.0;
  CHECK_THROWS_AS(decay_exponent(bad), std::invalid_argument);
  bad = power;
  std::swap(bad[2], bad[3]);
  CHECK_THROWS_AS(decay_exponent(bad), std::invalid_argument);
}

TEST_CASE("windowed fit recovers a planted power law inside a distorted series") {
  std::vector<TimeSample> series;
  for (int i = 0; i <= 80; ++i) {
    const double t = std::pow(10.0, -4 + 0.05 * i);
    // Plateau below 1e-3, t^{-1.5} in between, exponential tail after 1.
    double v = std::pow(std::max(t, 1e-3), -1.5);
    if (t > 1.0) v *= std::exp(-(t - 1.0));
    series.push_back({t, v});
  }
  const auto fit = fit_decay_window(series, 1e-3, 1.0);
  CHECK(fit.slope == Approx(-1.5).epsilon(1e-9));
  CHECK(fit.t_begin >= 1e-3 * (1 - 1e-12));
  CHECK(fit.t_end <= 1.0 * (1 + 1e-12));
  CHECK_THROWS_AS(fit_decay_window(series, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("ultracontractive slope, s = 0.5") {
  auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {512});
  const auto res = ultracontractive_decay(g, 0.5);
  CHECK(res.expected_slope == -1.0);
  CHECK(std::abs(res.fit.slope - res.expected_slope) <= 0.1 * std::abs(res.expected_slope));
  MESSAGE("slope " << res.fit.slope << " on [" << res.fit.t_begin << ", " << res.fit.t_end << "]");
}

TEST_CASE("comparison harness") {
  auto g = build_grid(Domain::interval(0, pi, Boundary::Dirichlet), {64});
  const auto e1 = sample_eigenfunction(g, {1});
  SUBCASE("identical problems give zero gap") {
    ComparisonProblem p{0.5, 1.0, g, 1e-2, e1, e1, {}, {}, 0.5};
    const auto r = run_comparison_pair(p);
    CHECK(r.lhs == 0.0);
    CHECK(r.passed);
  }
  SUBCASE("zero versus nonnegative data") {
    const auto z0 = sample(g, [](auto x) { return std::pow(std::sin(x[0]), 2); });
    ComparisonProblem p{0.4, 1.0, g, 1e-2, ScalarField(g), z0, {}, {}, 1.0};
    CHECK(run_comparison_pair(p).passed);
  }
  SUBCASE("shifted data with a larger source keeps a positive margin") {
    ScalarField z0 = e1;
    for (double& v : z0.values()) v += 0.1;
    ComparisonProblem p{0.6, 1.0, g, 1e-2, e1, z0, [](double, auto) { return 0.0; },
                        [](double, auto) { return 0.05; }, 1.0};
    const auto r = run_comparison_pair(p);
    MESSAGE("margin " << -r.lhs);
    CHECK(r.passed);
  }
  SUBCASE("unordered inputs are rejected before running") {
    ComparisonProblem p{0.5, 1.0, g, 1e-2, e1, ScalarField(g), {}, {}, 1.0};
    CHECK_THROWS_AS(run_comparison_pair(p), std::invalid_argument);
    ComparisonProblem q{0.5, 1.0, g, 1e-2, e1, e1, [](double t, auto) { return t > 0.5 ? 1.0 : 0.0; }, {}, 1.0};
    CHECK_THROWS_AS(run_comparison_pair(q), std::invalid_argument);
  }
}

TEST_CASE("checks are deterministic") {
  auto g = build_grid(Domain::interval(0, 1, Boundary::Neumann), {32});
  const auto u = oracle::random_field(g, 9, 0, 1);
  const auto a = stroock_varopoulos_check(u, 0.4, 3.0);
  const auto b = stroock_varopoulos_check(u, 0.4, 3.0);
  CHECK(a.lhs == b.lhs);
  CHECK(a.rhs == b.rhs);
  const auto c = interpolation_check(u, 0.2, 0.8, 2.0);
  const auto d = interpolation_check(u, 0.2, 0.8, 2.0);
  CHECK(c.slack == d.slack);
}
