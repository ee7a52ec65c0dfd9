#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "velpert/errors.hpp"
#include "velpert/spectral.hpp"

using namespace velpert;
using std::numbers::pi;

namespace {

const Interval unit{0.0, 1.0};

SpectralFun sine(int n = 1, Interval dom = unit) {
  return SpectralFun::from_function([=](double x) { return std::sin(n * pi * (x - dom.a) / dom.length()); }, dom);
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("from_function resolves smooth functions") {
    const SpectralFun s = sine();
    CHECK(s.degree() <= 32);
    CHECK(std::abs(s(0.5) - 1.0) <= 1e-13);
    CHECK(std::abs(s(0.0)) <= 1e-13);
    CHECK(std::abs(s(1.0 / 6.0) - 0.5) <= 1e-12);

    const SpectralFun cubic = SpectralFun::from_function([](double x) { return x * (1.0 - x * x); }, unit);
    CHECK(cubic.degree() == 3);

    const SpectralFun sq = SpectralFun::from_function([](double x) { return x * x; }, unit);
    CHECK(std::abs(sq(0.3) - 0.09) <= 1e-14);
  }

  TEST_CASE("discontinuous input is reported unresolved") {
    auto step = [](double x) { return x < 0.5 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(SpectralFun::from_function(step, unit), UnresolvedError);
    CHECK_THROWS_AS(SpectralFun::from_function([](double x) { return 1.0 / (x - 0.5); }, {0.0, 1.0}),
                    std::exception);
  }

  TEST_CASE("evaluation outside the domain is rejected") {
    const SpectralFun s = sine();
    CHECK_THROWS_AS(s(1.1), std::out_of_range);
    CHECK_THROWS_AS(s(-0.01), std::out_of_range);
    CHECK_NOTHROW(s(1.0 + 1e-16));
  }

  TEST_CASE("derivative examples") {
    const SpectralFun ds = sine().derivative();
    CHECK(std::abs(ds(0.0) - pi) <= 1e-11);
    const SpectralFun cubic = SpectralFun::from_function([](double x) { return x * (1.0 - x * x); }, unit);
    CHECK(std::abs(cubic.derivative()(1.0) + 2.0) <= 1e-12);
    CHECK(SpectralFun::constant(unit, 3.0).derivative().max_abs() == 0.0);
  }

  TEST_CASE("multiply examples") {
    const SpectralFun s = sine();
    CHECK(std::abs((s * s).definite_integral() - 0.5) <= 1e-12);

    const SpectralFun one = SpectralFun::constant(unit, 1.0);
    const SpectralFun f = SpectralFun::from_function([](double x) { return std::exp(x) * std::cos(3 * x); }, unit);
    const SpectralFun f1 = f * one;
    REQUIRE(f1.coeffs().size() == f.coeffs().size());
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) CHECK(std::abs(f1.coeffs()[k] - f.coeffs()[k]) <= 1e-14);

    const SpectralFun id = SpectralFun::identity(unit);
    const SpectralFun xx = id * id;
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) CHECK(std::abs(xx(x) - x * x) <= 1e-14);

    CHECK_THROWS_AS(s * SpectralFun::constant({0.0, 2.0}, 1.0), std::invalid_argument);
  }

  TEST_CASE("multiply is commutative") {
    const SpectralFun f = SpectralFun::from_function([](double x) { return std::exp(-x) * std::sin(5 * x); }, unit);
    const SpectralFun g = SpectralFun::from_function([](double x) { return 1.0 / (2.0 + x); }, unit);
    const SpectralFun fg = f * g;
    const SpectralFun gf = g * f;
    REQUIRE(fg.coeffs().size() == gf.coeffs().size());
    double scale = 0.0;
    for (double c : fg.coeffs()) scale = std::max(scale, std::abs(c));
    for (std::size_t k = 0; k < fg.coeffs().size(); ++k) CHECK(std::abs(fg.coeffs()[k] - gf.coeffs()[k]) <= 1e-14 * scale);
  }

  TEST_CASE("cumulative_integral examples") {
    const SpectralFun c = SpectralFun::from_function([](double x) { return std::cos(pi * x); }, unit);
    const SpectralFun F = c.cumulative_integral();
    CHECK(std::abs(F(0.5) - 1.0 / pi) <= 1e-12);
    CHECK(std::abs(F(0.0)) <= 1e-16);

    const Interval dom{-1.5, 2.0};
    const SpectralFun G = SpectralFun::constant(dom, 1.0).cumulative_integral();
    for (double x : {-1.5, -0.3, 0.0, 1.1, 2.0}) CHECK(G(x) == doctest::Approx(x + 1.5).epsilon(1e-15));

    const SpectralFun s2 = SpectralFun::from_function([](double x) { return 2.0 * std::pow(std::sin(pi * x), 2); }, unit);
    CHECK(std::abs(s2.cumulative_integral()(1.0) - 1.0) <= 1e-12);
  }

  TEST_CASE("definite_integral examples") {
    for (int n = 1; n <= 4; ++n) {
      const SpectralFun f =
          SpectralFun::from_function([=](double x) { return 2.0 * std::pow(std::sin(n * pi * x), 2); }, unit);
      CHECK(std::abs(f.definite_integral() - 1.0) <= 1e-12);
      const SpectralFun g =
          SpectralFun::from_function([=](double x) { return x * (1.0 - std::cos(2.0 * n * pi * x)); }, unit);
      CHECK(std::abs(g.definite_integral() - 0.5) <= 1e-12);
    }
    const SpectralFun p = SpectralFun::from_function(
        [](double x) { return x * x * (1.0 - x * x) * (1.0 - x * x); }, unit);
    CHECK(std::abs(p.definite_integral() - 8.0 / 105.0) <= 1e-13);
  }

  TEST_CASE("integral and derivative invert each other") {
    const Interval dom{-0.5, 1.7};
    const SpectralFun f =
        SpectralFun::from_function([](double x) { return std::exp(std::sin(3.0 * x)) - x * x; }, dom);
    const SpectralFun F = f.cumulative_integral();
    const SpectralFun dF = F.derivative();
    const double bound = 1e-10 * (1.0 + f.max_abs());
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> pick(dom.a, dom.b);
    for (int i = 0; i < 50; ++i) {
      const double x = pick(rng);
      CHECK(std::abs(dF(x) - f(x)) <= bound);
    }
    CHECK(std::abs(f.definite_integral() - F(dom.b)) <= 1e-13 * std::abs(F(dom.b)));
  }

  TEST_CASE("arithmetic and shifted domains") {
    const Interval dom{0.0, 2.0};
    const SpectralFun s = sine(1, dom);
    CHECK(std::abs(s(1.0) - 1.0) <= 1e-13);
    const SpectralFun twice = 2.0 * s;
    const SpectralFun diff = twice - s - s;
    CHECK(diff.max_abs() <= 1e-15);
    CHECK((-s)(1.0) == doctest::Approx(-1.0));
    SpectralFun scaled = s;
    scaled *= 0.5;
    CHECK(scaled(1.0) == doctest::Approx(0.5));
    CHECK(std::abs((s * s).definite_integral() - 1.0) <= 1e-12);
  }

  TEST_CASE("transforms round-trip") {
    const std::vector<double> c{1.0, -0.5, 0.25, 0.125, -2.0};
    const std::vector<double> v = coeffs_to_values(c, 8);
    const std::vector<double> back = values_to_coeffs(v);
    REQUIRE(back.size() == 9);
    for (std::size_t k = 0; k < back.size(); ++k) CHECK(std::abs(back[k] - (k < c.size() ? c[k] : 0.0)) <= 1e-15);

    const auto pts = chebyshev_points(unit, 16);
    REQUIRE(pts.size() == 17);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == 1.0);
    CHECK(pts[8] == doctest::Approx(0.5));
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] > pts[i - 1]);
  }

  TEST_CASE("chopping drops negligible tails") {
    const SpectralFun f(unit, {1.0, 0.5, 1e-20, 1e-18});
    CHECK(f.chopped(1e-13).degree() == 1);
    CHECK(f.chopped(0.0).degree() == 3);
  }
}
