#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "velpert/errors.hpp"
#include "velpert/oracles.hpp"

using namespace velpert;
using namespace velpert::oracles;
using std::numbers::pi;

namespace {

PerturbationProblem model(const std::string& name) {
  return load_problem_file(std::string(VELPERT_PROBLEMS_DIR) + "/" + name + ".prob");
}

}  // namespace

TEST_SUITE("oracles") {
  TEST_CASE("model 1 closed forms") {
    CHECK(model1_exact(1, 0.0).E == doctest::Approx(pi * pi).epsilon(1e-15));
    CHECK(model1_exact(2, 1.0).E == doctest::Approx(4.0 * pi * pi + 0.25).epsilon(1e-15));
    CHECK(model1_series_exact(1, 2).E == 0.25);
    CHECK(std::abs(model1_series_exact(2, 3).y(1.0)) <= 1e-15);
    const auto y0 = model1_series_exact(3, 0);
    const auto y1 = model1_series_exact(3, 1);
    for (double x : {0.1, 0.4, 0.8}) CHECK(y1.y(x) == doctest::Approx(0.5 * x * y0.y(x)).epsilon(1e-15));
    CHECK_THROWS_AS(model1_exact(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(model1_series_exact(1, -1), std::invalid_argument);
  }

  TEST_CASE("lambda expansion of the exact model 1 energy") {
    constexpr double h = 1e-3;
    for (int n = 1; n <= 3; ++n) {
      const double e0 = model1_exact(n, 0.0).E;
      const double ep = model1_exact(n, h).E;
      const double em = model1_exact(n, -h).E;
      CHECK(std::abs(e0 - model1_series_exact(n, 0).E) <= 1e-6);
      CHECK(std::abs((ep - em) / (2.0 * h) - model1_series_exact(n, 1).E) <= 1e-6);
      CHECK(std::abs((ep - 2.0 * e0 + em) / (2.0 * h * h) - model1_series_exact(n, 2).E) <= 1e-6);
    }
  }

  TEST_CASE("model 3 closed forms") {
    const auto E = model3_E_coeffs(1);
    CHECK(E[0] == doctest::Approx(9.8696044010893586).epsilon(1e-15));
    CHECK(E[1] == doctest::Approx(-3.4739208802178717).epsilon(1e-15));
    CHECK(E[2] == doctest::Approx(-0.26231105236223941).epsilon(1e-14));
    CHECK(E[3] == doctest::Approx(-0.07912810667699521).epsilon(1e-14));
    CHECK(E[0] + E[1] + E[2] + E[3] == doctest::Approx(6.0542443618322523).epsilon(1e-14));
    CHECK(model3_E_coeffs(2)[1] == doctest::Approx(-(8.0 * pi * pi + 15.0) / 10.0).epsilon(1e-15));

    const auto ground = model3_ground_exact();
    CHECK(ground.E == 6.0);
    CHECK(ground.y(0.0) == 0.0);
    CHECK(ground.y(1.0) == 0.0);

    for (int n = 1; n <= 4; ++n) {
      const auto y1 = model3_y1_exact(n);
      CHECK(std::abs(y1(0.0)) <= 1e-15);
      CHECK(std::abs(y1(1.0)) <= 1e-13);
      constexpr double h = 1e-6;
      CHECK(std::abs((y1(h) - y1(0.0)) / h) <= 1e-4);
    }
    // 0.1375 in the unit-amplitude convention.
    CHECK(model3_y1_exact(1)(0.5) == doctest::Approx(0.19445436482630057).epsilon(1e-14));
    CHECK(model3_y1_exact(1)(0.5) / std::sqrt(2.0) == doctest::Approx(0.1375).epsilon(1e-14));
  }

  TEST_CASE("fd_eigenvalue examples") {
    const PerturbationProblem m1 = model("model1");
    CHECK(std::abs(fd_eigenvalue(m1, 0.5, pi * pi, 512) - 9.9321044010893586) <= 1e-6);
    for (int n = 1; n <= 3; ++n) {
      CHECK(std::abs(fd_eigenvalue(m1, 0.0, n * n * pi * pi + 1.0, 512) - n * n * pi * pi) <= 1e-6);
    }
    const PerturbationProblem m3 = model("model3");
    CHECK(std::abs(fd_eigenvalue(m3, 1.0, 9.0, 512) - 6.0) <= 1e-4);
  }

  TEST_CASE("finite-difference error is second order") {
    const PerturbationProblem m1 = model("model1");
    const double exact = model1_exact(1, 0.5).E;
    double previous = 0.0;
    for (int M : {64, 128, 256, 512}) {
      const double err = std::abs(fd_solve(m1, 0.5, pi * pi, M).eigenvalue - exact);
      if (previous > 0.0) {
        const double ratio = previous / err;
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
      }
      previous = err;
    }
  }

  TEST_CASE("fd_solve returns an eigenvector on the interior grid") {
    const PerturbationProblem m1 = model("model1");
    const FDSolution sol = fd_solve(m1, 0.0, 4.0 * pi * pi, 127);
    CHECK(sol.grid.M == 127);
    CHECK(sol.grid.h == doctest::Approx(1.0 / 128.0));
    REQUIRE(sol.grid.values.size() == 127);
    // n = 2 changes sign once, at the midpoint.
    CHECK(std::abs(sol.grid.values[63]) <= 1e-8);
    CHECK(sol.grid.values[31] * sol.grid.values[95] < 0.0);
    CHECK(sol.iterations >= 1);
  }

  TEST_CASE("fd failures") {
    const PerturbationProblem m1 = model("model1");
    CHECK_THROWS_AS(fd_solve(m1, 0.0, pi * pi, 8), std::invalid_argument);
    CHECK_THROWS_AS(fd_eigenvalue(m1, 0.5, -1e6, 256), ConvergenceError);
  }
}
