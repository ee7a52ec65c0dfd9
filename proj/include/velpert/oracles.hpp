#pragma once

#include <array>
#include <functional>
#include <vector>

#include "velpert/problem.hpp"

namespace velpert::oracles {

using RealFunction = std::function<double(double)>;

struct ExactPair {
  double E = 0.0;
  RealFunction y;
};

// Reference model 1: y'' = lambda y' - E y on [0, 1], Dirichlet.

/// E = n^2 pi^2 + lambda^2 / 4, y = sqrt(2) e^{lambda x / 2} sin(n pi x).
ExactPair model1_exact(int n, double lambda);

/// Taylor coefficients in lambda of model1_exact:
/// E_j = n^2 pi^2 [j = 0] + [j = 2] / 4, y_j = x^j / (j! 2^j) sqrt(2) sin(n pi x).
ExactPair model1_series_exact(int n, int j);

// Reference model 3: (1 - 3x^2/5) y'' - 6/5 (x y' - y) + E y = 0 on [0, 1].

/// E_0..E_3 for the unperturbed state sin(n pi x).
std::array<double, 4> model3_E_coeffs(int n);

/// Ground state E = 6, y = x (1 - x^2).
ExactPair model3_ground_exact();

/// First-order correction for y0 = sqrt(2) sin(n pi x) (the engine's
/// internal normalization on [0, 1]):
/// sqrt(2) [n pi x (x^2 - 1) cos(n pi x) / 10 + (3x^2/20 + 1/10) sin(n pi x)].
RealFunction model3_y1_exact(int n);

/// Finite-difference discretization of one eigenfunction.
struct FDGrid {
  int M = 0;
  double h = 0.0;
  double a = 0.0;
  /// Eigenvector on the interior points a + (i + 1) h, i = 0..M-1.
  std::vector<double> values;
};

struct FDSolution {
  double eigenvalue = 0.0;
  int iterations = 0;
  FDGrid grid;
};

/// Single-grid eigenvalue nearest `E_guess` of the second-order central
/// difference discretization (M interior points), by shifted inverse
/// iteration with a banded LU. Throws ConvergenceError after 200 iterations
/// or when the shifted matrix is singular twice.
FDSolution fd_solve(const PerturbationProblem& problem, double lambda, double E_guess, int M);

/// Richardson extrapolation (order 2) of fd_solve on grids M and 2M.
double fd_eigenvalue(const PerturbationProblem& problem, double lambda, double E_guess, int M);

}  // namespace velpert::oracles
