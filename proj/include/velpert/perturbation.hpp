#pragma once

#include <span>
#include <vector>

#include "velpert/expr.hpp"
#include "velpert/problem.hpp"
#include "velpert/spectral.hpp"

namespace velpert {

/// Second solution u of the unperturbed equation with W(u, y0) = u' y0 - y0' u = 1,
/// fixed by u(a) = -1 / y0'(a), u'(a) = 0.
struct GhostFunction {
  SpectralFun u;
  SpectralFun du;
};

/// Closed form when v0 == 0, numerical integration otherwise. Throws
/// InvalidStateError when y0'(a) is degenerate or the Wronskian check fails.
GhostFunction ghost(const UnperturbedState& state, const Expr& v0, const SpectralOptions& opts = {});

/// -cos(w (x - a)) / (c w) for y0 = c sin(w (x - a)), w = sqrt(E0).
GhostFunction ghost_closed_form(const UnperturbedState& state, const SpectralOptions& opts = {});

/// Integrates u'' = (v0 - E0) u from a with extrapolated modified-midpoint
/// steps (local error <= `step_tol` relative) and refits the samples.
GhostFunction ghost_numeric(const UnperturbedState& state, const Expr& v0, const SpectralOptions& opts = {},
                            double step_tol = 1e-14);

/// max |W(u, y0)(x) - 1| over `samples` uniform points.
double wronskian_defect(const GhostFunction& ghost, const UnperturbedState& state, int samples = 64);

/// One term of the expansion: energy coefficient E_j and correction y_j.
struct Order {
  double E = 0.0;
  SpectralFun y;
};

/// Orders 0..J of E = sum E_j lambda^j and y = sum y_j lambda^j.
///
/// orders[0] is the internally normalized unperturbed state. Every y_j with
/// j >= 1 satisfies y_j(a) = y_j(b) = y_j'(a) = 0. `norm` holds the
/// normalization series in the caller's amplitude convention, i.e. it
/// multiplies user_norm * sum y_j lambda^j.
struct PerturbationSeries {
  UnperturbedState state;
  std::vector<Order> orders;
  std::vector<double> norm;

  int max_order() const noexcept { return static_cast<int>(orders.size()) - 1; }
};

/// g_j = sum_{k=1}^{min(m,j)} P_k(y_{j-k}) - sum_{k=1}^{j-1} E_k y_{j-k}.
/// `lower` must hold at least orders 0..j-1.
SpectralFun order_rhs(const PerturbationProblem& problem, std::span<const Order> lower, int j);

/// V(r)(x) = u(x) int_a^x y0 r - y0(x) int_a^x u r, the solution of
/// z'' - (v0 - E0) z = r with z(a) = z'(a) = 0.
SpectralFun variation_of_parameters(const UnperturbedState& state, const GhostFunction& ghost,
                                    const SpectralFun& r);

/// int y0 g / int y0^2.
double solvability_energy(const UnperturbedState& state, const SpectralFun& g);

/// Solves order j: y_j = V(g_j) + E_j V(-y0) with E_j chosen so y_j(b) = 0.
Order solve_order(const PerturbationProblem& problem, const UnperturbedState& state, const GhostFunction& ghost,
                  std::span<const Order> lower, int j);

PerturbationSeries compute_series(const PerturbationProblem& problem, const UnperturbedState& state, int J,
                                  const SpectralOptions& opts = {});

/// S_m = sum_{i+j=m} int y_i y_j, m = 0..J.
std::vector<double> overlap_series(const PerturbationSeries& series, int J);

/// N_0..N_J of (sum S_m lambda^m)^(-1/2) for the internally normalized y_j.
std::vector<double> normalization_coeffs_internal(const PerturbationSeries& series, int J);

/// Same series in the caller's amplitude convention (divided by user_norm).
std::vector<double> normalization_coeffs(const PerturbationSeries& series, int J);

struct SummedSeries {
  double E = 0.0;
  /// Internal scale; normalized to unit norm through order `upto` when requested.
  SpectralFun y;
};

SummedSeries sum_series(const PerturbationSeries& series, double lambda, int upto, bool normalize);

/// sup |y'' - v0 y + E y - sum lambda^k P_k(y)| / max|y| over 256 points.
double residual(const PerturbationProblem& problem, double lambda, double E, const SpectralFun& y);

/// sup |y_j'' - (v0 - E0) y_j - g_j + E_j y0| over 256 points.
double order_residual(const PerturbationProblem& problem, const PerturbationSeries& series, int j);

}  // namespace velpert
