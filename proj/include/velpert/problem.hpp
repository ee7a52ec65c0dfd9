#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "velpert/expr.hpp"
#include "velpert/spectral.hpp"

namespace velpert {

/// f -> p2 f'' + p1 f' + p0 f.
struct LinearOperator {
  Expr p2;
  Expr p1;
  Expr p0;

  bool is_zero() const;
  SpectralFun apply(const SpectralFun& f) const;
  /// Pointwise action given f, f', f'' at x.
  double apply_at(double x, double f, double df, double d2f) const;
};

/// Closed-form unperturbed state supplied by the problem file.
struct ClosedFormState {
  Expr y0;
  double E0 = 0.0;
};

/// y'' = v0(x) y - E y + sum_{k>=1} lambda^k P_k(y), y(a) = y(b) = 0.
struct PerturbationProblem {
  Interval domain;
  Expr v0;
  /// perturbations[k - 1] is P_k.
  std::vector<LinearOperator> perturbations;
  std::optional<ClosedFormState> unperturbed;

  /// True when v0 vanishes at 64 uniformly spaced sample points.
  bool v0_is_zero() const;
};

/// Parses the line-based `key = value` format:
///
///     # comment
///     domain = <a> <b>
///     v0 = <expr>
///     perturbation.<k>.p2 = <expr>      (k contiguous from 1; p2, p1, p0 all required)
///     perturbation.<k>.p1 = <expr>
///     perturbation.<k>.p0 = <expr>
///     y0 = <expr>                       (optional, together with E0)
///     E0 = <constant expression>
///
/// Throws ConfigError naming the offending key or line.
PerturbationProblem load_problem(std::string_view config_text);
PerturbationProblem load_problem_file(const std::string& path);

/// Inverse of load_problem.
std::string to_config(const PerturbationProblem& problem);

/// Unperturbed eigenpair. `y0` is stored normalized to unit L2 norm;
/// `user_scale` is the amplitude the caller asked for and `user_norm` the L2
/// norm of the caller's y0, so caller-scale y0 = user_norm * y0.
struct UnperturbedState {
  int n = 1;
  double E0 = 0.0;
  SpectralFun y0;
  SpectralFun dy0;
  double user_scale = 1.0;
  double user_norm = 1.0;
};

struct ResidualReport {
  /// sup |y0'' - v0 y0 + E0 y0|
  double ode = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// y0 = amplitude * sin(n pi (x - a) / (b - a)), E0 = (n pi / (b - a))^2.
/// Requires v0 == 0 (ConfigError otherwise) and n >= 1, amplitude > 0.
UnperturbedState analytic_sine_state(const PerturbationProblem& problem, int n, double amplitude,
                                     const SpectralOptions& opts = {});

/// State from the problem's closed-form y0/E0 keys. The quantum number is the
/// number of interior sign changes plus one. Throws InvalidStateError when the
/// state fails validation.
UnperturbedState closed_form_state(const PerturbationProblem& problem, const SpectralOptions& opts = {});

/// Picks closed_form_state when the problem carries y0/E0, the sine state
/// otherwise (amplitude defaults to the unit-norm one).
UnperturbedState default_state(const PerturbationProblem& problem, int n,
                               std::optional<double> amplitude = std::nullopt,
                               const SpectralOptions& opts = {});

ResidualReport validate_state(const PerturbationProblem& problem, const UnperturbedState& state);

/// Whether a report meets the state invariants: ODE residual
/// <= 1e-9 max|y0''| and endpoint values <= 1e-11 max|y0|.
bool state_is_valid(const UnperturbedState& state, const ResidualReport& report);

/// Expr -> SpectralFun on the given domain.
SpectralFun to_spectral(const Expr& e, Interval domain, const SpectralOptions& opts = {});

}  // namespace velpert
