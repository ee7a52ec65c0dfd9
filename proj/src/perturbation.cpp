#include "velpert/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "velpert/errors.hpp"
#include "velpert/power_series.hpp"

namespace velpert {

namespace {

constexpr int kResidualSamples = 256;

double sample_point(const Interval& dom, int i, int count) {
  return std::min(dom.a + dom.length() * i / (count - 1), dom.b);
}

double left_slope(const UnperturbedState& state) {
  const double slope = state.dy0(state.y0.domain().a);
  if (std::abs(slope) < 1e-12) {
    throw InvalidStateError("degenerate left endpoint: |y0'(a)| < 1e-12");
  }
  return slope;
}

// (u, u') for u'' = q(x) u.
using Pair = std::array<double, 2>;

// Modified midpoint over [x0, x0 + H] with n substeps.
template <class Q>
Pair modified_midpoint(const Q& q, double x0, const Pair& z0, double H, int n) {
  const double h = H / n;
  auto f = [&](double x, const Pair& z) { return Pair{z[1], q(x) * z[0]}; };
  Pair prev = z0;
  Pair f0 = f(x0, z0);
  Pair cur{z0[0] + h * f0[0], z0[1] + h * f0[1]};
  for (int m = 1; m < n; ++m) {
    const Pair fm = f(x0 + m * h, cur);
    const Pair next{prev[0] + 2.0 * h * fm[0], prev[1] + 2.0 * h * fm[1]};
    prev = cur;
    cur = next;
  }
  const Pair fn = f(x0 + H, cur);
  return {0.5 * (cur[0] + prev[0] + h * fn[0]), 0.5 * (cur[1] + prev[1] + h * fn[1])};
}

// Gragg-Bulirsch-Stoer step with substep sequence 2, 4, ..., 16 (order 16).
// Returns the extrapolated state and an error estimate.
template <class Q>
std::pair<Pair, double> gbs_step(const Q& q, double x0, const Pair& z0, double H) {
  constexpr int kLevels = 8;
  std::array<std::array<Pair, kLevels>, kLevels> table{};
  std::array<int, kLevels> steps{};
  double err = 0.0;
  for (int i = 0; i < kLevels; ++i) {
    steps[i] = 2 * (i + 1);
    table[i][0] = modified_midpoint(q, x0, z0, H, steps[i]);
    for (int k = 1; k <= i; ++k) {
      const double ratio = static_cast<double>(steps[i]) / steps[i - k];
      const double denom = ratio * ratio - 1.0;
      for (int c = 0; c < 2; ++c) {
        table[i][k][c] = table[i][k - 1][c] + (table[i][k - 1][c] - table[i - 1][k - 1][c]) / denom;
      }
    }
    if (i >= 1) {
      err = std::max(std::abs(table[i][i][0] - table[i][i - 1][0]), std::abs(table[i][i][1] - table[i][i - 1][1]));
    }
  }
  return {table[kLevels - 1][kLevels - 1], err};
}

}  // namespace

GhostFunction ghost_closed_form(const UnperturbedState& state, const SpectralOptions& opts) {
  const double slope = left_slope(state);
  if (!(state.E0 > 0.0)) throw InvalidStateError("closed-form ghost needs E0 > 0");
  const double w = std::sqrt(state.E0);
  const double c = slope / w;
  const Interval dom = state.y0.domain();
  GhostFunction g;
  g.u = SpectralFun::from_function([=](double x) { return -std::cos(w * (x - dom.a)) / (c * w); }, dom, opts);
  g.du = SpectralFun::from_function([=](double x) { return std::sin(w * (x - dom.a)) / c; }, dom, opts);
  return g;
}

GhostFunction ghost_numeric(const UnperturbedState& state, const Expr& v0, const SpectralOptions& opts,
                            double step_tol) {
  const double slope = left_slope(state);
  const Interval dom = state.y0.domain();
  const double E0 = state.E0;
  auto q = [&](double x) { return v0.eval(x) - E0; };
  const Pair start{-1.0 / slope, 0.0};
  const double h_max = dom.length() / 8.0;

  auto sampler = [&](std::span<const double> nodes) {
    std::vector<double> values(nodes.size());
    Pair z = start;
    double x = dom.a;
    double H = h_max / 4.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double target = nodes[i];
      while (x < target) {
        const double step = std::min(H, target - x);
        auto [next, err] = gbs_step(q, x, z, step);
        const double scale = std::max({1.0, std::abs(z[0]), std::abs(z[1])});
        if (err > step_tol * scale && step > 1e-10 * dom.length()) {
          H = 0.5 * step;
          continue;
        }
        x = (step == target - x) ? target : x + step;
        z = next;
        if (err < 1e-4 * step_tol * scale) H = std::min(2.0 * H, h_max);
      }
      values[i] = z[0];
    }
    return values;
  };
  GhostFunction g;
  g.u = SpectralFun::from_samples(sampler, dom, opts);
  g.du = g.u.derivative();
  const double defect = wronskian_defect(g, state);
  if (defect > 1e-10) {
    std::ostringstream msg;
    msg << "numerical ghost state fails W(u, y0) = 1: defect " << defect;
    throw InvalidStateError(msg.str());
  }
  return g;
}

GhostFunction ghost(const UnperturbedState& state, const Expr& v0, const SpectralOptions& opts) {
  const Interval dom = state.y0.domain();
  bool zero = !v0.depends_on_x() && v0.eval(dom.a) == 0.0;
  if (!zero && v0.depends_on_x()) {
    zero = true;
    for (int i = 0; i < 64 && zero; ++i) zero = v0.eval(sample_point(dom, i, 64)) == 0.0;
  }
  return zero ? ghost_closed_form(state, opts) : ghost_numeric(state, v0, opts);
}

double wronskian_defect(const GhostFunction& ghost, const UnperturbedState& state, int samples) {
  const Interval dom = state.y0.domain();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = sample_point(dom, i, samples);
    const double w = ghost.du(x) * state.y0(x) - state.dy0(x) * ghost.u(x);
    worst = std::max(worst, std::abs(w - 1.0));
  }
  return worst;
}

SpectralFun order_rhs(const PerturbationProblem& problem, std::span<const Order> lower, int j) {
  if (j < 1 || lower.size() < static_cast<std::size_t>(j)) {
    throw std::invalid_argument("order_rhs needs orders 0..j-1");
  }
  const SpectralFun& y0 = lower[0].y;
  SpectralFun g = SpectralFun::constant(y0.domain(), 0.0, y0.tol_rel());
  const int m = static_cast<int>(problem.perturbations.size());
  for (int k = 1; k <= std::min(m, j); ++k) {
    const LinearOperator& op = problem.perturbations[k - 1];
    if (!op.is_zero()) g = g + op.apply(lower[j - k].y);
  }
  for (int k = 1; k <= j - 1; ++k) g = g - lower[k].E * lower[j - k].y;
  return g;
}

SpectralFun variation_of_parameters(const UnperturbedState& state, const GhostFunction& ghost,
                                    const SpectralFun& r) {
  return ghost.u * (state.y0 * r).cumulative_integral() - state.y0 * (ghost.u * r).cumulative_integral();
}

double solvability_energy(const UnperturbedState& state, const SpectralFun& g) {
  return (state.y0 * g).definite_integral() / (state.y0 * state.y0).definite_integral();
}

Order solve_order(const PerturbationProblem& problem, const UnperturbedState& state, const GhostFunction& ghost,
                  std::span<const Order> lower, int j) {
  const SpectralFun g = order_rhs(problem, lower, j);
  const SpectralFun phi_a = variation_of_parameters(state, ghost, g);
  const SpectralFun phi_b = variation_of_parameters(state, ghost, -state.y0);
  const double b = state.y0.domain().b;
  const double denom = phi_b(b);
  if (std::abs(denom) < 1e-12) {
    throw InvalidStateError("boundary equation is degenerate (u(b) ~ 0): invalid unperturbed state");
  }
  Order out;
  out.E = -phi_a(b) / denom;
  out.y = phi_a + out.E * phi_b;
  return out;
}

PerturbationSeries compute_series(const PerturbationProblem& problem, const UnperturbedState& state, int J,
                                  const SpectralOptions& opts) {
  if (J < 0) throw std::invalid_argument("perturbation order J must be >= 0");
  PerturbationSeries series;
  series.state = state;
  series.orders.push_back({state.E0, state.y0});
  if (J > 0) {
    const GhostFunction g = ghost(state, problem.v0, opts);
    for (int j = 1; j <= J; ++j) {
      Order next = solve_order(problem, state, g, series.orders, j);
      if (next.y.degree() + 1 > opts.max_points) {
        throw UnresolvedError("correction y_" + std::to_string(j) + " exceeds the degree cap");
      }
      series.orders.push_back(std::move(next));
    }
  }
  series.norm = normalization_coeffs(series, J);
  return series;
}

std::vector<double> overlap_series(const PerturbationSeries& series, int J) {
  if (J > series.max_order()) throw std::invalid_argument("overlap_series: order beyond the series");
  std::vector<double> s(J + 1, 0.0);
  for (int m = 0; m <= J; ++m) {
    for (int i = 0; i <= m; ++i) {
      s[m] += (series.orders[i].y * series.orders[m - i].y).definite_integral();
    }
  }
  return s;
}

std::vector<double> normalization_coeffs_internal(const PerturbationSeries& series, int J) {
  const auto s = overlap_series(series, J);
  return fps::inverse_sqrt(s, static_cast<std::size_t>(J) + 1);
}

std::vector<double> normalization_coeffs(const PerturbationSeries& series, int J) {
  auto n = normalization_coeffs_internal(series, J);
  for (double& v : n) v /= series.state.user_norm;
  return n;
}

SummedSeries sum_series(const PerturbationSeries& series, double lambda, int upto, bool normalize) {
  if (upto < 0 || upto > series.max_order()) throw std::invalid_argument("sum_series: upto out of range");
  SummedSeries out;
  out.y = SpectralFun::constant(series.orders[0].y.domain(), 0.0, series.orders[0].y.tol_rel());
  double power = 1.0;
  for (int j = 0; j <= upto; ++j) {
    out.E += series.orders[j].E * power;
    out.y = out.y + power * series.orders[j].y;
    power *= lambda;
  }
  if (normalize) {
    const auto n = normalization_coeffs_internal(series, upto);
    double factor = 0.0;
    power = 1.0;
    for (int j = 0; j <= upto; ++j) {
      factor += n[j] * power;
      power *= lambda;
    }
    out.y *= factor;
  }
  return out;
}

double residual(const PerturbationProblem& problem, double lambda, double E, const SpectralFun& y) {
  const Interval dom = y.domain();
  const SpectralFun dy = y.derivative();
  const SpectralFun d2y = dy.derivative();
  double worst = 0.0;
  for (int i = 0; i < kResidualSamples; ++i) {
    const double x = sample_point(dom, i, kResidualSamples);
    const double f = y(x);
    const double df = dy(x);
    const double d2f = d2y(x);
    double r = d2f - problem.v0.eval(x) * f + E * f;
    double power = 1.0;
    for (const LinearOperator& op : problem.perturbations) {
      power *= lambda;
      r -= power * op.apply_at(x, f, df, d2f);
    }
    worst = std::max(worst, std::abs(r));
  }
  const double scale = y.max_abs();
  return scale > 0.0 ? worst / scale : worst;
}

double order_residual(const PerturbationProblem& problem, const PerturbationSeries& series, int j) {
  if (j < 1 || j > series.max_order()) throw std::invalid_argument("order_residual: j out of range");
  const SpectralFun g = order_rhs(problem, series.orders, j);
  const SpectralFun& yj = series.orders[j].y;
  const SpectralFun d2y = yj.derivative().derivative();
  const Interval dom = yj.domain();
  const double E0 = series.state.E0;
  const double Ej = series.orders[j].E;
  double worst = 0.0;
  for (int i = 0; i < kResidualSamples; ++i) {
    const double x = sample_point(dom, i, kResidualSamples);
    const double r = d2y(x) - (problem.v0.eval(x) - E0) * yj(x) - g(x) + Ej * series.state.y0(x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace velpert
