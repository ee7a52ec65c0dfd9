#include "velpert/oracles.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "velpert/errors.hpp"

namespace velpert::oracles {

namespace {

using std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("quantum number n must be >= 1");
}

double factorial(int j) {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}

// Tridiagonal discretization of  A y = -y'' + v0 y + sum lambda^k P_k(y).
struct Tridiagonal {
  std::vector<double> sub, diag, super;

  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t m = diag.size();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += sub[i] * x[i - 1];
      if (i + 1 < m) v += super[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }

  double norm_inf() const {
    double n = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) n = std::max(n, std::abs(sub[i]) + std::abs(diag[i]) + std::abs(super[i]));
    return n;
  }
};

Tridiagonal assemble(const PerturbationProblem& problem, double lambda, int M, double h) {
  Tridiagonal t;
  t.sub.assign(M, 0.0);
  t.diag.assign(M, 0.0);
  t.super.assign(M, 0.0);
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  for (int i = 0; i < M; ++i) {
    const double x = problem.domain.a + (i + 1) * h;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double power = 1.0;
    for (const LinearOperator& op : problem.perturbations) {
      power *= lambda;
      c2 += power * op.p2.eval(x);
      c1 += power * op.p1.eval(x);
      c0 += power * op.p0.eval(x);
    }
    // -(1 - c2) D2 + c1 D1 + (v0 + c0)
    const double second = -(1.0 - c2) * inv_h2;
    t.sub[i] = second - c1 * inv_2h;
    t.super[i] = second + c1 * inv_2h;
    t.diag[i] = -2.0 * second + problem.v0.eval(x) + c0;
  }
  return t;
}

// LU of (A - shift I) in LAPACK general band storage, kl = ku = 1.
class BandedLU {
 public:
  BandedLU(const Tridiagonal& t, double shift) : m_(static_cast<int>(t.diag.size())), ab_(kLdab * m_, 0.0), ipiv_(m_) {
    for (int j = 0; j < m_; ++j) {
      // AB(kl + ku + i - j, j) = A(i, j)
      if (j > 0) ab_[(2 + (j - 1) - j) + j * kLdab] = t.super[j - 1];
      ab_[2 + j * kLdab] = t.diag[j] - shift;
      if (j + 1 < m_) ab_[(2 + (j + 1) - j) + j * kLdab] = t.sub[j + 1];
    }
    info_ = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, m_, m_, 1, 1, ab_.data(), kLdab, ipiv_.data());
  }

  bool singular() const { return info_ != 0; }

  std::vector<double> solve(std::vector<double> rhs) const {
    const int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', m_, 1, 1, 1, ab_.data(), kLdab, ipiv_.data(),
                                    rhs.data(), m_);
    if (info != 0) throw ConvergenceError("banded solve failed");
    return rhs;
  }

 private:
  static constexpr int kLdab = 4;  // 2 kl + ku + 1
  int m_;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
  lapack_int info_ = 0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ExactPair model1_exact(int n, double lambda) {
  check_n(n);
  const double k = n * pi;
  return {k * k + 0.25 * lambda * lambda,
          [=](double x) { return kSqrt2 * std::exp(0.5 * lambda * x) * std::sin(k * x); }};
}

ExactPair model1_series_exact(int n, int j) {
  check_n(n);
  if (j < 0) throw std::invalid_argument("order j must be >= 0");
  const double k = n * pi;
  const double E = (j == 0 ? k * k : 0.0) + (j == 2 ? 0.25 : 0.0);
  const double c = 1.0 / (factorial(j) * std::pow(2.0, j));
  return {E, [=](double x) { return c * std::pow(x, j) * kSqrt2 * std::sin(k * x); }};
}

std::array<double, 4> model3_E_coeffs(int n) {
  check_n(n);
  const double p2 = n * n * pi * pi;
  const double p4 = p2 * p2;
  const double p6 = p4 * p2;
  return {p2, -(2.0 * p2 + 15.0) / 10.0, -3.0 * (8.0 * p4 + 10.0 * p2 - 15.0) / (1000.0 * p2),
          -(248.0 * p6 + 462.0 * p4 - 1575.0 * p2 + 1890.0) / (35000.0 * p4)};
}

ExactPair model3_ground_exact() {
  return {6.0, [](double x) { return x * (1.0 - x * x); }};
}

RealFunction model3_y1_exact(int n) {
  check_n(n);
  const double k = n * pi;
  return [=](double x) {
    return kSqrt2 * (k * x * (x * x - 1.0) * std::cos(k * x) / 10.0 + (3.0 * x * x / 20.0 + 0.1) * std::sin(k * x));
  };
}

FDSolution fd_solve(const PerturbationProblem& problem, double lambda, double E_guess, int M) {
  if (M < 16) throw std::invalid_argument("fd_solve needs M >= 16 interior points");
  constexpr int kMaxIterations = 200;
  constexpr double kTol = 1e-12;

  const double h = problem.domain.length() / (M + 1);
  const Tridiagonal A = assemble(problem, lambda, M, h);
  const double a_norm = A.norm_inf();

  double shift = E_guess;
  BandedLU lu(A, shift);
  if (lu.singular()) {
    shift += 1e-8 * std::max(1.0, std::abs(shift));
    lu = BandedLU(A, shift);
    if (lu.singular()) throw ConvergenceError("shifted FD matrix is singular at the guess");
  }

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(M);
  for (double& v : x) v = dist(rng);
  double xn = max_abs(x);
  for (double& v : x) v /= xn;

  double eigenvalue = shift;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kMaxIterations; ++it) {
    std::vector<double> w = lu.solve(x);
    const double theta = dot(x, w) / dot(x, x);
    if (theta == 0.0 || !std::isfinite(theta)) throw ConvergenceError("inverse iteration broke down");
    eigenvalue = shift + 1.0 / theta;
    const double wn = max_abs(w);
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] / wn;

    const std::vector<double> ax = A.apply(x);
    double res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) res = std::max(res, std::abs(ax[i] - eigenvalue * x[i]));
    const bool settled = std::abs(eigenvalue - previous) <= kTol * std::max(1.0, std::abs(eigenvalue));
    if (settled && res <= 1e-9 * a_norm) {
      return {eigenvalue, it, {M, h, problem.domain.a, x}};
    }
    previous = eigenvalue;
  }
  std::ostringstream msg;
  msg << "inverse iteration did not converge in " << kMaxIterations << " iterations (guess " << E_guess
      << ", last estimate " << eigenvalue << ")";
  throw ConvergenceError(msg.str());
}

double fd_eigenvalue(const PerturbationProblem& problem, double lambda, double E_guess, int M) {
  const FDSolution coarse = fd_solve(problem, lambda, E_guess, M);
  const FDSolution fine = fd_solve(problem, lambda, E_guess, 2 * M);
  const double h1 = coarse.grid.h * coarse.grid.h;
  const double h2 = fine.grid.h * fine.grid.h;
  return (h1 * fine.eigenvalue - h2 * coarse.eigenvalue) / (h1 - h2);
}

}  // namespace velpert::oracles
