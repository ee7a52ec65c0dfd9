#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace velpert {

/// Closed interval [a, b] with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const noexcept { return b - a; }
  bool operator==(const Interval&) const = default;
};

struct SpectralOptions {
  /// Relative tail tolerance for adaptive construction and for truncation
  /// after arithmetic.
  double tol_rel = 1e-13;
  /// Largest number of Chebyshev points tried (2^14 + 1).
  std::size_t max_points = 16385;
};

/// Chebyshev series f(x) = sum_k c_k T_k(t), t = (2x - a - b) / (b - a).
///
/// Values are immutable; every operation returns a new series truncated to
/// the relative tolerance it carries.
class SpectralFun {
 public:
  using Sampler = std::function<std::vector<double>(std::span<const double>)>;

  /// Zero function on [0, 1].
  SpectralFun();
  SpectralFun(Interval domain, std::vector<double> coeffs, double tol_rel = SpectralOptions{}.tol_rel);

  /// Adaptive construction on 17, 33, 65, ... Chebyshev-Lobatto points until
  /// max(|c_{N-1}|, |c_N|) <= tol_rel * max|c_k|. Throws UnresolvedError at
  /// the cap, DomainError if f is not finite at a node.
  static SpectralFun from_function(const std::function<double(double)>& f, Interval domain,
                                   const SpectralOptions& opts = {});
  /// Same as from_function, but the sampler receives every node of a level at
  /// once (in increasing order), which suits marching integrators.
  static SpectralFun from_samples(const Sampler& sampler, Interval domain,
                                  const SpectralOptions& opts = {});
  static SpectralFun constant(Interval domain, double value, double tol_rel = SpectralOptions{}.tol_rel);
  /// The identity map x -> x on the domain.
  static SpectralFun identity(Interval domain, double tol_rel = SpectralOptions{}.tol_rel);

  const Interval& domain() const noexcept { return domain_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  double tol_rel() const noexcept { return tol_rel_; }

  /// Clenshaw evaluation. Throws std::out_of_range outside [a, b] (a slack of
  /// a few ulps of the interval length is tolerated).
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
  std::vector<double> eval(std::span<const double> xs) const;

  SpectralFun derivative() const;
  /// F(x) = integral of f from a to x.
  SpectralFun cumulative_integral() const;
  double definite_integral() const;

  /// Sup-norm estimate on a uniform grid of max(257, 4 deg + 1) points.
  double max_abs() const;

  /// Drops trailing coefficients with |c_k| <= tol * max|c|.
  SpectralFun chopped(double tol) const;

  SpectralFun operator-() const;
  SpectralFun& operator*=(double s);

  friend SpectralFun operator+(const SpectralFun& f, const SpectralFun& g);
  friend SpectralFun operator-(const SpectralFun& f, const SpectralFun& g);
  friend SpectralFun operator*(double s, const SpectralFun& f);
  friend SpectralFun operator*(const SpectralFun& f, double s) { return s * f; }

 private:
  Interval domain_;
  std::vector<double> coeffs_;
  double tol_rel_;
};

/// Pointwise product, resolved on deg f + deg g + 1 Chebyshev points and then
/// truncated. Throws std::invalid_argument when the domains differ.
SpectralFun multiply(const SpectralFun& f, const SpectralFun& g);
inline SpectralFun operator*(const SpectralFun& f, const SpectralFun& g) { return multiply(f, g); }

/// Chebyshev-Lobatto points of [a, b] in increasing order, n + 1 of them.
std::vector<double> chebyshev_points(Interval domain, std::size_t n);

/// Coefficients of the degree-n interpolant through values at the increasing
/// Chebyshev-Lobatto points.
std::vector<double> values_to_coeffs(std::span<const double> values);

/// Values at the n + 1 increasing Chebyshev-Lobatto points of sum c_k T_k.
std::vector<double> coeffs_to_values(std::span<const double> coeffs, std::size_t n);

}  // namespace velpert
