#include "velpert/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "velpert/errors.hpp"

namespace velpert {

namespace {

// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DCT-I (FFTW REDFT00): y_j = x_0 + (-1)^j x_n + 2 sum_{k=1}^{n-1} x_k cos(pi j k / n).
void dct1(std::vector<double>& data) {
  const int size = static_cast<int>(data.size());
  if (size < 2) return;
  double* buf = fftw_alloc_real(data.size());
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_r2r_1d(size, buf, buf, FFTW_REDFT00, FFTW_ESTIMATE);
  }
  std::copy(data.begin(), data.end(), buf);
  fftw_execute(plan);
  std::copy(buf, buf + size, data.begin());
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

double max_abs_coeff(std::span<const double> c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> chop_coeffs(std::vector<double> c, double tol) {
  const double cutoff = tol * max_abs_coeff(c);
  std::size_t n = c.size();
  while (n > 1 && std::abs(c[n - 1]) <= cutoff) --n;
  c.resize(n);
  return c;
}

void check_same_domain(const SpectralFun& f, const SpectralFun& g) {
  if (!(f.domain() == g.domain())) {
    throw std::invalid_argument("spectral functions live on different domains");
  }
}

}  // namespace

std::vector<double> chebyshev_points(Interval domain, std::size_t n) {
  std::vector<double> x(n + 1);
  const double mid = 0.5 * (domain.a + domain.b);
  const double half = 0.5 * domain.length();
  if (n == 0) {
    x[0] = mid;
    return x;
  }
  for (std::size_t k = 0; k <= n; ++k) {
    // Symmetric form of -cos(k pi / n).
    const double t = std::sin(std::numbers::pi * (2.0 * static_cast<double>(k) - static_cast<double>(n)) /
                              (2.0 * static_cast<double>(n)));
    x[k] = mid + half * t;
  }
  x.front() = domain.a;
  x.back() = domain.b;
  return x;
}

std::vector<double> values_to_coeffs(std::span<const double> values) {
  std::vector<double> c(values.begin(), values.end());
  const std::size_t n = c.size() - 1;
  if (n == 0) return c;
  dct1(c);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j <= n; ++j) c[j] *= (j % 2 == 0 ? scale : -scale);
  c.front() *= 0.5;
  c.back() *= 0.5;
  return c;
}

std::vector<double> coeffs_to_values(std::span<const double> coeffs, std::size_t n) {
  if (n == 0) {
    // A single node sits at t = 0 where T_j(0) = cos(j pi / 2).
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); j += 4) s += coeffs[j];
    for (std::size_t j = 2; j < coeffs.size(); j += 4) s -= coeffs[j];
    return {s};
  }
  if (coeffs.size() > n + 1) throw std::invalid_argument("coeffs_to_values: too many coefficients");
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) v[j] = (j % 2 == 0 ? 0.5 : -0.5) * coeffs[j];
  v.front() *= 2.0;
  v.back() *= 2.0;
  dct1(v);
  return v;
}

SpectralFun::SpectralFun() : SpectralFun(Interval{}, {0.0}) {}

SpectralFun::SpectralFun(Interval domain, std::vector<double> coeffs, double tol_rel)
    : domain_(domain), coeffs_(std::move(coeffs)), tol_rel_(tol_rel) {
  if (!(domain_.a < domain_.b) || !std::isfinite(domain_.a) || !std::isfinite(domain_.b)) {
    throw std::invalid_argument("invalid domain: need finite a < b");
  }
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

SpectralFun SpectralFun::from_function(const std::function<double(double)>& f, Interval domain,
                                       const SpectralOptions& opts) {
  return from_samples(
      [&f](std::span<const double> xs) {
        std::vector<double> v(xs.size());
        std::transform(xs.begin(), xs.end(), v.begin(), f);
        return v;
      },
      domain, opts);
}

SpectralFun SpectralFun::from_samples(const Sampler& sampler, Interval domain,
                                      const SpectralOptions& opts) {
  for (std::size_t n = 16; n + 1 <= opts.max_points; n *= 2) {
    const auto nodes = chebyshev_points(domain, n);
    const auto values = sampler(nodes);
    if (values.size() != nodes.size()) {
      throw std::invalid_argument("sampler returned the wrong number of values");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("function is not finite at a Chebyshev node");
    }
    auto c = values_to_coeffs(values);
    const double scale = max_abs_coeff(c);
    const double tail = std::max(std::abs(c[n - 1]), std::abs(c[n]));
    if (tail <= opts.tol_rel * scale) {
      return SpectralFun(domain, chop_coeffs(std::move(c), opts.tol_rel), opts.tol_rel);
    }
  }
  throw UnresolvedError("function not resolved with " + std::to_string(opts.max_points) +
                        " Chebyshev points");
}

SpectralFun SpectralFun::constant(Interval domain, double value, double tol_rel) {
  return SpectralFun(domain, {value}, tol_rel);
}

SpectralFun SpectralFun::identity(Interval domain, double tol_rel) {
  return SpectralFun(domain, {0.5 * (domain.a + domain.b), 0.5 * domain.length()}, tol_rel);
}

double SpectralFun::eval(double x) const {
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(domain_.length(), 1.0);
  if (!(x >= domain_.a - slack && x <= domain_.b + slack)) {
    throw std::out_of_range("x = " + std::to_string(x) + " outside [" + std::to_string(domain_.a) +
                            ", " + std::to_string(domain_.b) + "]");
  }
  double t = (2.0 * x - domain_.a - domain_.b) / domain_.length();
  t = std::clamp(t, -1.0, 1.0);
  // Clenshaw recurrence.
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_[0] + t * b1 - b2;
}

std::vector<double> SpectralFun::eval(std::span<const double> xs) const {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), [this](double x) { return eval(x); });
  return out;
}

SpectralFun SpectralFun::derivative() const {
  const std::size_t n = coeffs_.size() - 1;
  if (n == 0) return SpectralFun(domain_, {0.0}, tol_rel_);
  std::vector<double> d(n + 2, 0.0);
  // d_{k-1} = d_{k+1} + 2 k c_k, with d_0 halved.
  for (std::size_t k = n; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * static_cast<double>(k) * coeffs_[k];
  d[0] *= 0.5;
  d.resize(n);
  const double scale = 2.0 / domain_.length();
  for (double& v : d) v *= scale;
  return SpectralFun(domain_, std::move(d), tol_rel_);
}

SpectralFun SpectralFun::cumulative_integral() const {
  const std::size_t n = coeffs_.size() - 1;
  std::vector<double> c(coeffs_);
  c.resize(n + 3, 0.0);
  std::vector<double> b(n + 2, 0.0);
  // integral T_0 = T_1, integral T_1 = T_2 / 4,
  // integral T_k = T_{k+1} / (2(k+1)) - T_{k-1} / (2(k-1)).
  b[1] = c[0] - 0.5 * c[2];
  for (std::size_t k = 2; k <= n + 1; ++k) {
    b[k] = (c[k - 1] - c[k + 1]) / (2.0 * static_cast<double>(k));
  }
  double at_left = 0.0;
  for (std::size_t k = 1; k < b.size(); ++k) at_left += (k % 2 == 0 ? b[k] : -b[k]);
  b[0] = -at_left;
  const double scale = 0.5 * domain_.length();
  for (double& v : b) v *= scale;
  return SpectralFun(domain_, chop_coeffs(std::move(b), 0.0), tol_rel_);
}

double SpectralFun::definite_integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); k += 2) {
    const double kk = static_cast<double>(k);
    s += coeffs_[k] * 2.0 / (1.0 - kk * kk);
  }
  return 0.5 * domain_.length() * s;
}

double SpectralFun::max_abs() const {
  const std::size_t points = std::max<std::size_t>(257, 4 * degree() + 1);
  double m = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = domain_.a + domain_.length() * static_cast<double>(i) / static_cast<double>(points - 1);
    m = std::max(m, std::abs(eval(std::min(x, domain_.b))));
  }
  return m;
}

SpectralFun SpectralFun::chopped(double tol) const {
  return SpectralFun(domain_, chop_coeffs(coeffs_, tol), tol_rel_);
}

SpectralFun SpectralFun::operator-() const {
  SpectralFun out(*this);
  for (double& v : out.coeffs_) v = -v;
  return out;
}

SpectralFun& SpectralFun::operator*=(double s) {
  for (double& v : coeffs_) v *= s;
  return *this;
}

SpectralFun operator+(const SpectralFun& f, const SpectralFun& g) {
  check_same_domain(f, g);
  std::vector<double> c(std::max(f.coeffs_.size(), g.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < f.coeffs_.size(); ++k) c[k] += f.coeffs_[k];
  for (std::size_t k = 0; k < g.coeffs_.size(); ++k) c[k] += g.coeffs_[k];
  const double tol = std::min(f.tol_rel_, g.tol_rel_);
  return SpectralFun(f.domain_, chop_coeffs(std::move(c), tol), tol);
}

SpectralFun operator-(const SpectralFun& f, const SpectralFun& g) { return f + (-g); }

SpectralFun operator*(double s, const SpectralFun& f) {
  SpectralFun out(f);
  out *= s;
  return out;
}

SpectralFun multiply(const SpectralFun& f, const SpectralFun& g) {
  check_same_domain(f, g);
  const double tol = std::min(f.tol_rel(), g.tol_rel());
  if (f.degree() == 0) return f.coeffs()[0] * g;
  if (g.degree() == 0) return g.coeffs()[0] * f;
  const std::size_t n = f.degree() + g.degree();
  auto fv = coeffs_to_values(f.coeffs(), n);
  const auto gv = coeffs_to_values(g.coeffs(), n);
  for (std::size_t k = 0; k <= n; ++k) fv[k] *= gv[k];
  auto c = values_to_coeffs(fv);
  return SpectralFun(f.domain(), chop_coeffs(std::move(c), tol), tol);
}

}  // namespace velpert
