#include "velpert/power_series.hpp"

#include <cmath>
#include <stdexcept>

namespace velpert::fps {

std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t terms) {
  std::vector<double> out(terms, 0.0);
  for (std::size_t i = 0; i < a.size() && i < terms; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < terms; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> pow(std::span<const double> s, double alpha, std::size_t terms) {
  if (s.empty() || !(s[0] > 0.0)) throw std::domain_error("fps::pow needs a positive constant term");
  auto coeff = [&](std::size_t k) { return k < s.size() ? s[k] : 0.0; };
  std::vector<double> r(terms, 0.0);
  if (terms == 0) return r;
  r[0] = std::pow(s[0], alpha);
  for (std::size_t m = 1; m < terms; ++m) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
      acc += ((alpha + 1.0) * static_cast<double>(k) - static_cast<double>(m)) * coeff(k) * r[m - k];
    }
    r[m] = acc / (static_cast<double>(m) * s[0]);
  }
  return r;
}

}  // namespace velpert::fps
