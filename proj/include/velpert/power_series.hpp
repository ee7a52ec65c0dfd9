#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace velpert::fps {

/// First `terms` coefficients of the Cauchy product a(t) b(t).
std::vector<double> multiply(std::span<const double> a, std::span<const double> b, std::size_t terms);

/// First `terms` coefficients of s(t)^alpha for s_0 > 0, by the recurrence
///   m s_0 r_m = sum_{k=1}^{m} ((alpha + 1) k - m) s_k r_{m-k},  r_0 = s_0^alpha.
/// Missing coefficients of s are treated as zero.
std::vector<double> pow(std::span<const double> s, double alpha, std::size_t terms);

/// s(t)^(-1/2).
inline std::vector<double> inverse_sqrt(std::span<const double> s, std::size_t terms) {
  return pow(s, -0.5, terms);
}

}  // namespace velpert::fps
