#pragma once

// Brute-force reference computations written independently of the library.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fracrd/field.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Node j (0-based storage) on [lo, hi] with K modes.
inline double node(bool dirichlet, double lo, double hi, std::size_t K, std::size_t j) {
  if (dirichlet) return lo + static_cast<double>(j + 1) * (hi - lo) / static_cast<double>(K + 1);
  return lo + (static_cast<double>(j) + 0.5) * (hi - lo) / static_cast<double>(K);
}

inline double spacing(bool dirichlet, double lo, double hi, std::size_t K) {
  return (hi - lo) / static_cast<double>(dirichlet ? K + 1 : K);
}

// Mode number stored at index i.
inline std::size_t mode(bool dirichlet, std::size_t i) { return dirichlet ? i + 1 : i; }

inline double basis(bool dirichlet, double lo, double hi, std::size_t k, double x) {
  const double len = hi - lo;
  if (dirichlet) return std::sqrt(2.0 / len) * std::sin(static_cast<double>(k) * pi * (x - lo) / len);
  if (k == 0) return std::sqrt(1.0 / len);
  return std::sqrt(2.0 / len) * std::cos(static_cast<double>(k) * pi * (x - lo) / len);
}

inline double lambda(double lo, double hi, std::size_t k) {
  const double r = static_cast<double>(k) * pi / (hi - lo);
  return r * r;
}

// c_k = h * sum_j u_j e_k(x_j)
inline std::vector<double> forward_1d(bool dirichlet, double lo, double hi, const std::vector<double>& u) {
  const std::size_t K = u.size();
  const double h = spacing(dirichlet, lo, hi, K);
  std::vector<double> c(K, 0.0);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) c[i] += h * u[j] * basis(dirichlet, lo, hi, mode(dirichlet, i), node(dirichlet, lo, hi, K, j));
  return c;
}

// u_j = sum_k c_k e_k(x_j)
inline std::vector<double> inverse_1d(bool dirichlet, double lo, double hi, const std::vector<double>& c) {
  const std::size_t K = c.size();
  std::vector<double> u(K, 0.0);
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t i = 0; i < K; ++i) u[j] += c[i] * basis(dirichlet, lo, hi, mode(dirichlet, i), node(dirichlet, lo, hi, K, j));
  return u;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline fracrd::ScalarField random_field(const fracrd::GridPtr& grid, std::uint64_t seed, double lo = -1.0,
                                        double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  fracrd::ScalarField f(grid);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

}  // namespace oracle
