#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fracrd/field.hpp"
#include "fracrd/norms.hpp"
#include "fracrd/stepper.hpp"

namespace fracrd {

/// Two sides of a numerically checked inequality lhs <= rhs.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
  double tolerance = 0.0;
  bool passed = false;  ///< slack >= -tolerance
};

InequalityReport make_inequality(std::string name, double lhs, double rhs, double tolerance);

/// ||A^{s1} u||_p <= ||A^{s2} u||_p^{s1/s2} ||u||_p^{(s2-s1)/s2} with A the
/// (discrete) Laplacian and 0 < s1 <= s2 <= 1. Tolerance 1e-12 rhs for
/// p = 2, 1e-6 rhs otherwise.
InequalityReport interpolation_check(const ScalarField& field, double s1, double s2, double p);

/// ||T(t) u||_2 <= ||u||_2 for the fractional heat semigroup. Zero tolerance.
InequalityReport contraction_check(const ScalarField& field, double s, double d, double t);

/// <A^s u, u^q> >= 4q/(q+1)^2 ||A^{s/2} u^{(q+1)/2}||_2^2 on max(u, 0).
/// Soft diagnostic with tolerance 1e-4 rhs.
InequalityReport stroock_varopoulos_check(const ScalarField& field, double s, double q);

struct TimeSample {
  double t = 0.0;
  double value = 0.0;
};

/// Least-squares slope of log(value) against log(t). Needs at least five
/// points with strictly increasing positive t and positive values.
double decay_exponent(const std::vector<TimeSample>& series);

struct DecayFit {
  double slope = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  double residual = 0.0;  ///< sum of squared log residuals of the chosen fit
};

/// Fits decay_exponent on every window spanning `span_factor` in time whose
/// samples lie inside [t_min, t_max], keeping the one with the smallest fit
/// residual.
DecayFit fit_decay_window(const std::vector<TimeSample>& series, double t_min, double t_max,
                          double span_factor = 10.0);

struct UltracontractivityResult {
  DecayFit fit;
  double expected_slope = 0.0;  ///< -(N / 2s)
  std::vector<TimeSample> series;
};

/// Evolves a single-node impulse of unit discrete L1 mass with the exact
/// semigroup and fits the L^inf decay slope. The fit window starts once the
/// highest retained mode is damped by e^{-5} and ends when the lowest mode
/// starts to decay (d lambda_min^s t = 1).
UltracontractivityResult ultracontractive_decay(const GridPtr& grid, double s, double d = 1.0,
                                                std::size_t samples_per_decade = 20);

/// Linear problems w_t + d A^s w = h(t, x), z_t + d A^s z = g(t, x).
struct ComparisonProblem {
  double s = 0.5;
  double d = 1.0;
  GridPtr grid;
  double h_t = 1e-2;
  ScalarField w0;
  ScalarField z0;
  SourceTerm h_src;
  SourceTerm g_src;
  double t_end = 1.0;
};

/// Integrates both problems with the stepper and reports min over
/// space-time of (z - w) as the slack; passes when it is at least
/// -1e-8 max(1, ||z||_inf). Rejects inputs with w0 > z0 or h > g at any node
/// and step time before running.
InequalityReport run_comparison_pair(const ComparisonProblem& problem);

}  // namespace fracrd
