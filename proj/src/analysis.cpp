#include "fracrd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracrd/spectral.hpp"

namespace fracrd {

InequalityReport make_inequality(std::string name, double lhs, double rhs, double tolerance) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.passed = r.slack >= -tolerance;
  return r;
}

InequalityReport interpolation_check(const ScalarField& field, double s1, double s2, double p) {
  if (!(s1 > 0.0) || !(s2 <= 1.0)) throw std::invalid_argument("orders must satisfy 0 < s1 <= s2 <= 1");
  if (s1 > s2) throw std::invalid_argument("interpolation_check requires s1 <= s2");
  const auto basis = basis_for(field.grid_ptr());
  const double lhs = lp_norm(basis->apply_sfl(field, s1), p).value;
  const double top = lp_norm(basis->apply_sfl(field, s2), p).value;
  const double base = lp_norm(field, p).value;
  const double theta = s1 / s2;
  double rhs = 0.0;
  if (top > 0.0) rhs = std::pow(top, theta) * (theta < 1.0 ? std::pow(base, 1.0 - theta) : 1.0);
  const double rel = p == 2.0 ? 1e-12 : 1e-6;
  return make_inequality("interpolation", lhs, rhs, rel * rhs);
}

InequalityReport contraction_check(const ScalarField& field, double s, double d, double t) {
  const double before = lp_norm(field, 2.0).value;
  const double after = lp_norm(semigroup_apply(field, s, d, t), 2.0).value;
  return make_inequality("l2_contraction", after, before, 0.0);
}

InequalityReport stroock_varopoulos_check(const ScalarField& field, double s, double q) {
  if (!(q > 1.0)) throw std::invalid_argument("Stroock-Varopoulos check requires q > 1");
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("order s must lie in (0, 1]");
  ScalarField u = field;
  for (double& v : u.values()) v = std::max(v, 0.0);
  ScalarField power_q = u;
  ScalarField power_half = u;
  for (std::size_t j = 0; j < u.size(); ++j) {
    power_q[j] = std::pow(u[j], q);
    power_half[j] = std::pow(u[j], 0.5 * (q + 1.0));
  }
  const auto basis = basis_for(field.grid_ptr());
  const double lhs_value = inner_product(basis->apply_sfl(u, s), power_q);
  const double norm = lp_norm(basis->apply_sfl(power_half, 0.5 * s), 2.0).value;
  const double rhs_value = 4.0 * q / ((q + 1.0) * (q + 1.0)) * norm * norm;
  // The inequality reads lhs >= rhs; report it as rhs_value <= lhs_value.
  InequalityReport r = make_inequality("stroock_varopoulos", rhs_value, lhs_value, 1e-4 * rhs_value);
  return r;
}

double decay_exponent(const std::vector<TimeSample>& series) {
  if (series.size() < 5) throw std::invalid_argument("decay_exponent needs at least five points");
  double prev = 0.0;
  for (const auto& s : series) {
    if (!(s.t > 0.0) || !(s.value > 0.0))
      throw std::invalid_argument("decay_exponent needs positive times and values");
    if (!(s.t > prev)) throw std::invalid_argument("decay_exponent needs strictly increasing times");
    prev = s.t;
  }
  const double n = static_cast<double>(series.size());
  double mx = 0.0, my = 0.0;
  for (const auto& s : series) {
    mx += std::log(s.t);
    my += std::log(s.value);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& s : series) {
    const double dx = std::log(s.t) - mx;
    sxy += dx * (std::log(s.value) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

DecayFit fit_decay_window(const std::vector<TimeSample>& series, double t_min, double t_max,
                          double span_factor) {
  if (!(span_factor > 1.0)) throw std::invalid_argument("window span factor must exceed 1");
  DecayFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t first = 0; first < series.size(); ++first) {
    if (series[first].t < t_min) continue;
    const double end_t = series[first].t * span_factor;
    if (end_t > t_max * (1.0 + 1e-12)) break;
    std::vector<TimeSample> window;
    for (std::size_t j = first; j < series.size() && series[j].t <= end_t * (1.0 + 1e-12); ++j)
      window.push_back(series[j]);
    if (window.size() < 5) continue;
    const double slope = decay_exponent(window);
    double mx = 0.0, my = 0.0;
    for (const auto& s : window) {
      mx += std::log(s.t);
      my += std::log(s.value);
    }
    mx /= static_cast<double>(window.size());
    my /= static_cast<double>(window.size());
    double res = 0.0;
    for (const auto& s : window) {
      const double e = std::log(s.value) - (my + slope * (std::log(s.t) - mx));
      res += e * e;
    }
    if (res < best.residual) best = {slope, window.front().t, window.back().t, res};
  }
  if (!std::isfinite(best.residual))
    throw std::invalid_argument("no admissible fit window inside [t_min, t_max]");
  return best;
}

UltracontractivityResult ultracontractive_decay(const GridPtr& grid, double s, double d,
                                                std::size_t samples_per_decade) {
  if (samples_per_decade < 5) throw std::invalid_argument("need at least 5 samples per decade");
  const auto basis = basis_for(grid);
  ScalarField impulse(grid);
  std::vector<std::size_t> centre(grid->dim());
  for (std::size_t a = 0; a < grid->dim(); ++a) centre[a] = grid->modes(a) / 2;
  impulse[grid->flat_index(centre)] = 1.0 / grid->cell_volume();

  const auto lambda_s = basis->fractional_eigenvalues(s);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double l : lambda_s) {
    if (l > 0.0) lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  const double t_min = 5.0 / (d * hi);
  const double t_max = 1.0 / (d * lo);

  const ModeCoeffs c0 = basis->forward(impulse);
  ModeCoeffs c(grid);
  ScalarField u(grid);
  UltracontractivityResult result;
  result.expected_slope = -static_cast<double>(grid->dim()) / (2.0 * s);
  const double log_begin = std::log10(t_min) - 1.0;
  const double log_end = std::log10(t_max) + 0.5;
  const auto count = static_cast<std::size_t>(std::ceil((log_end - log_begin) * samples_per_decade));
  for (std::size_t i = 0; i <= count; ++i) {
    const double t = std::pow(10.0, log_begin + static_cast<double>(i) / samples_per_decade);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = c0[k] * std::exp(-d * lambda_s[k] * t);
    basis->inverse(c, u);
    result.series.push_back({t, u.max_abs()});
  }
  result.fit = fit_decay_window(result.series, t_min, t_max);
  return result;
}

InequalityReport run_comparison_pair(const ComparisonProblem& problem) {
  const GridPtr& grid = problem.grid;
  if (!grid) throw std::invalid_argument("comparison problem has no grid");
  if (!(problem.h_t > 0.0) || !(problem.t_end >= 0.0))
    throw std::invalid_argument("comparison problem needs h_t > 0 and t_end >= 0");
  if (!problem.w0.grid().same_layout(*grid) || !problem.z0.grid().same_layout(*grid))
    throw std::invalid_argument("initial data are not on the comparison grid");
  for (std::size_t j = 0; j < grid->size(); ++j)
    if (problem.w0[j] > problem.z0[j])
      throw std::invalid_argument("comparison requires w0 <= z0 at every node");

  const auto steps = static_cast<std::size_t>(std::ceil(problem.t_end / problem.h_t - 1e-9));
  std::vector<std::vector<double>> coords;
  for (std::size_t j = 0; j < grid->size(); ++j) coords.push_back(grid->coordinates(j));
  auto source_at = [](const SourceTerm& src, double t, std::span<const double> x) {
    return src ? src(t, x) : 0.0;
  };
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * problem.h_t;
    for (const auto& x : coords)
      if (source_at(problem.h_src, t, x) > source_at(problem.g_src, t, x))
        throw std::invalid_argument("comparison requires h <= g at every node and step time");
  }

  auto make_config = [&](const ScalarField& u0, const SourceTerm& src) {
    SimConfig cfg;
    cfg.grid = grid;
    cfg.species.push_back({"u", problem.s, problem.d, u0});
    cfg.reaction = std::make_shared<const ReactionSystem>(zero_reaction(1));
    cfg.sources = {src};
    cfg.h_t = problem.h_t;
    cfg.fixed_point_depth = 1;
    cfg.stop.t_final = problem.t_end;
    cfg.positivity = PositivityPolicy::None;
    return cfg;
  };
  Stepper lower(make_config(problem.w0, problem.h_src));
  Stepper upper(make_config(problem.z0, problem.g_src));
  SimState w = lower.initial_state();
  SimState z = upper.initial_state();

  double min_gap = std::numeric_limits<double>::infinity();
  double z_max = 0.0;
  auto observe = [&] {
    for (std::size_t j = 0; j < grid->size(); ++j)
      min_gap = std::min(min_gap, z.fields[0][j] - w.fields[0][j]);
    z_max = std::max(z_max, z.fields[0].max_abs());
  };
  observe();
  for (std::size_t n = 0; n < steps; ++n) {
    lower.advance(w);
    upper.advance(z);
    observe();
  }
  return make_inequality("comparison", -min_gap, 0.0, 1e-8 * std::max(1.0, z_max));
}

}  // namespace fracrd
