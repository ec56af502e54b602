#include "fracrd/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace fracrd {

NormReport lp_norm(const ScalarField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm requires p >= 1");
  NormReport report;
  report.p = p;
  if (std::isinf(p)) {
    report.value = field.max_abs();
    report.quadrature = "max";
    return report;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : field.values()) acc += v * v;
    report.value = std::sqrt(field.grid().cell_volume() * acc);
  } else if (p == 1.0) {
    for (double v : field.values()) acc += std::abs(v);
    report.value = field.grid().cell_volume() * acc;
  } else {
    for (double v : field.values()) acc += std::pow(std::abs(v), p);
    report.value = std::pow(field.grid().cell_volume() * acc, 1.0 / p);
  }
  return report;
}

double integral(const ScalarField& field) {
  double acc = 0.0;
  for (double v : field.values()) acc += v;
  return field.grid().cell_volume() * acc;
}

double mean(const ScalarField& field) { return integral(field) / field.grid().domain().measure(); }

double inner_product(const ScalarField& u, const ScalarField& v) {
  if (!u.grid().same_layout(v.grid())) throw std::invalid_argument("inner product across grids");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return u.grid().cell_volume() * acc;
}

}  // namespace fracrd
