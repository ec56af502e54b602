#pragma once

#include <limits>
#include <string>

#include "fracrd/field.hpp"

namespace fracrd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormReport {
  double p = 2.0;
  double value = 0.0;
  std::string quadrature = "rectangle";
};

/// Discrete L^p norm with rectangle-rule weight h^N per node; p = infinity
/// gives the max-abs over nodes.
NormReport lp_norm(const ScalarField& field, double p);

/// Rectangle-rule integral h^N * sum_j u_j.
double integral(const ScalarField& field);

/// integral(field) divided by the domain measure.
double mean(const ScalarField& field);

/// Rectangle-rule inner product h^N * sum_j u_j v_j.
double inner_product(const ScalarField& u, const ScalarField& v);

}  // namespace fracrd
