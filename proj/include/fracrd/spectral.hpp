#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fracrd/field.hpp"
#include "fracrd/grid.hpp"

namespace fracrd {

/// Fast eigenbasis transforms for one grid.
///
/// Dirichlet grids use the DST-I, Neumann grids the DCT-II / DCT-III pair,
/// both rescaled so that coefficients refer to L2-normalised eigenfunctions:
/// coeffs[k] = h^N * sum_j u(x_j) e_k(x_j) and u(x_j) = sum_k coeffs[k] e_k(x_j).
/// With these weights the pair is exactly inverse at the nodes.
///
/// Transforms are executed through FFTW's new-array interface, so one basis
/// may be shared by several threads once constructed.
class SpectralBasis {
 public:
  explicit SpectralBasis(GridPtr grid);
  ~SpectralBasis();

  SpectralBasis(const SpectralBasis&) = delete;
  SpectralBasis& operator=(const SpectralBasis&) = delete;
  SpectralBasis(SpectralBasis&&) noexcept;
  SpectralBasis& operator=(SpectralBasis&&) noexcept;

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }

  /// Laplacian eigenvalue per flat mode index.
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  /// lambda_k^s per flat mode index, with 0^s = 0.
  std::vector<double> fractional_eigenvalues(double s) const;

  ModeCoeffs forward(const ScalarField& field) const;
  ScalarField inverse(const ModeCoeffs& coeffs) const;

  /// Allocation-free variants. Arguments must come from tensors on this grid.
  void forward(const ScalarField& field, ModeCoeffs& out) const;
  void inverse(const ModeCoeffs& coeffs, ScalarField& out) const;

  ScalarField apply_sfl(const ScalarField& field, double s) const;
  ScalarField semigroup(const ScalarField& field, double s, double d, double t) const;

 private:
  struct Plans;

  GridPtr grid_;
  std::vector<double> eigenvalues_;
  // Per-axis scale factors applied after the forward / before the inverse
  // raw transform.
  std::vector<std::vector<double>> forward_scale_;
  std::vector<std::vector<double>> inverse_scale_;
  std::unique_ptr<Plans> plans_;

  void scale(double* data, const std::vector<std::vector<double>>& factors) const;
};

/// Shared basis for a grid, created on first use and released with the grid.
std::shared_ptr<const SpectralBasis> basis_for(const GridPtr& grid);

ModeCoeffs forward_transform(const ScalarField& field);
ScalarField inverse_transform(const ModeCoeffs& coeffs);

/// Spectral fractional Laplacian of order s in (0, 1].
ScalarField apply_sfl(const ScalarField& field, double s);

/// Exact solution operator of u_t + d (-Laplacian)^s u = 0 on the retained
/// modes: multiplies mode k by exp(-d lambda_k^s t).
ScalarField semigroup_apply(const ScalarField& field, double s, double d, double t);

/// Direct O(N^2) evaluation of the transform definitions. Slow; used to
/// validate the fast path.
namespace reference {

ModeCoeffs forward(const ScalarField& field);
ScalarField inverse(const ModeCoeffs& coeffs);
ScalarField apply_sfl(const ScalarField& field, double s);

}  // namespace reference

}  // namespace fracrd
