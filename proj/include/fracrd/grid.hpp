#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace fracrd {

/// Homogeneous boundary condition, uniform over the whole boundary.
enum class Boundary { Dirichlet, Neumann };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Rectangular box in one or two dimensions.
class Domain {
 public:
  Domain(std::vector<Interval> axes, Boundary bc);

  static Domain interval(double lo, double hi, Boundary bc) { return Domain({{lo, hi}}, bc); }
  static Domain box(Interval x, Interval y, Boundary bc) { return Domain({x, y}, bc); }

  std::size_t dim() const { return axes_.size(); }
  const std::vector<Interval>& axes() const { return axes_; }
  const Interval& axis(std::size_t a) const { return axes_[a]; }
  Boundary bc() const { return bc_; }
  double measure() const;

 private:
  std::vector<Interval> axes_;
  Boundary bc_;
};

/// Sampling of a Domain on a tensor grid of nodes, one node per retained
/// eigenmode on each axis.
///
/// Dirichlet grids hold the K interior nodes x_j = c1 + j h, h = (c2 - c1)/(K + 1).
/// Neumann grids are cell centred, x_j = c1 + (j - 1/2) h, h = (c2 - c1)/K.
/// Storage is row-major with the last axis fastest.
class Grid {
 public:
  Grid(Domain domain, std::vector<std::size_t> modes_per_axis);

  const Domain& domain() const { return domain_; }
  std::size_t dim() const { return domain_.dim(); }
  Boundary bc() const { return domain_.bc(); }

  std::size_t modes(std::size_t axis) const { return modes_[axis]; }
  const std::vector<std::size_t>& shape() const { return modes_; }
  std::size_t size() const { return size_; }

  double spacing(std::size_t axis) const { return spacing_[axis]; }
  const std::vector<double>& nodes(std::size_t axis) const { return nodes_[axis]; }

  /// Quadrature weight of one node (product of spacings).
  double cell_volume() const { return cell_volume_; }

  /// Smallest mode number stored on every axis (1 for Dirichlet, 0 for Neumann).
  std::size_t first_mode() const { return domain_.bc() == Boundary::Dirichlet ? 1 : 0; }

  /// Flat storage offset of a node or mode multi-index given in storage
  /// coordinates (0-based on every axis).
  std::size_t flat_index(std::span<const std::size_t> index) const;

  /// Inverse of flat_index.
  std::vector<std::size_t> multi_index(std::size_t flat) const;

  /// Coordinates of the node at a flat offset.
  std::vector<double> coordinates(std::size_t flat) const;

  bool same_layout(const Grid& other) const;

 private:
  Domain domain_;
  std::vector<std::size_t> modes_;
  std::vector<double> spacing_;
  std::vector<std::vector<double>> nodes_;
  std::size_t size_ = 1;
  double cell_volume_ = 1.0;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const Domain& domain, std::span<const std::size_t> modes_per_axis);
GridPtr build_grid(const Domain& domain, std::initializer_list<std::size_t> modes_per_axis);

/// Laplacian eigenvalue for a mode multi-index in mode numbering
/// (Dirichlet k >= 1, Neumann k >= 0): sum over axes of (k pi / (c2 - c1))^2.
double eigenvalue(const Domain& domain, std::span<const std::size_t> k);
double eigenvalue(const Domain& domain, std::initializer_list<std::size_t> k);

/// One-dimensional L2-normalised eigenfunction of mode k on an interval.
double eigenfunction_1d(const Interval& axis, Boundary bc, std::size_t k, double x);

/// Tensor-product eigenfunction e_k evaluated at a point.
double eigenfunction(const Domain& domain, std::span<const std::size_t> k,
                     std::span<const double> x);

}  // namespace fracrd
