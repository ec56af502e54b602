#include "fracrd/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracrd {

std::string_view to_string(Boundary bc) {
  return bc == Boundary::Dirichlet ? "dirichlet" : "neumann";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "dirichlet" || name == "Dirichlet") return Boundary::Dirichlet;
  if (name == "neumann" || name == "Neumann") return Boundary::Neumann;
  throw std::invalid_argument("unknown boundary condition '" + std::string(name) + "'");
}

Domain::Domain(std::vector<Interval> axes, Boundary bc) : axes_(std::move(axes)), bc_(bc) {
  if (axes_.empty() || axes_.size() > 2)
    throw std::invalid_argument("domain dimension must be 1 or 2");
  for (const auto& a : axes_) {
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.hi > a.lo))
      throw std::invalid_argument("domain axis requires finite c1 < c2");
  }
}

double Domain::measure() const {
  double m = 1.0;
  for (const auto& a : axes_) m *= a.length();
  return m;
}

Grid::Grid(Domain domain, std::vector<std::size_t> modes_per_axis)
    : domain_(std::move(domain)), modes_(std::move(modes_per_axis)) {
  if (modes_.size() != domain_.dim())
    throw std::invalid_argument("modes_per_axis has " + std::to_string(modes_.size()) +
                                " entries for a " + std::to_string(domain_.dim()) +
                                "-dimensional domain");
  for (std::size_t a = 0; a < modes_.size(); ++a) {
    const std::size_t k = modes_[a];
    if (k < 1) throw std::invalid_argument("each axis needs at least one mode");
    const Interval& iv = domain_.axis(a);
    std::vector<double> x(k);
    double h = 0.0;
    if (domain_.bc() == Boundary::Dirichlet) {
      h = iv.length() / static_cast<double>(k + 1);
      for (std::size_t j = 0; j < k; ++j) x[j] = iv.lo + static_cast<double>(j + 1) * h;
    } else {
      h = iv.length() / static_cast<double>(k);
      for (std::size_t j = 0; j < k; ++j) x[j] = iv.lo + (static_cast<double>(j) + 0.5) * h;
    }
    spacing_.push_back(h);
    nodes_.push_back(std::move(x));
    size_ *= k;
    cell_volume_ *= h;
  }
}

std::size_t Grid::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != dim()) throw std::invalid_argument("index rank does not match grid");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (index[a] >= modes_[a]) throw std::out_of_range("grid index out of range");
    flat = flat * modes_[a] + index[a];
  }
  return flat;
}

std::vector<std::size_t> Grid::multi_index(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t a = dim(); a-- > 0;) {
    idx[a] = flat % modes_[a];
    flat /= modes_[a];
  }
  return idx;
}

std::vector<double> Grid::coordinates(std::size_t flat) const {
  auto idx = multi_index(flat);
  std::vector<double> x(dim());
  for (std::size_t a = 0; a < dim(); ++a) x[a] = nodes_[a][idx[a]];
  return x;
}

bool Grid::same_layout(const Grid& other) const {
  if (this == &other) return true;
  if (modes_ != other.modes_ || bc() != other.bc()) return false;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (domain_.axis(a).lo != other.domain_.axis(a).lo ||
        domain_.axis(a).hi != other.domain_.axis(a).hi)
      return false;
  }
  return true;
}

GridPtr build_grid(const Domain& domain, std::span<const std::size_t> modes_per_axis) {
  return std::make_shared<const Grid>(
      domain, std::vector<std::size_t>(modes_per_axis.begin(), modes_per_axis.end()));
}

GridPtr build_grid(const Domain& domain, std::initializer_list<std::size_t> modes_per_axis) {
  return build_grid(domain, std::span<const std::size_t>(modes_per_axis.begin(), modes_per_axis.size()));
}

double eigenvalue(const Domain& domain, std::span<const std::size_t> k) {
  if (k.size() != domain.dim()) throw std::invalid_argument("mode index rank does not match domain");
  double lambda = 0.0;
  for (std::size_t a = 0; a < k.size(); ++a) {
    if (domain.bc() == Boundary::Dirichlet && k[a] == 0)
      throw std::out_of_range("Dirichlet modes start at k = 1");
    const double w = static_cast<double>(k[a]) * std::numbers::pi / domain.axis(a).length();
    lambda += w * w;
  }
  return lambda;
}

double eigenvalue(const Domain& domain, std::initializer_list<std::size_t> k) {
  return eigenvalue(domain, std::span<const std::size_t>(k.begin(), k.size()));
}

double eigenfunction_1d(const Interval& axis, Boundary bc, std::size_t k, double x) {
  const double len = axis.length();
  const double arg = static_cast<double>(k) * std::numbers::pi * (x - axis.lo) / len;
  if (bc == Boundary::Dirichlet) {
    if (k == 0) throw std::out_of_range("Dirichlet modes start at k = 1");
    return std::sqrt(2.0 / len) * std::sin(arg);
  }
  if (k == 0) return std::sqrt(1.0 / len);
  return std::sqrt(2.0 / len) * std::cos(arg);
}

double eigenfunction(const Domain& domain, std::span<const std::size_t> k,
                     std::span<const double> x) {
  if (k.size() != domain.dim() || x.size() != domain.dim())
    throw std::invalid_argument("rank mismatch in eigenfunction evaluation");
  double v = 1.0;
  for (std::size_t a = 0; a < k.size(); ++a)
    v *= eigenfunction_1d(domain.axis(a), domain.bc(), k[a], x[a]);
  return v;
}

}  // namespace fracrd
