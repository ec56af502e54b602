#include "fracrd/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracrd/errors.hpp"

namespace fracrd {

template <class Space>
bool GridTensor<Space>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

template <class Space>
double GridTensor<Space>::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

template <class Space>
double GridTensor<Space>::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : data_) m = std::min(m, v);
  return m;
}

template <class Space>
GridTensor<Space>& GridTensor<Space>::operator+=(const GridTensor& other) {
  if (!grid_->same_layout(other.grid())) throw std::invalid_argument("grid mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <class Space>
GridTensor<Space>& GridTensor<Space>::operator-=(const GridTensor& other) {
  if (!grid_->same_layout(other.grid())) throw std::invalid_argument("grid mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <class Space>
GridTensor<Space>& GridTensor<Space>::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

template <class Space>
void require_finite(const GridTensor<Space>& t, const char* context) {
  if (!t.all_finite()) throw NonFiniteError(std::string(context) + ": non-finite entry");
}

template class GridTensor<NodeSpace>;
template class GridTensor<ModeSpace>;
template void require_finite(const GridTensor<NodeSpace>&, const char*);
template void require_finite(const GridTensor<ModeSpace>&, const char*);

ScalarField sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto x = grid->coordinates(i);
    f[i] = fn(x);
  }
  return f;
}

ScalarField sample_eigenfunction(const GridPtr& grid, std::span<const std::size_t> k) {
  const std::vector<std::size_t> mode(k.begin(), k.end());
  mode_offset(*grid, mode);
  return sample(grid, [&](std::span<const double> x) {
    return eigenfunction(grid->domain(), mode, x);
  });
}

ScalarField sample_eigenfunction(const GridPtr& grid, std::initializer_list<std::size_t> k) {
  return sample_eigenfunction(grid, std::span<const std::size_t>(k.begin(), k.size()));
}

std::size_t mode_offset(const Grid& grid, std::span<const std::size_t> k) {
  if (k.size() != grid.dim()) throw std::invalid_argument("mode index rank does not match grid");
  std::vector<std::size_t> storage(k.size());
  for (std::size_t a = 0; a < k.size(); ++a) {
    if (k[a] < grid.first_mode() || k[a] - grid.first_mode() >= grid.modes(a))
      throw std::out_of_range("mode index " + std::to_string(k[a]) + " out of range on axis " +
                              std::to_string(a));
    storage[a] = k[a] - grid.first_mode();
  }
  return grid.flat_index(storage);
}

ModeCoeffs unit_mode(const GridPtr& grid, std::span<const std::size_t> k) {
  ModeCoeffs c(grid);
  c[mode_offset(*grid, k)] = 1.0;
  return c;
}

}  // namespace fracrd
