#pragma once

#include <cstddef>
#include <functional>
#include <new>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracrd/grid.hpp"

namespace fracrd {

/// Allocator returning storage aligned for the widest SIMD loads FFTW uses.
template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
  using value_type = T;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Alignment>;
  };

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Alignment}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Alignment}); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Alignment>&) const noexcept {
    return true;
  }
};

using AlignedVector = std::vector<double, AlignedAllocator<double>>;

struct NodeSpace {};
struct ModeSpace {};

/// Dense real tensor laid out on a Grid, either as nodal values or as
/// eigenbasis coefficients (selected by the tag).
template <class Space>
class GridTensor {
 public:
  GridTensor() = default;

  explicit GridTensor(GridPtr grid) : grid_(std::move(grid)), data_(grid_->size(), 0.0) {}

  GridTensor(GridPtr grid, std::span<const double> values) : grid_(std::move(grid)) {
    if (values.size() != grid_->size())
      throw std::invalid_argument("tensor size does not match grid");
    data_.assign(values.begin(), values.end());
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  bool all_finite() const;
  double max_abs() const;
  double min() const;

  GridTensor& operator+=(const GridTensor& other);
  GridTensor& operator-=(const GridTensor& other);
  GridTensor& operator*=(double factor);

 private:
  GridPtr grid_;
  AlignedVector data_;
};

/// Nodal samples of a scalar function on the grid.
using ScalarField = GridTensor<NodeSpace>;

/// Coefficients in the L2(domain)-normalised Laplacian eigenbasis. Storage
/// index 0 on each axis is mode 1 for Dirichlet and mode 0 for Neumann.
using ModeCoeffs = GridTensor<ModeSpace>;

template <class Space>
GridTensor<Space> operator+(GridTensor<Space> a, const GridTensor<Space>& b) {
  return a += b;
}
template <class Space>
GridTensor<Space> operator-(GridTensor<Space> a, const GridTensor<Space>& b) {
  return a -= b;
}
template <class Space>
GridTensor<Space> operator*(double factor, GridTensor<Space> a) {
  return a *= factor;
}

/// Samples fn at every node; fn receives the node coordinates.
ScalarField sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn);

/// Samples the eigenfunction e_k (mode numbering) at every node.
ScalarField sample_eigenfunction(const GridPtr& grid, std::span<const std::size_t> k);
ScalarField sample_eigenfunction(const GridPtr& grid, std::initializer_list<std::size_t> k);

/// Coefficient tensor with a single unit entry at mode k (mode numbering).
ModeCoeffs unit_mode(const GridPtr& grid, std::span<const std::size_t> k);

/// Flat storage index of mode k (mode numbering), validating the range.
std::size_t mode_offset(const Grid& grid, std::span<const std::size_t> k);

/// Throws NonFiniteError naming the context when any entry is NaN or Inf.
template <class Space>
void require_finite(const GridTensor<Space>& t, const char* context);

}  // namespace fracrd
