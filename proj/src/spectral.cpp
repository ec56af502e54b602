#include "fracrd/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fracrd/errors.hpp"

namespace fracrd {

namespace {

// FFTW's planner is not reentrant; execution through the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_order(double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::invalid_argument("fractional order s must lie in (0, 1], got " + std::to_string(s));
}

void require_same_grid(const Grid& expected, const Grid& actual) {
  if (!expected.same_layout(actual)) throw std::invalid_argument("tensor lives on a different grid");
}

}  // namespace

struct SpectralBasis::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

SpectralBasis::SpectralBasis(GridPtr grid) : grid_(std::move(grid)), plans_(std::make_unique<Plans>()) {
  const Grid& g = *grid_;
  const std::size_t dim = g.dim();
  const bool dirichlet = g.bc() == Boundary::Dirichlet;

  std::vector<std::vector<double>> axis_lambda(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    const std::size_t n = g.modes(a);
    const double len = g.domain().axis(a).length();
    const double h = g.spacing(a);
    std::vector<double> fwd(n), inv(n), lam(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = i + g.first_mode();
      const double w = static_cast<double>(k) * std::numbers::pi / len;
      lam[i] = w * w;
      if (!dirichlet && k == 0) {
        fwd[i] = 0.5 * h * std::sqrt(1.0 / len);
        inv[i] = std::sqrt(1.0 / len);
      } else {
        fwd[i] = 0.5 * h * std::sqrt(2.0 / len);
        inv[i] = 0.5 * std::sqrt(2.0 / len);
      }
    }
    forward_scale_.push_back(std::move(fwd));
    inverse_scale_.push_back(std::move(inv));
    axis_lambda[a] = std::move(lam);
  }

  eigenvalues_.resize(g.size());
  if (dim == 1) {
    eigenvalues_ = axis_lambda[0];
  } else {
    const std::size_t n1 = g.modes(1);
    for (std::size_t i = 0; i < g.modes(0); ++i)
      for (std::size_t j = 0; j < n1; ++j) eigenvalues_[i * n1 + j] = axis_lambda[0][i] + axis_lambda[1][j];
  }

  std::vector<int> n(dim);
  for (std::size_t a = 0; a < dim; ++a) n[a] = static_cast<int>(g.modes(a));
  const fftw_r2r_kind fkind = dirichlet ? FFTW_RODFT00 : FFTW_REDFT10;
  const fftw_r2r_kind ikind = dirichlet ? FFTW_RODFT00 : FFTW_REDFT01;
  std::vector<fftw_r2r_kind> fk(dim, fkind), ik(dim, ikind);

  // Plans are in-place on an aligned scratch buffer. FFTW_ESTIMATE keeps the
  // chosen algorithm, and therefore the rounding, identical from run to run.
  AlignedVector scratch(g.size(), 0.0);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_r2r(static_cast<int>(dim), n.data(), scratch.data(), scratch.data(),
                                  fk.data(), FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_r2r(static_cast<int>(dim), n.data(), scratch.data(), scratch.data(),
                                  ik.data(), FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->inverse) throw Error("FFTW failed to create a transform plan");
}

SpectralBasis::~SpectralBasis() = default;
SpectralBasis::SpectralBasis(SpectralBasis&&) noexcept = default;
SpectralBasis& SpectralBasis::operator=(SpectralBasis&&) noexcept = default;

std::vector<double> SpectralBasis::fractional_eigenvalues(double s) const {
  std::vector<double> out(eigenvalues_.size());
  std::transform(eigenvalues_.begin(), eigenvalues_.end(), out.begin(),
                 [s](double l) { return l == 0.0 ? 0.0 : std::pow(l, s); });
  return out;
}

void SpectralBasis::scale(double* data, const std::vector<std::vector<double>>& factors) const {
  if (factors.size() == 1) {
    const auto& f = factors[0];
    for (std::size_t i = 0; i < f.size(); ++i) data[i] *= f[i];
    return;
  }
  const auto& f0 = factors[0];
  const auto& f1 = factors[1];
  const std::size_t n1 = f1.size();
  for (std::size_t i = 0; i < f0.size(); ++i) {
    double* row = data + i * n1;
    for (std::size_t j = 0; j < n1; ++j) row[j] *= f0[i] * f1[j];
  }
}

void SpectralBasis::forward(const ScalarField& field, ModeCoeffs& out) const {
  require_same_grid(*grid_, field.grid());
  require_same_grid(*grid_, out.grid());
  std::copy(field.values().begin(), field.values().end(), out.values().begin());
  fftw_execute_r2r(plans_->forward, out.data(), out.data());
  scale(out.data(), forward_scale_);
}

void SpectralBasis::inverse(const ModeCoeffs& coeffs, ScalarField& out) const {
  require_same_grid(*grid_, coeffs.grid());
  require_same_grid(*grid_, out.grid());
  std::copy(coeffs.values().begin(), coeffs.values().end(), out.values().begin());
  scale(out.data(), inverse_scale_);
  fftw_execute_r2r(plans_->inverse, out.data(), out.data());
}

ModeCoeffs SpectralBasis::forward(const ScalarField& field) const {
  require_finite(field, "forward_transform");
  ModeCoeffs out(grid_);
  forward(field, out);
  return out;
}

ScalarField SpectralBasis::inverse(const ModeCoeffs& coeffs) const {
  require_finite(coeffs, "inverse_transform");
  ScalarField out(grid_);
  inverse(coeffs, out);
  return out;
}

ScalarField SpectralBasis::apply_sfl(const ScalarField& field, double s) const {
  require_order(s);
  ModeCoeffs c = forward(field);
  const auto mult = fractional_eigenvalues(s);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= mult[i];
  return inverse(c);
}

ScalarField SpectralBasis::semigroup(const ScalarField& field, double s, double d, double t) const {
  require_order(s);
  if (!(d > 0.0)) throw std::invalid_argument("diffusivity d must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("time t must be nonnegative");
  ModeCoeffs c = forward(field);
  const auto mult = fractional_eigenvalues(s);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-d * mult[i] * t);
  return inverse(c);
}

std::shared_ptr<const SpectralBasis> basis_for(const GridPtr& grid) {
  struct Entry {
    std::weak_ptr<const Grid> grid;
    std::shared_ptr<const SpectralBasis> basis;
  };
  constexpr std::size_t kCapacity = 8;
  static std::mutex m;
  static std::deque<Entry> cache;

  std::lock_guard lock(m);
  for (const auto& e : cache) {
    if (e.grid.lock() == grid) return e.basis;
  }
  auto basis = std::make_shared<const SpectralBasis>(grid);
  cache.push_front({grid, basis});
  if (cache.size() > kCapacity) cache.pop_back();
  return basis;
}

ModeCoeffs forward_transform(const ScalarField& field) {
  return basis_for(field.grid_ptr())->forward(field);
}

ScalarField inverse_transform(const ModeCoeffs& coeffs) {
  return basis_for(coeffs.grid_ptr())->inverse(coeffs);
}

ScalarField apply_sfl(const ScalarField& field, double s) {
  return basis_for(field.grid_ptr())->apply_sfl(field, s);
}

ScalarField semigroup_apply(const ScalarField& field, double s, double d, double t) {
  return basis_for(field.grid_ptr())->semigroup(field, s, d, t);
}

namespace reference {

namespace {

// table[a][k * n + j] = e_k(x_j) on axis a, k in storage numbering.
std::vector<std::vector<double>> eigen_tables(const Grid& g) {
  std::vector<std::vector<double>> tables(g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    const std::size_t n = g.modes(a);
    tables[a].resize(n * n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        tables[a][k * n + j] =
            eigenfunction_1d(g.domain().axis(a), g.bc(), k + g.first_mode(), g.nodes(a)[j]);
  }
  return tables;
}

double basis_value(const Grid& g, const std::vector<std::vector<double>>& tables, std::size_t mode,
                   std::size_t node) {
  const auto k = g.multi_index(mode);
  const auto j = g.multi_index(node);
  double v = 1.0;
  for (std::size_t a = 0; a < g.dim(); ++a) v *= tables[a][k[a] * g.modes(a) + j[a]];
  return v;
}

}  // namespace

ModeCoeffs forward(const ScalarField& field) {
  require_finite(field, "reference::forward");
  const Grid& g = field.grid();
  const auto tables = eigen_tables(g);
  ModeCoeffs out(field.grid_ptr());
  for (std::size_t k = 0; k < g.size(); ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += field[j] * basis_value(g, tables, k, j);
    out[k] = g.cell_volume() * acc;
  }
  return out;
}

ScalarField inverse(const ModeCoeffs& coeffs) {
  require_finite(coeffs, "reference::inverse");
  const Grid& g = coeffs.grid();
  const auto tables = eigen_tables(g);
  ScalarField out(coeffs.grid_ptr());
  for (std::size_t j = 0; j < g.size(); ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) acc += coeffs[k] * basis_value(g, tables, k, j);
    out[j] = acc;
  }
  return out;
}

ScalarField apply_sfl(const ScalarField& field, double s) {
  require_order(s);
  ModeCoeffs c = forward(field);
  const Grid& g = field.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto idx = g.multi_index(k);
    for (auto& i : idx) i += g.first_mode();
    const double lambda = eigenvalue(g.domain(), idx);
    c[k] *= lambda == 0.0 ? 0.0 : std::pow(lambda, s);
  }
  return inverse(c);
}

}  // namespace reference

}  // namespace fracrd
