#include "qhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qhj {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw std::invalid_argument("constants.hbar must be a positive finite number");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("constants.mass must be a positive finite number");
  }
}

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    std::ostringstream msg;
    msg << "grid bounds must satisfy x_max > x_min (got x_min=" << x_min << ", x_max=" << x_max
        << ")";
    throw std::invalid_argument(msg.str());
  }
  if (n_points < 3) {
    std::ostringstream msg;
    msg << "grid needs at least 3 points (got " << n_points << ")";
    throw std::invalid_argument(msg.str());
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

RealField Grid1D::points() const {
  RealField xs(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
  return xs;
}

std::size_t Grid1D::nearest_index(double xv) const {
  const double s = std::round((xv - x_min_) / dx_);
  if (s <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(s), n_points_ - 1);
}

Grid1D build_grid(double x_min, double x_max, std::size_t n_points) {
  return Grid1D(x_min, x_max, n_points);
}

namespace {

void require_length(const Grid1D& grid, std::size_t n, const char* what) {
  if (n != grid.size()) {
    std::ostringstream msg;
    msg << what << ": field length " << n << " does not match grid size " << grid.size();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double integrate(const Grid1D& grid, std::span<const double> f) {
  require_length(grid, f.size(), "integrate");
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * grid.dx();
}

std::complex<double> inner_product(const Grid1D& grid, std::span<const std::complex<double>> a,
                                   std::span<const std::complex<double>> b) {
  require_length(grid, a.size(), "inner_product");
  require_length(grid, b.size(), "inner_product");
  const std::size_t n = a.size();
  std::complex<double> sum = 0.5 * (std::conj(a[0]) * b[0] + std::conj(a[n - 1]) * b[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += std::conj(a[i]) * b[i];
  return sum * grid.dx();
}

double inner_product(const Grid1D& grid, std::span<const double> a, std::span<const double> b) {
  require_length(grid, a.size(), "inner_product");
  require_length(grid, b.size(), "inner_product");
  const std::size_t n = a.size();
  double sum = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += a[i] * b[i];
  return sum * grid.dx();
}

double norm_squared(const Grid1D& grid, std::span<const std::complex<double>> psi) {
  require_length(grid, psi.size(), "norm_squared");
  const std::size_t n = psi.size();
  double sum = 0.5 * (std::norm(psi[0]) + std::norm(psi[n - 1]));
  for (std::size_t i = 1; i + 1 < n; ++i) sum += std::norm(psi[i]);
  return sum * grid.dx();
}

}  // namespace qhj
