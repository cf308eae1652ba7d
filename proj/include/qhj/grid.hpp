#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qhj {

using RealField = std::vector<double>;
using ComplexField = std::vector<std::complex<double>>;

/// Per-point validity flags. 1 = masked (value undefined), 0 = usable.
using Mask = std::vector<std::uint8_t>;

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws std::invalid_argument unless hbar > 0 and mass > 0.
  void validate() const;
};

/// Uniform lattice on [x_min, x_max] with n_points nodes (end points included).
///
/// Points are generated from both ends toward the middle so that a grid with
/// x_min == -x_max is exactly mirror-symmetric: x(i) == -x(n-1-i) bitwise.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_points_; }
  double dx() const { return dx_; }

  double x(std::size_t i) const {
    const std::size_t last = n_points_ - 1;
    if (2 * i <= last) return x_min_ + static_cast<double>(i) * dx_;
    return x_max_ - static_cast<double>(last - i) * dx_;
  }

  RealField points() const;

  /// Index of the node closest to `x`, clamped to the grid.
  std::size_t nearest_index(double x) const;

  bool contains(double x) const { return x >= x_min_ && x <= x_max_; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

Grid1D build_grid(double x_min, double x_max, std::size_t n_points);

/// Trapezoidal quadrature of samples on `grid`.
double integrate(const Grid1D& grid, std::span<const double> f);

/// Trapezoidal <a, b> = sum w_i conj(a_i) b_i.
std::complex<double> inner_product(const Grid1D& grid, std::span<const std::complex<double>> a,
                                   std::span<const std::complex<double>> b);
double inner_product(const Grid1D& grid, std::span<const double> a, std::span<const double> b);

double norm_squared(const Grid1D& grid, std::span<const std::complex<double>> psi);

}  // namespace qhj
