#include "qhj/wavefunction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qhj {

WaveFunction::WaveFunction(Grid1D g, ComplexField v, double t)
    : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("wavefunction length does not match its grid");
  }
}

double WaveFunction::norm() const { return std::sqrt(norm_squared(grid, values)); }

WaveFunction from_real(const Grid1D& grid, std::span<const double> f, double time) {
  ComplexField v(f.begin(), f.end());
  return WaveFunction(grid, std::move(v), time);
}

WaveFunction plane_wave(const Grid1D& grid, double energy, const PhysicalConstants& constants) {
  constants.validate();
  if (!(energy > 0.0)) throw std::invalid_argument("plane_wave: energy must be positive");
  const double k = std::sqrt(2.0 * constants.mass * energy) / constants.hbar;
  ComplexField v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = std::polar(1.0, k * grid.x(i));
  return WaveFunction(grid, std::move(v), 0.0);
}

WaveFunction gaussian_packet(const Grid1D& grid, double center, double momentum, double width,
                             const PhysicalConstants& constants) {
  constants.validate();
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_packet: width must be positive");
  ComplexField v(grid.size());
  const double amp = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * width);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = grid.x(i) - center;
    v[i] = amp * std::exp(-u * u / (4.0 * width * width)) *
           std::polar(1.0, momentum * grid.x(i) / constants.hbar);
  }
  WaveFunction psi(grid, std::move(v), 0.0);
  const double n = psi.norm();
  for (auto& c : psi.values) c /= n;
  return psi;
}

}  // namespace qhj
