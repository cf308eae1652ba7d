#pragma once

#include <span>

#include "qhj/grid.hpp"

namespace qhj {

/// Complex field psi(x, t) sampled on a grid at one time instant.
struct WaveFunction {
  Grid1D grid;
  ComplexField values;
  double time = 0.0;

  WaveFunction(Grid1D g, ComplexField v, double t = 0.0);

  std::size_t size() const { return values.size(); }
  double norm() const;
};

WaveFunction from_real(const Grid1D& grid, std::span<const double> f, double time = 0.0);

/// exp(i k x) with k = sqrt(2 m E) / hbar, sampled on the grid at t = 0.
WaveFunction plane_wave(const Grid1D& grid, double energy, const PhysicalConstants& constants);

/// Normalised Gaussian packet with centre `center`, mean momentum `momentum`
/// and position standard deviation `width`.
WaveFunction gaussian_packet(const Grid1D& grid, double center, double momentum, double width,
                             const PhysicalConstants& constants);

}  // namespace qhj
