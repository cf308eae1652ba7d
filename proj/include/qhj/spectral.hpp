#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhj/grid.hpp"
#include "qhj/wavefunction.hpp"

namespace qhj {

/// Discrete H = -hbar^2/(2m) d^2/dx^2 + V on a uniform grid.
///
/// The two grid end points are Dirichlet walls: the wavefunction is pinned to
/// zero there and the operator acts on the n-2 interior nodes. `diagonal` is
/// still stored for every node so that it lines up with grid indices.
struct HamiltonianMatrix {
  Grid1D grid;
  PhysicalConstants constants;
  RealField diagonal;   // hbar^2/(m dx^2) + V(x_i)
  double off_diagonal;  // -hbar^2/(2 m dx^2)

  std::size_t interior_size() const { return grid.size() - 2; }

  /// (H psi)_i at interior nodes; zero at the walls.
  RealField apply(std::span<const double> psi) const;
  ComplexField apply(std::span<const std::complex<double>> psi) const;
};

HamiltonianMatrix assemble_hamiltonian(const Grid1D& grid, std::span<const double> potential,
                                       const PhysicalConstants& constants);

struct EigenPair {
  Grid1D grid;
  double energy;
  RealField function;  // trapezoid-normalised, sign-fixed, zero at the walls
};

struct EigenSolveOptions {
  /// Warn when an eigenfunction has not decayed below 1e-10 of its peak next to
  /// the walls (the grid is probably too narrow). Off for hard-wall problems.
  bool warn_on_boundary_tail = true;
  int max_inverse_iterations = 12;
};

/// The k lowest eigenpairs in ascending order.
///
/// Eigenvalues by Sturm-sequence bisection, eigenvectors by inverse iteration
/// with a pivoted tridiagonal LU. Throws std::invalid_argument when k is out of
/// range and NumericalError when inverse iteration does not converge.
std::vector<EigenPair> solve_lowest_eigenpairs(const HamiltonianMatrix& h, std::size_t k,
                                              const EigenSolveOptions& options = {});

/// Largest |(H psi)_i - E psi_i| over interior nodes.
double eigen_residual(const HamiltonianMatrix& h, const EigenPair& pair);

/// Continuum state at energy E, integrated left to right with Numerov's method
/// starting from a unit-amplitude right-moving wave at x_min. Requires E > max V.
WaveFunction stationary_scattering_state(const Grid1D& grid, std::span<const double> potential,
                                         double energy, const PhysicalConstants& constants);

}  // namespace qhj
