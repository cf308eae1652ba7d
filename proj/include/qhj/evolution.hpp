#pragma once

#include <span>
#include <variant>
#include <vector>

#include "qhj/grid.hpp"
#include "qhj/spectral.hpp"
#include "qhj/tridiagonal.hpp"
#include "qhj/wavefunction.hpp"

namespace qhj {

/// Crank-Nicolson propagator (1 + i dt H / 2hbar) psi' = (1 - i dt H / 2hbar) psi
/// with Dirichlet walls at the grid ends. The left-hand matrix is factorised
/// once at construction.
class CrankNicolson {
 public:
  CrankNicolson(const HamiltonianMatrix& h, double dt);

  /// Advances psi in place by one step; the wall values are forced to zero.
  void step(ComplexField& psi) const;

  double dt() const { return dt_; }
  const HamiltonianMatrix& hamiltonian() const { return h_; }

 private:
  HamiltonianMatrix h_;
  double dt_;
  std::complex<double> rhs_off_;
  std::vector<std::complex<double>> rhs_diag_;
  tridiag::ComplexThomas lhs_;
};

struct EvolutionResult {
  double dt = 0.0;  // spacing between stored slices
  std::vector<WaveFunction> slices;
  std::vector<double> norm_history;
  std::vector<double> energy_history;
};

/// Integrates psi0 for n_steps steps of size dt, storing every `stride`-th slice
/// (slice 0 is the initial state with its wall values zeroed).
EvolutionResult evolve(const WaveFunction& psi0, std::span<const double> potential, double dt,
                       std::size_t n_steps, const PhysicalConstants& constants,
                       std::size_t stride = 1);

namespace observable {
struct Position {};
struct Momentum {};
struct Energy {
  std::span<const double> potential;
};
}  // namespace observable

using Observable = std::variant<observable::Position, observable::Momentum, observable::Energy>;

/// <psi| O |psi> with trapezoidal weights. Momentum uses -i hbar times the
/// central difference; energy uses the assembled Hamiltonian. Throws unless
/// psi is normalised within 1e-6 and the imaginary residue is below 1e-10.
double expectation(const WaveFunction& psi, const Observable& op, const PhysicalConstants& constants);

/// <psi|H|psi> / <psi|psi> without the normalisation precondition.
double energy_expectation(const HamiltonianMatrix& h, std::span<const std::complex<double>> psi);

}  // namespace qhj
