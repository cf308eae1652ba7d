#pragma once

#include <span>
#include <vector>

#include "qhj/grid.hpp"
#include "qhj/parallel.hpp"
#include "qhj/spectral.hpp"
#include "qhj/wavefunction.hpp"

namespace qhj {

/// psi = lambda * exp(i phi / hbar), with phi stored in units of action.
struct PolarField {
  Grid1D grid;
  double time = 0.0;
  RealField lambda;
  RealField phi;     // quiet NaN where node_mask is set
  Mask node_mask;
  double node_threshold = 0.0;
};

/// Relative node threshold: a point is a node when lambda < 1e-6 * max(lambda).
inline constexpr double kNodeThreshold = 1e-6;

/// Modulus and unwrapped phase.
///
/// Node points are those with lambda below the threshold, plus both members of
/// any adjacent pair whose phases differ by more than pi/2 (a zero crossing
/// between grid nodes, e.g. the interior nodes of a real eigenfunction). The
/// phase is unwrapped left to right; each unmasked run restarts from a
/// reference in (-pi hbar, pi hbar]. Throws when every point is a node.
PolarField decompose(const WaveFunction& psi, const PhysicalConstants& constants);

/// lambda * exp(i phi / hbar); masked points get lambda with zero phase.
ComplexField recompose(const PolarField& polar, const PhysicalConstants& constants);

struct QuantumPotentialField {
  Grid1D grid;
  RealField v_q;
  RealField v_t;  // empty unless a potential was supplied
  Mask mask;
};

/// V_q = -(hbar^2 / 2m) lambda'' / lambda with a central second difference.
/// Masked at nodes, next to nodes and at the two end points.
QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalConstants& constants);

/// Same as above and fills v_t = V + V_q.
QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalConstants& constants,
                                        std::span<const double> potential);

/// Pointwise V + V_q. NaN entries of v_q (masked) stay NaN.
RealField total_potential(std::span<const double> v_q, std::span<const double> potential);

struct MadelungResiduals {
  std::vector<double> times;             // interior slice times
  std::vector<RealField> phase;          // (phi')^2/2m + V + V_q + d_t phi
  std::vector<RealField> continuity;     // phi'' + 2 phi' (ln lambda)' + 2m d_t ln lambda
  std::vector<Mask> masks;

  double max_abs_phase() const;
  double max_abs_continuity() const;
};

/// Residuals of the phase (quantum Hamilton-Jacobi) and continuity equations
/// for a time series with uniform spacing, at every interior slice.
///
/// Time derivatives are central differences across the neighbouring slices;
/// the phase difference is taken as arg(psi_{k+1} conj(psi_{k-1})) so that no
/// temporal unwrapping is needed.
MadelungResiduals madelung_residuals(std::span<const WaveFunction> series,
                                     std::span<const double> potential,
                                     const PhysicalConstants& constants,
                                     Execution exec = Execution::Serial);

/// phi'' + 2 (phi') (ln lambda)' for a single slice: the continuity residual of
/// a stationary state. NaN where masked.
RealField stationary_continuity_residual(const PolarField& polar);

/// Probability current (hbar/m) Im(conj(psi) psi') with central differences.
RealField probability_current(const WaveFunction& psi, const PhysicalConstants& constants);

struct AmplitudeRelation {
  enum class Status { Measured, Vacuous };
  Status status = Status::Vacuous;
  double deviation = 0.0;  // max |lambda^2 P - median| / median
  double median = 0.0;     // median of lambda^2 P (= m j for a stationary state)
  std::size_t points = 0;
};

/// Checks that lambda^2 * phi' is spatially constant for a stationary state,
/// i.e. lambda = const * (phi')^(-1/2). A constant phase makes the relation
/// vacuous. Throws when phi' changes sign.
AmplitudeRelation verify_1d_amplitude_relation(const PolarField& polar);

/// Normalised residual of lambda'' + (2m/hbar^2)[(n+1/2) hbar omega - m omega^2 x^2/2] lambda
/// over interior nodes, using the signed eigenfunction so that nodes are regular.
double verify_oscillator_identity(int n, const EigenPair& eig, const PhysicalConstants& constants,
                                  double omega);

/// max |(phi')^2 - 2m (E - V_t)| over unmasked interior nodes.
double verify_modified_hj(const WaveFunction& psi, std::span<const double> potential, double energy,
                          const PhysicalConstants& constants);
double verify_modified_hj(const EigenPair& eig, std::span<const double> potential,
                          const PhysicalConstants& constants);

}  // namespace qhj
