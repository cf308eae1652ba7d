#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qhj/grid.hpp"
#include "qhj/parallel.hpp"
#include "qhj/potential.hpp"
#include "qhj/wavefunction.hpp"

namespace qhj {

struct ClassicalState {
  double x = 0.0;
  double p = 0.0;
  double t = 0.0;
};

/// Uniformly sampled trajectory with the running action integral.
struct Trajectory {
  double dt = 0.0;
  std::vector<ClassicalState> samples;
  std::vector<double> action;  // action[0] == 0
};

/// One velocity-Verlet step. `force` holds -V'(x) on entry and on exit.
/// Returns the discrete Lagrangian dt * (p_half^2/2m - (V(x) + V(x'))/2).
inline double verlet_step(const ClassicalPotential& v, double mass, double dt, double& x, double& p,
                          double& force, double& v_here) {
  const double p_half = p + 0.5 * dt * force;
  x += dt * p_half / mass;
  const double v_next = v.value(x);
  force = -v.gradient(x);
  p = p_half + 0.5 * dt * force;
  const double lagrangian = dt * (p_half * p_half / (2.0 * mass) - 0.5 * (v_here + v_next));
  v_here = v_next;
  return lagrangian;
}

/// Velocity-Verlet integration of Hamilton's equations. The action is the sum
/// of discrete Lagrangians, i.e. the trapezoidal rule on p^2/2m - V with the
/// kinetic term evaluated at the Verlet half step.
Trajectory integrate_hamilton(const ClassicalPotential& potential, double x0, double p0, double dt,
                              std::size_t n_steps, const PhysicalConstants& constants);

double classical_energy(const ClassicalPotential& potential, double x, double p,
                        const PhysicalConstants& constants);

/// S(x, t) = -E t + x sqrt(2 m E): the principal function of free motion.
class FreePrincipalFunction {
 public:
  FreePrincipalFunction(double energy, const PhysicalConstants& constants);

  double operator()(double x, double t) const { return -energy_ * t + x * momentum_; }
  double momentum() const { return momentum_; }
  double energy() const { return energy_; }

 private:
  double energy_;
  double momentum_;
};

/// S sampled on grid x time slices. Mask value 1 marks an invalid point.
struct PrincipalFunctionField {
  explicit PrincipalFunctionField(const Grid1D& g) : grid(g) {}

  Grid1D grid;
  double t0 = 0.0;
  double dt = 0.0;  // spacing between slices
  std::vector<RealField> s;
  std::vector<Mask> invalid;
  std::optional<std::size_t> caustic_step;  // first integrator step with crossed characteristics
  double step_dt = 0.0;                     // integrator step

  std::size_t slices() const { return s.size(); }
  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  std::optional<double> caustic_time() const;
};

/// Solves the Hamilton-Jacobi equation by characteristics.
///
/// One trajectory starts at every grid node with p0 = dS0/dx. Every
/// `stride`-th step the endpoints are interpolated back onto the grid with
/// cubic Hermite polynomials using S0(x0) + action and the momenta (the
/// gradient of S along the family). Nodes outside the span of the endpoints are
/// invalid, and so is every slice from the first step at which two neighbouring
/// endpoints swap order. Throws if the swap happens on the very first step.
PrincipalFunctionField principal_function_from_characteristics(
    const ClassicalPotential& potential, std::span<const double> initial_action, double dt,
    std::size_t n_steps, const PhysicalConstants& constants, std::size_t stride = 1,
    Execution exec = Execution::Serial);

/// Samples a closed-form S(x, t) on the grid at t0 + k dt for k < n_slices.
PrincipalFunctionField sample_principal_function(const Grid1D& grid, double t0, double dt,
                                                 std::size_t n_slices,
                                                 const std::function<double(double, double)>& s);

/// The unwrapped phase of each slice as a space-time field, with 2 pi hbar
/// branch offsets removed between consecutive slices. Nodes are invalid.
PrincipalFunctionField phase_field(std::span<const WaveFunction> series,
                                   const PhysicalConstants& constants);

struct HjResidual {
  std::vector<double> times;
  std::vector<RealField> residual;  // (S')^2/2m + V + d_t S, NaN where masked
  std::vector<Mask> masks;

  double max_abs() const;
};

/// Central-difference residual at every interior slice and node whose stencil
/// is valid.
HjResidual hj_residual(const PrincipalFunctionField& field, std::span<const double> potential,
                       const PhysicalConstants& constants);

}  // namespace qhj
