#include "qhj/hamilton_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qhj/madelung.hpp"

namespace qhj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RealField gradient_of(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  RealField g(n);
  g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  return g;
}

// Cubic Hermite interpolation of (x, s, p = ds/dx) samples sorted by x.
void hermite_to_grid(const Grid1D& grid, std::span<const double> xs, std::span<const double> ss,
                     std::span<const double> ps, RealField& out, Mask& invalid) {
  const std::size_t n = grid.size();
  out.assign(n, kNaN);
  invalid.assign(n, 1);
  std::size_t j = 0;
  const std::size_t last = xs.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    if (x < xs.front() || x > xs.back()) continue;
    while (j + 1 < last && xs[j + 1] < x) ++j;
    const double h = xs[j + 1] - xs[j];
    const double t = (x - xs[j]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    out[i] = h00 * ss[j] + h10 * h * ps[j] + h01 * ss[j + 1] + h11 * h * ps[j + 1];
    invalid[i] = 0;
  }
}

}  // namespace

double classical_energy(const ClassicalPotential& potential, double x, double p,
                        const PhysicalConstants& constants) {
  return p * p / (2.0 * constants.mass) + potential.value(x);
}

Trajectory integrate_hamilton(const ClassicalPotential& potential, double x0, double p0, double dt,
                              std::size_t n_steps, const PhysicalConstants& constants) {
  constants.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_hamilton: dt must be positive");
  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(n_steps + 1);
  traj.action.reserve(n_steps + 1);
  double x = x0;
  double p = p0;
  double v_here = potential.value(x);
  double force = -potential.gradient(x);
  double action = 0.0;
  traj.samples.push_back({x, p, 0.0});
  traj.action.push_back(0.0);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    action += verlet_step(potential, constants.mass, dt, x, p, force, v_here);
    traj.samples.push_back({x, p, dt * static_cast<double>(k)});
    traj.action.push_back(action);
  }
  return traj;
}

FreePrincipalFunction::FreePrincipalFunction(double energy, const PhysicalConstants& constants)
    : energy_(energy), momentum_(0.0) {
  constants.validate();
  if (!(energy > 0.0)) throw std::invalid_argument("free principal function needs E > 0");
  momentum_ = std::sqrt(2.0 * constants.mass * energy);
}

std::optional<double> PrincipalFunctionField::caustic_time() const {
  if (!caustic_step) return std::nullopt;
  return t0 + step_dt * static_cast<double>(*caustic_step);
}

PrincipalFunctionField principal_function_from_characteristics(
    const ClassicalPotential& potential, std::span<const double> initial_action, double dt,
    std::size_t n_steps, const PhysicalConstants& constants, std::size_t stride, Execution exec) {
  constants.validate();
  const Grid1D& grid = potential.grid();
  if (initial_action.size() != grid.size()) {
    throw std::invalid_argument("principal_function_from_characteristics: S0 length != grid size");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("principal_function_from_characteristics: dt <= 0");
  if (stride == 0) throw std::invalid_argument("principal_function_from_characteristics: stride 0");

  const std::size_t n = grid.size();
  const double m = constants.mass;
  RealField x = grid.points();
  RealField p = gradient_of(initial_action, grid.dx());
  RealField s(initial_action.begin(), initial_action.end());
  RealField v_here(n), force(n);
  for_each_index(exec, n, [&](std::size_t j) {
    v_here[j] = potential.value(x[j]);
    force[j] = -potential.gradient(x[j]);
  });

  PrincipalFunctionField field{grid};
  field.t0 = 0.0;
  field.dt = dt * static_cast<double>(stride);
  field.step_dt = dt;

  auto record = [&] {
    RealField slice;
    Mask invalid;
    hermite_to_grid(grid, x, s, p, slice, invalid);
    field.s.push_back(std::move(slice));
    field.invalid.push_back(std::move(invalid));
  };
  record();

  for (std::size_t k = 1; k <= n_steps; ++k) {
    for_each_index(exec, n, [&](std::size_t j) {
      s[j] += verlet_step(potential, m, dt, x[j], p[j], force[j], v_here[j]);
    });
    bool crossed = false;
    for (std::size_t j = 0; j + 1 < n && !crossed; ++j) crossed = !(x[j + 1] > x[j]);
    if (crossed) {
      if (k == 1) {
        throw std::invalid_argument(
            "principal_function_from_characteristics: characteristics cross on the first step "
            "(initial momentum decreases too steeply)");
      }
      field.caustic_step = k;
      const std::size_t remaining = n_steps / stride + 1 - field.s.size();
      for (std::size_t r = 0; r < remaining; ++r) {
        field.s.emplace_back(n, kNaN);
        field.invalid.emplace_back(n, 1);
      }
      break;
    }
    if (k % stride == 0) record();
  }
  return field;
}

PrincipalFunctionField sample_principal_function(const Grid1D& grid, double t0, double dt,
                                                 std::size_t n_slices,
                                                 const std::function<double(double, double)>& sfun) {
  PrincipalFunctionField field{grid};
  field.t0 = t0;
  field.dt = dt;
  field.step_dt = dt;
  for (std::size_t k = 0; k < n_slices; ++k) {
    const double t = t0 + dt * static_cast<double>(k);
    RealField slice(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) slice[i] = sfun(grid.x(i), t);
    field.s.push_back(std::move(slice));
    field.invalid.emplace_back(grid.size(), 0);
  }
  return field;
}

PrincipalFunctionField phase_field(std::span<const WaveFunction> series,
                                   const PhysicalConstants& constants) {
  if (series.size() < 2) throw std::invalid_argument("phase_field: need at least 2 slices");
  PrincipalFunctionField field{series.front().grid};
  field.t0 = series.front().time;
  field.dt = series[1].time - series[0].time;
  field.step_dt = field.dt;
  const double period = 2.0 * std::numbers::pi * constants.hbar;
  for (std::size_t k = 0; k < series.size(); ++k) {
    PolarField polar = decompose(series[k], constants);
    if (k > 0) {
      // Each unmasked run of this slice gets the branch closest to the
      // previous slice at the first node both slices share.
      const RealField& prev = field.s.back();
      const Mask& prev_invalid = field.invalid.back();
      const std::size_t n = polar.phi.size();
      std::size_t i = 0;
      while (i < n) {
        if (polar.node_mask[i]) {
          ++i;
          continue;
        }
        std::size_t end = i;
        while (end < n && !polar.node_mask[end]) ++end;
        double shift = 0.0;
        for (std::size_t q = i; q < end; ++q) {
          if (!prev_invalid[q]) {
            shift = period * std::round((prev[q] - polar.phi[q]) / period);
            break;
          }
        }
        for (std::size_t q = i; q < end; ++q) polar.phi[q] += shift;
        i = end;
      }
    }
    field.s.push_back(std::move(polar.phi));
    field.invalid.push_back(std::move(polar.node_mask));
  }
  return field;
}

double HjResidual::max_abs() const {
  double r = 0.0;
  for (std::size_t k = 0; k < residual.size(); ++k) {
    for (std::size_t i = 0; i < residual[k].size(); ++i) {
      if (!masks[k][i]) r = std::max(r, std::abs(residual[k][i]));
    }
  }
  return r;
}

HjResidual hj_residual(const PrincipalFunctionField& field, std::span<const double> potential,
                       const PhysicalConstants& constants) {
  constants.validate();
  if (field.slices() < 3) throw std::invalid_argument("hj_residual: need at least 3 time slices");
  const std::size_t n = field.grid.size();
  if (potential.size() != n) throw std::invalid_argument("hj_residual: potential/grid size mismatch");
  const double dx = field.grid.dx();
  const double dt = field.dt;
  const double m = constants.mass;
  HjResidual out;
  for (std::size_t k = 1; k + 1 < field.slices(); ++k) {
    const auto& prev = field.s[k - 1];
    const auto& cur = field.s[k];
    const auto& next = field.s[k + 1];
    const auto& bad = field.invalid[k];
    RealField r(n, kNaN);
    Mask mask(n, 1);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (bad[i - 1] || bad[i] || bad[i + 1] || field.invalid[k - 1][i] || field.invalid[k + 1][i]) {
        continue;
      }
      const double grad = (cur[i + 1] - cur[i - 1]) / (2.0 * dx);
      const double dsdt = (next[i] - prev[i]) / (2.0 * dt);
      r[i] = grad * grad / (2.0 * m) + potential[i] + dsdt;
      mask[i] = 0;
    }
    out.times.push_back(field.time(k));
    out.residual.push_back(std::move(r));
    out.masks.push_back(std::move(mask));
  }
  return out;
}

}  // namespace qhj
