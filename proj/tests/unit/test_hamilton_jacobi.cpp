#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qhj/hamilton_jacobi.hpp"
#include "qhj/madelung.hpp"
#include "qhj/potential.hpp"
#include "qhj/spectral.hpp"

using namespace qhj;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<WaveFunction> rotating_series(const Grid1D& g, const ComplexField& psi, double energy, double dt,
                                          std::size_t n) {
  std::vector<WaveFunction> out;
  for (std::size_t s = 0; s < n; ++s) {
    const double t = dt * static_cast<double>(s);
    ComplexField v = psi;
    for (auto& z : v) z *= std::polar(1.0, -energy * t);
    out.emplace_back(g, std::move(v), t);
  }
  return out;
}

}  // namespace

TEST_CASE("free drift is exact", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-10.0, 10.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential free(potential::Free{}, g, c);
  const Trajectory tr = integrate_hamilton(free, 0.0, 1.0, 0.125, 40, c);
  REQUIRE(tr.samples.size() == 41);
  CHECK(tr.samples.back().x == 5.0);
  CHECK(tr.samples.back().p == 1.0);
  CHECK(tr.samples.back().t == 5.0);
  CHECK(tr.action.front() == 0.0);
  CHECK(tr.action.back() == Approx(2.5));
}

TEST_CASE("oscillator returns after one period", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-5.0, 5.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const std::size_t steps = 6283;
  const Trajectory tr = integrate_hamilton(ho, 1.0, 0.0, 2.0 * pi / steps, steps, c);
  CHECK(std::abs(tr.samples.back().x - 1.0) < 1e-4);
  CHECK(std::abs(tr.samples.back().p) < 1e-4);
  // S = integral of L from rest at x = 1 is -sin(2t)/4
  for (std::size_t k = 0; k < tr.samples.size(); k += 500) {
    CHECK(std::abs(tr.action[k] + std::sin(2.0 * tr.samples[k].t) / 4.0) < 1e-6);
  }
}

TEST_CASE("energy drift over 100 periods", "[hamilton_jacobi][property]") {
  const Grid1D g = build_grid(-5.0, 5.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const Trajectory tr = integrate_hamilton(ho, 1.0, 0.0, 1e-3, 628319, c);
  const double h0 = classical_energy(ho, 1.0, 0.0, c);
  double drift = 0.0;
  for (const auto& s : tr.samples) drift = std::max(drift, std::abs(classical_energy(ho, s.x, s.p, c) - h0));
  CHECK(drift < 1e-6 * h0);
}

TEST_CASE("Verlet is time reversible", "[hamilton_jacobi][property]") {
  const Grid1D g = build_grid(-6.0, 6.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential b(potential::SmoothBarrier{1.0, 0.8, 0.2}, g, c);
  const Trajectory fwd = integrate_hamilton(b, -3.0, 1.7, 1e-3, 3000, c);
  const auto& end = fwd.samples.back();
  const Trajectory back = integrate_hamilton(b, end.x, -end.p, 1e-3, 3000, c);
  CHECK(std::abs(back.samples.back().x + 3.0) < 1e-10);
  CHECK(std::abs(back.samples.back().p + 1.7) < 1e-10);
}

TEST_CASE("tabulated trajectory leaving the table fails", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(0.0, 1.0, 11);
  const PhysicalConstants c;
  const ClassicalPotential tab(potential::Tabulated{RealField(11, 0.0)}, g, c);
  CHECK_THROWS_AS(integrate_hamilton(tab, 0.5, 1.0, 0.1, 20, c), DomainError);
  CHECK_THROWS_AS(integrate_hamilton(tab, 0.5, 1.0, 0.0, 20, c), std::invalid_argument);
}

TEST_CASE("free principal function", "[hamilton_jacobi]") {
  const PhysicalConstants c;
  const FreePrincipalFunction s(0.5, c);
  CHECK(s(0.0, 0.0) == 0.0);
  CHECK(s.momentum() == 1.0);
  CHECK(s(2.0, 3.0) == Approx(2.0 - 1.5));
  CHECK_THROWS_AS(FreePrincipalFunction(0.0, c), std::invalid_argument);
  CHECK_THROWS_AS(FreePrincipalFunction(-1.0, c), std::invalid_argument);

  // momentum field is constant in x and t
  const Grid1D g = build_grid(-5.0, 5.0, 101);
  const PrincipalFunctionField f = sample_principal_function(g, 0.0, 0.1, 5, s);
  for (std::size_t k = 0; k < f.slices(); ++k) {
    for (std::size_t i = 1; i < g.size(); ++i) {
      REQUIRE((f.s[k][i] - f.s[k][i - 1]) / g.dx() == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("plane wave phase equals the principal function", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-20.0, 20.0, 4001);
  const PhysicalConstants c;
  const FreePrincipalFunction s(0.5, c);
  const PolarField p = decompose(plane_wave(g, 0.5, c), c);
  const double offset = p.phi[0] - s(g.x(0), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(std::abs(p.phi[i] - s(g.x(i), 0.0) - offset) < 1e-10);
}

TEST_CASE("characteristics reproduce the free principal function", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-10.0, 10.0, 201);
  const PhysicalConstants c;
  const FreePrincipalFunction s(0.5, c);
  RealField s0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s0[i] = s(g.x(i), 0.0);
  const ClassicalPotential free(potential::Free{}, g, c);
  const PrincipalFunctionField f = principal_function_from_characteristics(free, s0, 0.01, 300, c, 10);
  REQUIRE(f.slices() == 31);
  CHECK_FALSE(f.caustic_step.has_value());
  std::size_t checked = 0;
  for (std::size_t k = 0; k < f.slices(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const bool reachable = g.x(i) >= g.x_min() + f.time(k) - 1e-9;
      if (!reachable) REQUIRE(f.invalid[k][i]);
      if (f.invalid[k][i]) continue;
      REQUIRE(std::abs(f.s[k][i] - s(g.x(i), f.time(k))) < 1e-6);
      ++checked;
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("released oscillator family focuses at a quarter period", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-5.0, 5.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const double dt = 1e-3;
  const PrincipalFunctionField f =
      principal_function_from_characteristics(ho, RealField(g.size(), 0.0), dt, 2000, c, 100);
  REQUIRE(f.caustic_time().has_value());
  CHECK(std::abs(*f.caustic_time() - pi / 2.0) <= dt);
  // Verlet gives x_k = x0 cos(k theta) with cos(theta) = 1 - dt^2/2 exactly
  const double theta = std::acos(1.0 - dt * dt / 2.0);
  const auto expected = static_cast<std::size_t>(std::floor(pi / (2.0 * theta))) + 1;
  CHECK(*f.caustic_step == expected);
  REQUIRE(f.slices() == 21);
  for (std::size_t k = 0; k < f.slices(); ++k) {
    const bool after = f.time(k) >= *f.caustic_time();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (after) REQUIRE(f.invalid[k][i]);
    }
  }
  CHECK_FALSE(f.invalid[15][50]);
}

TEST_CASE("single step of the action", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-3.0, 3.0, 301);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const RealField v = eval_potential(potential::Harmonic{1.0}, g, c);
  RealField s0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s0[i] = 0.3 * g.x(i) * g.x(i) + g.x(i);
  const double dt = 1e-4;
  const PrincipalFunctionField f = principal_function_from_characteristics(ho, s0, dt, 1, c);
  REQUIRE(f.slices() == 2);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (f.invalid[1][i]) continue;
    const double p0 = 0.6 * g.x(i) + 1.0;
    // at fixed x: S(x, dt) = S0 - dt H(x, S0')
    REQUIRE(std::abs(f.s[1][i] - (s0[i] - dt * (p0 * p0 / 2.0 + v[i]))) < 1e-6);
    ++checked;
  }
  CHECK(checked > 290);
  // along the characteristic started at x0: S = S0(x0) + dt (p^2/2m - V)
  const Trajectory tr = integrate_hamilton(ho, 1.0, 1.6, dt, 1, c);
  CHECK(std::abs(tr.action[1] - dt * (1.6 * 1.6 / 2.0 - 0.5)) < 1e-6);
}

TEST_CASE("crossing on the first step is an error", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-1.0, 1.0, 21);
  const PhysicalConstants c;
  const ClassicalPotential free(potential::Free{}, g, c);
  RealField s0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s0[i] = -50.0 * g.x(i) * g.x(i);
  CHECK_THROWS_AS(principal_function_from_characteristics(free, s0, 0.1, 5, c), std::invalid_argument);
  CHECK_THROWS_AS(principal_function_from_characteristics(free, RealField(3, 0.0), 0.1, 5, c),
                  std::invalid_argument);
}

TEST_CASE("serial and parallel characteristics agree bitwise", "[hamilton_jacobi][parallel]") {
  const Grid1D g = build_grid(-4.0, 4.0, 401);
  const PhysicalConstants c;
  const ClassicalPotential b(potential::SmoothBarrier{0.5, 1.0, 0.0}, g, c);
  RealField s0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s0[i] = 1.2 * g.x(i);
  const auto a = principal_function_from_characteristics(b, s0, 1e-3, 500, c, 50, Execution::Serial);
  const auto p = principal_function_from_characteristics(b, s0, 1e-3, 500, c, 50, Execution::Parallel);
  REQUIRE(a.slices() == p.slices());
  for (std::size_t k = 0; k < a.slices(); ++k) {
    REQUIRE(a.invalid[k] == p.invalid[k]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!a.invalid[k][i]) REQUIRE(a.s[k][i] == p.s[k][i]);
    }
  }
}

TEST_CASE("HJ residual of the closed form vanishes", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-20.0, 20.0, 4001);
  const PhysicalConstants c;
  const FreePrincipalFunction s(0.5, c);
  const PrincipalFunctionField f = sample_principal_function(g, 0.0, 1e-2, 5, s);
  const HjResidual r = hj_residual(f, RealField(g.size(), 0.0), c);
  CHECK(r.times.size() == 3);
  CHECK(r.max_abs() < 1e-8);
  CHECK_THROWS_AS(hj_residual(sample_principal_function(g, 0.0, 1e-2, 2, s), RealField(g.size(), 0.0), c),
                  std::invalid_argument);
}

TEST_CASE("HJ residuals of phase and principal function coincide for free motion", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-20.0, 20.0, 4001);
  const PhysicalConstants c;
  const RealField v(g.size(), 0.0);
  const FreePrincipalFunction s(0.5, c);
  const double dt = 1e-2;
  const auto series = rotating_series(g, plane_wave(g, 0.5, c).values, 0.5, dt, 5);
  const HjResidual from_phase = hj_residual(phase_field(series, c), v, c);
  const HjResidual from_s = hj_residual(sample_principal_function(g, 0.0, dt, 5, s), v, c);
  for (std::size_t k = 0; k < from_s.times.size(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (from_s.masks[k][i] || from_phase.masks[k][i]) continue;
      REQUIRE(std::abs(from_phase.residual[k][i] - from_s.residual[k][i]) < 1e-10);
    }
  }
}

TEST_CASE("HJ residual on characteristics before focusing", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-5.0, 5.0, 501);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const RealField v = eval_potential(potential::Harmonic{1.0}, g, c);
  const PrincipalFunctionField f = principal_function_from_characteristics(ho, RealField(g.size(), 0.0), 1e-3, 1000, c);
  CHECK_FALSE(f.caustic_step.has_value());
  const HjResidual r = hj_residual(f, v, c);
  CHECK(r.max_abs() < 1e-3);
  // closed form S = -x^2 tan(t) / 2
  for (std::size_t i = 0; i < g.size(); i += 50) {
    if (!f.invalid.back()[i]) CHECK(std::abs(f.s.back()[i] + g.x(i) * g.x(i) * std::tan(1.0) / 2.0) < 1e-4);
  }
}

TEST_CASE("HJ residual of an eigenstate phase is the quantum potential gap", "[hamilton_jacobi]") {
  const Grid1D g = build_grid(-12.0, 12.0, 2401);
  const PhysicalConstants c;
  const RealField v = eval_potential(potential::Harmonic{1.0}, g, c);
  const auto states = solve_lowest_eigenpairs(assemble_hamiltonian(g, v, c), 3);
  for (const auto& st : states) {
    const ComplexField psi(st.function.begin(), st.function.end());
    const auto series = rotating_series(g, psi, st.energy, 1e-3, 3);
    const HjResidual r = hj_residual(phase_field(series, c), v, c);
    const QuantumPotentialField q = quantum_potential(decompose(series[1], c), c, v);
    double gap = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (r.masks[0][i] || q.mask[i]) continue;
      REQUIRE(std::abs(r.residual[0][i] - (v[i] - st.energy)) < 1e-6 * (1.0 + v[i]));
      REQUIRE(std::abs(r.residual[0][i] + q.v_q[i]) < 2e-3);
      gap = std::max(gap, std::abs(r.residual[0][i]));
    }
    CHECK(gap > 1.0);
  }
}
