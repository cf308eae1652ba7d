#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "qhj/ensemble.hpp"
#include "qhj/evolution.hpp"
#include "qhj/potential.hpp"

using namespace qhj;
using cplx = std::complex<double>;

namespace {

struct Basis {
  Grid1D grid = build_grid(-12.0, 12.0, 2401);
  PhysicalConstants constants;
  RealField v = eval_potential(potential::Harmonic{1.0}, grid, constants);
  std::vector<EigenPair> states = solve_lowest_eigenpairs(assemble_hamiltonian(grid, v, constants), 8);
};

const Basis& basis() {
  static const Basis b;
  return b;
}

WeightingFunction gaussian_weights(const std::vector<EigenPair>& states, double centre, double sigma) {
  WeightingFunction c;
  double total = 0.0;
  for (const auto& s : states) {
    const double w = std::exp(-(s.energy - centre) * (s.energy - centre) / (2.0 * sigma * sigma));
    c.coefficients.emplace_back(w, 0.0);
    total += w * w;
  }
  for (auto& x : c.coefficients) x /= std::sqrt(total);
  return c;
}

EnsembleSpec spec_from(const std::vector<EnergyLevel>& levels, std::size_t n, std::uint64_t seed) {
  EnsembleSpec s;
  for (const auto& l : levels) {
    s.values.push_back(l.energy);
    s.probabilities.push_back(l.probability);
  }
  s.n_samples = n;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("single coefficient gives the basic solution", "[superposition]") {
  const auto& b = basis();
  WeightingFunction c;
  c.coefficients.assign(8, 0.0);
  c.coefficients[0] = 1.0;
  const WaveFunction psi = build_superposition(b.states, c);
  for (std::size_t i = 0; i < b.grid.size(); ++i) REQUIRE(psi.values[i] == cplx(b.states[0].function[i], 0.0));
}

TEST_CASE("two-state superposition energy", "[superposition]") {
  const auto& b = basis();
  WeightingFunction c;
  c.coefficients = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  const std::vector<EigenPair> two(b.states.begin(), b.states.begin() + 2);
  const WaveFunction psi = build_superposition(two, c);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  const double h = expectation(psi, observable::Energy{b.v}, b.constants);
  CHECK(std::abs(h - 0.5 * (two[0].energy + two[1].energy)) < 1e-8);
  CHECK(std::abs(h - 1.0) < 1e-4);
  const auto dist = energy_distribution(c, two);
  REQUIRE(dist.size() == 2);
  CHECK(dist[0].probability == Catch::Approx(0.5));
  CHECK(dist[1].probability == Catch::Approx(0.5));
  CHECK(dist[1].energy == two[1].energy);
}

TEST_CASE("superposition input validation", "[superposition]") {
  const auto& b = basis();
  WeightingFunction c;
  c.coefficients = {0.8, 0.5};
  const std::vector<EigenPair> two(b.states.begin(), b.states.begin() + 2);
  CHECK_THROWS_AS(build_superposition(two, c), std::invalid_argument);
  c.coefficients = {1.0};
  CHECK_THROWS_AS(build_superposition(two, c), std::invalid_argument);
  CHECK_THROWS_AS(energy_distribution(c, two), std::invalid_argument);
  c.coefficients = {0.6, 0.6};
  CHECK_THROWS_AS(energy_distribution(c, two), std::invalid_argument);
}

TEST_CASE("projection inverts construction", "[superposition][property]") {
  const auto& b = basis();
  const WeightingFunction c = gaussian_weights(b.states, 3.5, 1.5);
  CHECK(std::abs(c.total_weight() - 1.0) < 1e-14);
  const WaveFunction psi = build_superposition(b.states, c);
  const WeightingFunction back = project(psi, b.states);
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(std::abs(std::norm(back.coefficients[n]) - std::norm(c.coefficients[n])) < 1e-10);
    CHECK(std::abs(back.coefficients[n] - c.coefficients[n]) < 1e-10);
  }
  const WaveFunction again = build_superposition(b.states, back);
  for (std::size_t i = 0; i < b.grid.size(); ++i) REQUIRE(std::abs(again.values[i] - psi.values[i]) < 1e-10);

  const auto dist = energy_distribution(c, b.states);
  for (std::size_t n = 0; n < 8; ++n) CHECK(dist[n].probability == std::norm(c.coefficients[n]));
}

TEST_CASE("projection of a basis state", "[superposition]") {
  const auto& b = basis();
  const WeightingFunction c = project(from_real(b.grid, b.states[2].function), b.states);
  for (std::size_t n = 0; n < 8; ++n) CHECK(std::abs(c.coefficients[n] - cplx(n == 2 ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("projection reports leakage", "[superposition]") {
  const auto& b = basis();
  const WaveFunction far = gaussian_packet(b.grid, 6.0, 2.0, 0.3, b.constants);
  const WeightingFunction c = project(far, b.states);
  CHECK(c.total_weight() < 1.0);
  CHECK(c.leakage() > 0.1);
}

TEST_CASE("weights are stationary under evolution", "[superposition][property]") {
  const auto& b = basis();
  const WeightingFunction c = gaussian_weights(b.states, 3.5, 1.5);
  const WaveFunction psi0 = build_superposition(b.states, c);
  const EvolutionResult run = evolve(psi0, b.v, 1e-3, 1000, b.constants, 250);
  for (const auto& s : run.slices) {
    const WeightingFunction ct = project(s, b.states);
    for (std::size_t n = 0; n < 8; ++n) REQUIRE(std::abs(std::abs(ct.coefficients[n]) - std::abs(c.coefficients[n])) < 1e-8);
  }
}

TEST_CASE("ensemble spec validation", "[ensemble]") {
  EnsembleSpec s;
  s.values = {1.0, 2.0};
  s.probabilities = {0.5, 0.5};
  s.n_samples = 10;
  CHECK_NOTHROW(s.validate());
  s.probabilities = {0.5, 0.6};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.probabilities = {1.5, -0.5};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.probabilities = {1.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.probabilities = {0.5, 0.5};
  s.n_samples = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("delta distribution under free motion", "[ensemble]") {
  const Grid1D g = build_grid(-1.0, 9.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential free(potential::Free{}, g, c);
  EnsembleSpec s;
  s.values = {0.5};
  s.probabilities = {1.0};
  s.n_samples = 500;
  s.seed = 3;
  EnsembleRun run;
  run.dt = 0.01;
  run.t_final = 5.0;
  run.histogram_stride = 100;
  const EnsembleResult r = run_classical_ensemble(s, free, launch_from(free, 0.0, c), run, c);
  CHECK(r.rng_algorithm == "philox4x32-10");
  for (const auto& sample : r.samples) REQUIRE(sample.p0 == 1.0);
  REQUIRE(r.histograms.size() == 6);
  for (std::size_t k = 0; k < r.histograms.size(); ++k) {
    const auto& h = r.histograms[k];
    const std::size_t bin = g.nearest_index(h.time);
    CHECK(h.counts[bin] == 500);
    CHECK(h.underflow + h.overflow == 0);
  }
}

TEST_CASE("oscillator samples reach their turning points", "[ensemble]") {
  const auto& b = basis();
  const ClassicalPotential ho(potential::Harmonic{1.0}, b.grid, b.constants);
  const auto dist = energy_distribution(gaussian_weights(b.states, 3.5, 1.5), b.states);
  EnsembleRun run;
  run.dt = 1e-3;
  run.t_final = 2.0 * std::numbers::pi;
  const EnsembleResult r = run_classical_ensemble(spec_from(dist, 200, 11), ho, launch_from(ho, 0.0, b.constants), run, b.constants);
  for (const auto& sample : r.samples) {
    const double turning = std::sqrt(2.0 * sample.energy);
    REQUIRE(std::abs(sample.x_max - turning) < 1e-3);
    REQUIRE(std::abs(-sample.x_min - turning) < 1e-3);
    REQUIRE(sample.energy_drift < 1e-6);
  }
}

TEST_CASE("release at offset gives potential energy", "[ensemble]") {
  const Grid1D g = build_grid(-5.0, 5.0, 101);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  EnsembleSpec s;
  s.variable = EnsembleSpec::Variable::Offset;
  s.values = {1.0, 2.0};
  s.probabilities = {0.25, 0.75};
  s.n_samples = 100;
  EnsembleRun run;
  run.dt = 1e-3;
  run.t_final = 0.1;
  const EnsembleResult r = run_classical_ensemble(s, ho, release_at_offset(), run, c);
  for (const auto& sample : r.samples) {
    REQUIRE(sample.energy == 0.5 * s.values[sample.drawn_index] * s.values[sample.drawn_index]);
  }
}

TEST_CASE("ensemble is deterministic and thread independent", "[ensemble][parallel][property]") {
  const Grid1D g = build_grid(-6.0, 6.0, 121);
  const PhysicalConstants c;
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  EnsembleSpec s;
  s.values = {0.5, 1.5, 2.5};
  s.probabilities = {0.2, 0.3, 0.5};
  s.n_samples = 3000;
  s.seed = 2024;
  EnsembleRun run;
  run.dt = 1e-2;
  run.t_final = 3.0;
  run.histogram_stride = 30;
  const auto launch = launch_from(ho, 0.0, c);
  const EnsembleResult a = run_classical_ensemble(s, ho, launch, run, c, Execution::Serial);
  const EnsembleResult b = run_classical_ensemble(s, ho, launch, run, c, Execution::Serial);
  const EnsembleResult p = run_classical_ensemble(s, ho, launch, run, c, Execution::Parallel);
  for (const EnsembleResult* other : {&b, &p}) {
    REQUIRE(other->histograms.size() == a.histograms.size());
    for (std::size_t k = 0; k < a.histograms.size(); ++k) {
      REQUIRE(other->histograms[k].counts == a.histograms[k].counts);
      REQUIRE(other->histograms[k].underflow == a.histograms[k].underflow);
      REQUIRE(other->histograms[k].overflow == a.histograms[k].overflow);
    }
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      REQUIRE(other->samples[i].energy == a.samples[i].energy);
      REQUIRE(other->samples[i].x_max == a.samples[i].x_max);
    }
  }
  std::uint64_t total = 0;
  for (auto n : a.histograms.back().counts) total += n;
  CHECK(total + a.histograms.back().underflow + a.histograms.back().overflow == 3000);
  s.seed = 2025;
  const EnsembleResult other_seed = run_classical_ensemble(s, ho, launch, run, c);
  CHECK(other_seed.energies() != a.energies());
}

TEST_CASE("samples escaping a tabulated potential fail", "[ensemble]") {
  const Grid1D g = build_grid(-1.0, 1.0, 21);
  const PhysicalConstants c;
  const ClassicalPotential tab(potential::Tabulated{RealField(21, 0.0)}, g, c);
  EnsembleSpec s;
  s.values = {2.0};
  s.probabilities = {1.0};
  s.n_samples = 4;
  EnsembleRun run;
  run.dt = 0.01;
  run.t_final = 2.0;
  CHECK_THROWS_AS(run_classical_ensemble(s, tab, launch_from(tab, 0.0, c), run, c), DomainError);
  CHECK_THROWS_AS(run_classical_ensemble(s, tab, launch_from(tab, 0.0, c), run, c, Execution::Parallel),
                  DomainError);
}

TEST_CASE("total variation distance", "[ensemble]") {
  const std::vector<EnergyLevel> q{{0.5, 0.25}, {1.5, 0.25}, {2.5, 0.5}};
  CHECK(compare_energy_statistics(q, std::vector<double>{0.5, 1.5, 2.5, 2.5}).total_variation == 0.0);
  const auto cmp = compare_energy_statistics(q, std::vector<double>{0.4, 0.6, 1.9, 2.2});
  // bins: 0.5, 0.5, 1.5, 2.5 -> (0.5, 0.25, 0.25)
  CHECK(cmp.total_variation == Catch::Approx(0.25));
  CHECK(cmp.rows[0].count == 2);
  CHECK_THROWS_AS(compare_energy_statistics(q, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("ensemble energy statistics match the quantum distribution", "[ensemble]") {
  const auto& b = basis();
  const ClassicalPotential ho(potential::Harmonic{1.0}, b.grid, b.constants);
  const auto dist = energy_distribution(gaussian_weights(b.states, 3.5, 1.5), b.states);
  EnsembleRun run;
  run.dt = 1e-2;
  run.t_final = 0.1;
  run.histogram_stride = 10;
  const auto launch = launch_from(ho, 0.0, b.constants);

  const auto matched = run_classical_ensemble(spec_from(dist, 100000, 1), ho, launch, run, b.constants);
  CHECK(compare_energy_statistics(dist, matched.energies()).total_variation < 0.01);

  std::vector<EnergyLevel> uniform = dist;
  for (auto& l : uniform) l.probability = 1.0 / 8.0;
  const auto mismatched = run_classical_ensemble(spec_from(uniform, 100000, 1), ho, launch, run, b.constants);
  CHECK(compare_energy_statistics(dist, mismatched.energies()).total_variation > 0.1);
}

TEST_CASE("TV distance shrinks with the sample count", "[ensemble][property]") {
  const auto& b = basis();
  const ClassicalPotential ho(potential::Harmonic{1.0}, b.grid, b.constants);
  const auto dist = energy_distribution(gaussian_weights(b.states, 3.5, 1.5), b.states);
  EnsembleRun run;
  run.dt = 1e-2;
  run.t_final = 0.02;
  run.histogram_stride = 1;
  const auto launch = launch_from(ho, 0.0, b.constants);
  double prev = 1.0;
  for (std::size_t n : {1000u, 10000u, 100000u}) {
    double mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = run_classical_ensemble(spec_from(dist, n, seed), ho, launch, run, b.constants);
      mean += compare_energy_statistics(dist, r.energies()).total_variation / 5.0;
    }
    CHECK(mean < prev);
    prev = mean;
  }
}
