#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qhj/hamilton_jacobi.hpp"
#include "qhj/parallel.hpp"
#include "qhj/spectral.hpp"
#include "qhj/wavefunction.hpp"

namespace qhj {

/// Complex weights c_n over an eigenbasis, entry n belonging to basis[n].
struct WeightingFunction {
  std::vector<std::complex<double>> coefficients;

  double total_weight() const;  // sum |c_n|^2
  double leakage() const { return 1.0 - total_weight(); }
};

/// c_n proportional to exp(-(E_n - centre)^2 / (2 sigma^2)), normalised.
WeightingFunction gaussian_weights(std::span<const EigenPair> basis, double centre, double sigma);

/// c_n = 1 / sqrt(N).
WeightingFunction equal_weights(std::size_t n);

/// psi0 = sum_n c_n psi_n. Throws unless sum |c_n|^2 = 1 within 1e-12 and the
/// coefficient count matches the basis.
WaveFunction build_superposition(std::span<const EigenPair> basis, const WeightingFunction& c);

/// c_n = <psi_n, psi> with the trapezoidal inner product.
WeightingFunction project(const WaveFunction& psi, std::span<const EigenPair> basis);

struct EnergyLevel {
  double energy = 0.0;
  double probability = 0.0;
};

/// (E_n, |c_n|^2). Throws if the probabilities do not sum to 1 within 1e-12.
std::vector<EnergyLevel> energy_distribution(const WeightingFunction& c,
                                             std::span<const EigenPair> basis);

/// Discrete distribution of the drawn quantity for the classical ensemble.
/// In `Energy` mode the values are total energies; in `Offset` mode they are
/// release positions and the energy follows from V at that point.
struct EnsembleSpec {
  enum class Variable { Energy, Offset };
  Variable variable = Variable::Energy;
  std::vector<double> values;
  std::vector<double> probabilities;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct InitialCondition {
  double x = 0.0;
  double p = 0.0;
};

/// Maps a drawn value to the phase-space start of one sample.
using LaunchRule = std::function<InitialCondition(double value)>;

/// Starts at `x_start` moving right with p = sqrt(2m (E - V(x_start))).
LaunchRule launch_from(const ClassicalPotential& potential, double x_start,
                       const PhysicalConstants& constants);

/// Releases the particle at rest at the drawn offset.
LaunchRule release_at_offset();

struct PositionHistogram {
  double time = 0.0;
  std::vector<std::uint64_t> counts;  // one bin per grid node, width dx
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
};

struct SampleSummary {
  std::size_t drawn_index = 0;
  double x0 = 0.0;
  double p0 = 0.0;
  double energy = 0.0;       // H at launch
  double energy_drift = 0.0; // max |H(t) - H(0)| / max(|H(0)|, tiny)
  double x_min = 0.0;
  double x_max = 0.0;
};

struct EnsembleResult {
  std::string rng_algorithm;
  std::vector<PositionHistogram> histograms;
  std::vector<SampleSummary> samples;

  std::vector<double> energies() const;
};

struct EnsembleRun {
  double dt = 1e-3;
  double t_final = 1.0;
  std::size_t histogram_stride = 100;
};

/// Draws n_samples initial conditions from the spec with a Philox stream per
/// sample, integrates each with velocity Verlet and accumulates per-slice
/// position histograms on the grid bins. Integer counts make the reduction
/// order-independent, so Serial and Parallel give identical results.
EnsembleResult run_classical_ensemble(const EnsembleSpec& spec, const ClassicalPotential& potential,
                                      const LaunchRule& launch, const EnsembleRun& run,
                                      const PhysicalConstants& constants,
                                      Execution exec = Execution::Serial);

struct EnergyComparisonRow {
  double energy = 0.0;
  double quantum = 0.0;
  double classical = 0.0;
  std::uint64_t count = 0;
};

struct EnergyComparison {
  double total_variation = 0.0;
  std::vector<EnergyComparisonRow> rows;
};

/// TV distance 1/2 sum_n |p_q(n) - p_c(n)| after assigning each classical
/// energy to the nearest quantum level. Throws on an empty ensemble.
EnergyComparison compare_energy_statistics(std::span<const EnergyLevel> quantum,
                                           std::span<const double> classical_energies);

}  // namespace qhj
