#include "qhj/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "qhj/philox.hpp"

namespace qhj {

double WeightingFunction::total_weight() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return s;
}

WeightingFunction gaussian_weights(std::span<const EigenPair> basis, double centre, double sigma) {
  if (basis.empty() || !(sigma > 0.0)) throw std::invalid_argument("gaussian_weights: empty basis or sigma <= 0");
  WeightingFunction c;
  double total = 0.0;
  for (const auto& s : basis) {
    const double a = std::exp(-(s.energy - centre) * (s.energy - centre) / (2.0 * sigma * sigma));
    c.coefficients.emplace_back(a, 0.0);
    total += a * a;
  }
  if (!(total > 0.0)) throw std::invalid_argument("gaussian_weights: all weights underflow");
  for (auto& z : c.coefficients) z /= std::sqrt(total);
  return c;
}

WeightingFunction equal_weights(std::size_t n) {
  if (n == 0) throw std::invalid_argument("equal_weights: n must be positive");
  WeightingFunction c;
  c.coefficients.assign(n, std::complex<double>(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  return c;
}

WaveFunction build_superposition(std::span<const EigenPair> basis, const WeightingFunction& c) {
  if (basis.empty()) throw std::invalid_argument("build_superposition: empty basis");
  if (c.coefficients.size() != basis.size()) {
    std::ostringstream msg;
    msg << "build_superposition: " << c.coefficients.size() << " coefficients for a basis of "
        << basis.size() << " states";
    throw std::invalid_argument(msg.str());
  }
  const double w = c.total_weight();
  if (std::abs(w - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "build_superposition: sum |c_n|^2 = " << w << " is not 1 within 1e-12";
    throw std::invalid_argument(msg.str());
  }
  const Grid1D grid = basis.front().grid;
  ComplexField psi(grid.size(), 0.0);
  for (std::size_t n = 0; n < basis.size(); ++n) {
    if (!(basis[n].grid == grid)) throw std::invalid_argument("build_superposition: mixed grids");
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += c.coefficients[n] * basis[n].function[i];
  }
  return WaveFunction(grid, std::move(psi), 0.0);
}

WeightingFunction project(const WaveFunction& psi, std::span<const EigenPair> basis) {
  WeightingFunction c;
  c.coefficients.reserve(basis.size());
  for (const auto& b : basis) {
    if (!(b.grid == psi.grid)) throw std::invalid_argument("project: basis and state grids differ");
    const ComplexField phi(b.function.begin(), b.function.end());
    c.coefficients.push_back(inner_product(psi.grid, phi, psi.values));
  }
  return c;
}

std::vector<EnergyLevel> energy_distribution(const WeightingFunction& c,
                                             std::span<const EigenPair> basis) {
  if (c.coefficients.size() != basis.size()) {
    throw std::invalid_argument("energy_distribution: coefficient/basis size mismatch");
  }
  std::vector<EnergyLevel> out;
  out.reserve(basis.size());
  double total = 0.0;
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const double p = std::norm(c.coefficients[n]);
    out.push_back({basis[n].energy, p});
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "energy_distribution: probabilities sum to " << total
        << " (state leaks out of the basis)";
    throw std::invalid_argument(msg.str());
  }
  return out;
}

void EnsembleSpec::validate() const {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("ensemble: values and probabilities must be non-empty and equal length");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("ensemble: probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ensemble: probabilities sum to " << total << ", expected 1 within 1e-12";
    throw std::invalid_argument(msg.str());
  }
  if (n_samples == 0) throw std::invalid_argument("ensemble: n_samples must be positive");
}

LaunchRule launch_from(const ClassicalPotential& potential, double x_start,
                       const PhysicalConstants& constants) {
  const double v0 = potential.value(x_start);
  const double m = constants.mass;
  return [v0, m, x_start](double energy) {
    if (energy < v0) {
      std::ostringstream msg;
      msg << "launch: energy " << energy << " is below V(x_start) = " << v0;
      throw std::invalid_argument(msg.str());
    }
    return InitialCondition{x_start, std::sqrt(2.0 * m * (energy - v0))};
  };
}

LaunchRule release_at_offset() {
  return [](double offset) { return InitialCondition{offset, 0.0}; };
}

std::vector<double> EnsembleResult::energies() const {
  std::vector<double> e;
  e.reserve(samples.size());
  for (const auto& s : samples) e.push_back(s.energy);
  return e;
}

EnsembleResult run_classical_ensemble(const EnsembleSpec& spec, const ClassicalPotential& potential,
                                      const LaunchRule& launch, const EnsembleRun& run,
                                      const PhysicalConstants& constants, Execution exec) {
  spec.validate();
  constants.validate();
  if (!(run.dt > 0.0) || !(run.t_final >= 0.0) || run.histogram_stride == 0) {
    throw std::invalid_argument("ensemble: need dt > 0, t_final >= 0 and histogram_stride >= 1");
  }
  const Grid1D& grid = potential.grid();
  const std::size_t n_bins = grid.size();
  const auto n_steps = static_cast<std::size_t>(std::llround(run.t_final / run.dt));
  const std::size_t n_slices = n_steps / run.histogram_stride + 1;
  const double m = constants.mass;

  std::vector<double> cdf(spec.probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += spec.probabilities[i]);

  EnsembleResult result;
  result.rng_algorithm = std::string(Philox4x32::algorithm);
  result.samples.resize(spec.n_samples);
  result.histograms.resize(n_slices);
  for (std::size_t k = 0; k < n_slices; ++k) {
    result.histograms[k].time = run.dt * static_cast<double>(k * run.histogram_stride);
    result.histograms[k].counts.assign(n_bins, 0);
  }

  struct LocalCounts {
    std::vector<std::uint64_t> bins;   // n_slices * n_bins
    std::vector<std::uint64_t> under;  // n_slices
    std::vector<std::uint64_t> over;
  };
  auto make_local = [&] {
    return LocalCounts{std::vector<std::uint64_t>(n_slices * n_bins, 0),
                       std::vector<std::uint64_t>(n_slices, 0), std::vector<std::uint64_t>(n_slices, 0)};
  };
  auto deposit = [&](LocalCounts& local, std::size_t slice, double x) {
    const double s = (x - grid.x_min()) / grid.dx() + 0.5;
    if (s < 0.0) {
      ++local.under[slice];
    } else if (s >= static_cast<double>(n_bins)) {
      ++local.over[slice];
    } else {
      ++local.bins[slice * n_bins + static_cast<std::size_t>(s)];
    }
  };
  auto simulate = [&](std::size_t s, LocalCounts& local) {
    const double u = Philox4x32::uniforms(spec.seed, 0, s)[0];
    std::size_t idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    idx = std::min(idx, cdf.size() - 1);
    const double drawn = spec.values[idx];
    const InitialCondition ic = launch(drawn);

    double x = ic.x;
    double p = ic.p;
    double v_here = potential.value(x);
    double force = -potential.gradient(x);
    const double h0 = p * p / (2.0 * m) + v_here;
    SampleSummary summary{idx, ic.x, ic.p, h0, 0.0, x, x};
    double drift = 0.0;
    deposit(local, 0, x);
    for (std::size_t k = 1; k <= n_steps; ++k) {
      verlet_step(potential, m, run.dt, x, p, force, v_here);
      drift = std::max(drift, std::abs(p * p / (2.0 * m) + v_here - h0));
      summary.x_min = std::min(summary.x_min, x);
      summary.x_max = std::max(summary.x_max, x);
      if (k % run.histogram_stride == 0) deposit(local, k / run.histogram_stride, x);
    }
    summary.energy_drift = drift / std::max(std::abs(h0), std::numeric_limits<double>::min());
    result.samples[s] = summary;
  };
  auto merge = [&](const LocalCounts& local) {
    for (std::size_t k = 0; k < n_slices; ++k) {
      auto& h = result.histograms[k];
      for (std::size_t b = 0; b < n_bins; ++b) h.counts[b] += local.bins[k * n_bins + b];
      h.underflow += local.under[k];
      h.overflow += local.over[k];
    }
  };

  if (exec == Execution::Serial) {
    LocalCounts local = make_local();
    for (std::size_t s = 0; s < spec.n_samples; ++s) simulate(s, local);
    merge(local);
    return result;
  }

  std::exception_ptr error;
  std::mutex mutex;
  const auto count = static_cast<std::ptrdiff_t>(spec.n_samples);
#pragma omp parallel
  {
    LocalCounts local = make_local();
#pragma omp for schedule(static)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
      try {
        simulate(static_cast<std::size_t>(s), local);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
      }
    }
    std::lock_guard lock(mutex);
    merge(local);
  }
  if (error) std::rethrow_exception(error);
  return result;
}

EnergyComparison compare_energy_statistics(std::span<const EnergyLevel> quantum,
                                           std::span<const double> classical_energies) {
  if (classical_energies.empty()) throw std::invalid_argument("compare_energy_statistics: empty ensemble");
  if (quantum.empty()) throw std::invalid_argument("compare_energy_statistics: empty quantum distribution");
  EnergyComparison out;
  out.rows.resize(quantum.size());
  for (std::size_t n = 0; n < quantum.size(); ++n) {
    out.rows[n].energy = quantum[n].energy;
    out.rows[n].quantum = quantum[n].probability;
  }
  for (double e : classical_energies) {
    std::size_t best = 0;
    double best_d = std::abs(e - quantum[0].energy);
    for (std::size_t n = 1; n < quantum.size(); ++n) {
      const double d = std::abs(e - quantum[n].energy);
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
    ++out.rows[best].count;
  }
  const double total = static_cast<double>(classical_energies.size());
  double tv = 0.0;
  for (auto& row : out.rows) {
    row.classical = static_cast<double>(row.count) / total;
    tv += std::abs(row.quantum - row.classical);
  }
  out.total_variation = 0.5 * tv;
  return out;
}

}  // namespace qhj
