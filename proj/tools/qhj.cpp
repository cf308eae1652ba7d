// qhj: command line front end. Every subcommand reads a config, writes its
// artifacts and a report.json into the output directory, and exits with
// 0 (all checks pass), 1 (a check failed) or 2 (usage or configuration error).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qhj/acceptance.hpp"
#include "qhj/config.hpp"
#include "qhj/csv.hpp"
#include "qhj/ensemble.hpp"
#include "qhj/evolution.hpp"
#include "qhj/hamilton_jacobi.hpp"
#include "qhj/madelung.hpp"
#include "qhj/report.hpp"
#include "qhj/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qhj;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

/// Errors that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig cfg;
  fs::path out;
  Grid1D grid;
  RealField v;

  explicit Context(RunConfig c) : cfg(std::move(c)), out(cfg.output_dir), grid(cfg.grid()) {
    v = eval_potential(cfg.potential, grid, cfg.constants);
  }

  fs::path file(const std::string& name) const { return out / name; }
};

json potential_json(const PotentialSpec& spec) {
  json j;
  j["kind"] = potential_kind_name(spec);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, potential::Harmonic>) {
          j["omega"] = p.omega;
        } else if constexpr (std::is_same_v<T, potential::SmoothBarrier>) {
          j["height"] = p.height;
          j["width"] = p.width;
          j["center"] = p.center;
        } else if constexpr (std::is_same_v<T, potential::Tabulated>) {
          j["points"] = p.values.size();
        }
      },
      spec);
  return j;
}

VerificationReport new_report(const Context& ctx, const std::string& scenario) {
  VerificationReport r;
  r.scenario = scenario;
  r.parameters["grid"] = {{"x_min", ctx.cfg.x_min}, {"x_max", ctx.cfg.x_max}, {"n_points", ctx.cfg.n_points}};
  r.parameters["constants"] = {{"hbar", ctx.cfg.constants.hbar}, {"mass", ctx.cfg.constants.mass}};
  r.parameters["potential"] = potential_json(ctx.cfg.potential);
  r.parameters["tolerance_scale"] = ctx.cfg.tolerances.scale();
  r.parameters["tolerance_overrides"] = ctx.cfg.tolerances.overrides();
  return r;
}

double max_abs_unmasked(std::span<const double> f, const Mask& mask) {
  double m = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mask[i]) continue;
    m = std::max(m, std::abs(f[i]));
    any = true;
  }
  return any ? m : std::numeric_limits<double>::quiet_NaN();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<EigenPair> basis_states(const Context& ctx, std::size_t k, bool hard_walls = false) {
  EigenSolveOptions opt;
  opt.warn_on_boundary_tail = !hard_walls && !std::holds_alternative<potential::InfiniteWell>(ctx.cfg.potential);
  return solve_lowest_eigenpairs(assemble_hamiltonian(ctx.grid, ctx.v, ctx.cfg.constants), k, opt);
}

WaveFunction read_state_on_grid(const fs::path& path, const Grid1D& grid) {
  WaveFunction psi = read_wavefunction_csv(path);
  if (psi.grid.size() != grid.size() || std::abs(psi.grid.x_min() - grid.x_min()) > 1e-9 * grid.dx() ||
      std::abs(psi.grid.x_max() - grid.x_max()) > 1e-9 * grid.dx()) {
    throw UsageError("'" + path.string() + "' does not lie on the configured grid");
  }
  return WaveFunction(grid, std::move(psi.values));
}

void normalise(WaveFunction& psi) {
  const double n = std::sqrt(norm_squared(psi.grid, psi.values));
  if (!(n > 0.0)) throw UsageError("initial state has zero norm");
  for (auto& z : psi.values) z /= n;
}

void write_complex_csv(const fs::path& path, const WaveFunction& psi) {
  const std::vector<std::string> header{"x", "re", "im"};
  CsvWriter w(path, header);
  for (std::size_t i = 0; i < psi.size(); ++i) w.row({psi.grid.x(i), psi.values[i].real(), psi.values[i].imag()});
}

// ---------------------------------------------------------------- eigen

VerificationReport cmd_eigen(const Context& ctx) {
  const std::size_t k = ctx.cfg.eigen.k;
  VerificationReport r = new_report(ctx, "eigen");
  r.parameters["k"] = k;
  const HamiltonianMatrix h = assemble_hamiltonian(ctx.grid, ctx.v, ctx.cfg.constants);
  const auto states = basis_states(ctx, k);

  json energies = json::array();
  for (const auto& s : states) energies.push_back(s.energy);
  write_json(ctx.file("eigenvalues.json"), energies);

  std::vector<std::string> header{"x"};
  for (std::size_t n = 0; n < k; ++n) header.push_back("psi_" + std::to_string(n));
  CsvWriter w(ctx.file("eigenfunctions.csv"), header);
  std::vector<double> row(k + 1);
  for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
    row[0] = ctx.grid.x(i);
    for (std::size_t n = 0; n < k; ++n) row[n + 1] = states[n].function[i];
    w.row(row);
  }

  double residual = 0.0, ortho = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    double peak = 0.0;
    for (double f : states[m].function) peak = std::max(peak, std::abs(f));
    residual = std::max(residual, eigen_residual(h, states[m]) / peak);
    for (std::size_t n = 0; n <= m; ++n) {
      ortho = std::max(ortho, std::abs(inner_product(ctx.grid, states[m].function, states[n].function) - (m == n)));
    }
  }
  const auto& tol = ctx.cfg.tolerances;
  r.add(make_check("eigen", 0, "eigen.residual", "H psi_n = E_n psi_n", residual, tol["eigen.residual"]));
  r.add(make_check("eigen", 0, "eigen.orthonormality", "<psi_m, psi_n> = delta_mn", ortho, tol["eigen.orthonormality"]));

  r.summary["energies"] = energies;
  if (const auto* ho = std::get_if<potential::Harmonic>(&ctx.cfg.potential)) {
    json err = json::array();
    for (std::size_t n = 0; n < k; ++n) {
      err.push_back(std::abs(states[n].energy - (static_cast<double>(n) + 0.5) * ctx.cfg.constants.hbar * ho->omega));
    }
    r.summary["level_error_vs_closed_form"] = err;
  }
  return r;
}

// ---------------------------------------------------------------- evolve

VerificationReport cmd_evolve(const Context& ctx) {
  const auto& e = ctx.cfg.evolve;
  const auto& c = ctx.cfg.constants;
  VerificationReport r = new_report(ctx, "evolve");
  r.parameters["initial"] = e.initial;
  r.parameters["dt"] = e.dt;
  r.parameters["steps"] = e.steps;
  r.parameters["stride"] = e.stride;

  std::optional<WaveFunction> psi0;
  if (e.initial == "gaussian") {
    psi0 = gaussian_packet(ctx.grid, e.center, e.momentum, e.width, c);
    r.parameters["center"] = e.center;
    r.parameters["momentum"] = e.momentum;
    r.parameters["width"] = e.width;
  } else if (e.initial == "eigenstate") {
    const auto states = basis_states(ctx, e.state + 1);
    psi0 = from_real(ctx.grid, states.back().function);
    r.parameters["state"] = e.state;
  } else {
    psi0 = read_state_on_grid(e.file, ctx.grid);
    r.parameters["file"] = e.file.filename().string();
  }
  psi0->values.front() = psi0->values.back() = 0.0;
  normalise(*psi0);

  const EvolutionResult run = evolve(*psi0, ctx.v, e.dt, e.steps, c, e.stride);
  const std::vector<std::string> header{"t", "norm", "x", "p", "H"};
  CsvWriter obs(ctx.file("observables.csv"), header);
  char name[64];
  for (std::size_t k = 0; k < run.slices.size(); ++k) {
    const auto& s = run.slices[k];
    obs.row({s.time, run.norm_history[k], expectation(s, observable::Position{}, c),
             expectation(s, observable::Momentum{}, c), expectation(s, observable::Energy{ctx.v}, c)});
    std::snprintf(name, sizeof name, "slice_%06zu.csv", k * e.stride);
    write_complex_csv(ctx.file(name), s);
  }

  double norm = 0.0, energy = 0.0;
  for (double n : run.norm_history) norm = std::max(norm, std::abs(n - run.norm_history.front()));
  const double e0 = run.energy_history.front();
  for (double x : run.energy_history) energy = std::max(energy, std::abs(x - e0) / std::max(std::abs(e0), 1e-300));
  const auto& tol = ctx.cfg.tolerances;
  r.add(make_check("evolve", 0, "evolution.norm_drift", "<psi(t), psi(t)> = <psi(0), psi(0)>", norm,
                   tol["evolution.norm_drift"]));
  r.add(make_check("evolve", 0, "evolution.energy_drift", "<H>(t) = <H>(0)", energy, tol["evolution.energy_drift"]));
  r.summary["slices"] = run.slices.size();
  r.summary["final_time"] = run.slices.back().time;
  return r;
}

// ---------------------------------------------------------------- madelung

VerificationReport cmd_madelung(const Context& ctx) {
  const auto& m = ctx.cfg.madelung;
  const auto& c = ctx.cfg.constants;
  const auto& tol = ctx.cfg.tolerances;
  VerificationReport r = new_report(ctx, "madelung");
  r.parameters["input"] = m.input;

  std::optional<WaveFunction> psi;
  std::optional<EigenPair> eig;
  std::optional<double> energy;
  if (m.input == "plane_wave") {
    psi = plane_wave(ctx.grid, m.energy, c);
    energy = m.energy;
  } else if (m.input == "eigenstate") {
    eig = basis_states(ctx, m.state + 1).back();
    psi = from_real(ctx.grid, eig->function);
    energy = eig->energy;
    r.parameters["state"] = m.state;
  } else if (m.input == "scattering") {
    psi = stationary_scattering_state(ctx.grid, ctx.v, m.energy, c);
    energy = m.energy;
  } else if (m.input == "gaussian") {
    psi = gaussian_packet(ctx.grid, m.center, m.momentum, m.width, c);
  } else {
    psi = read_state_on_grid(m.file, ctx.grid);
    r.parameters["file"] = m.file.filename().string();
  }
  if (energy) r.parameters["energy"] = *energy;

  const PolarField polar = decompose(*psi, c);
  const QuantumPotentialField q = quantum_potential(polar, c, ctx.v);
  {
    const std::vector<std::string> header{"x", "lambda", "phi", "v_q", "v_t", "masked"};
    CsvWriter w(ctx.file("madelung.csv"), header);
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
      w.row({ctx.grid.x(i), polar.lambda[i], polar.phi[i], q.v_q[i], q.v_t[i],
             static_cast<double>(q.mask[i] | polar.node_mask[i])});
    }
  }

  const double vq_max = max_abs_unmasked(q.v_q, q.mask);
  r.summary["max_abs_v_q"] = number_or_null(vq_max);
  const RealField cont = stationary_continuity_residual(polar);
  double cont_max = 0.0;
  for (double x : cont) {
    if (std::isfinite(x)) cont_max = std::max(cont_max, std::abs(x));
  }
  r.summary["stationary_continuity_residual"] = cont_max;

  json amp;
  try {
    const AmplitudeRelation rel = verify_1d_amplitude_relation(polar);
    amp["status"] = rel.status == AmplitudeRelation::Status::Measured ? "measured" : "vacuous";
    if (rel.status == AmplitudeRelation::Status::Measured) {
      amp["deviation"] = rel.deviation;
      amp["median_lambda2_phi_prime"] = rel.median;
      const RealField j = probability_current(*psi, c);
      double match = 0.0;
      for (std::size_t i = 1; i + 1 < j.size(); ++i) {
        match = std::max(match, std::abs(c.mass * j[i] - rel.median) / std::abs(rel.median));
      }
      amp["current_match"] = match;
      if (m.input == "scattering") {
        r.add(make_check("madelung", 0, "amplitude.deviation", "lambda^2 phi' = const", rel.deviation,
                         tol["amplitude.deviation"]));
        r.add(make_check("madelung", 0, "amplitude.current_match", "lambda^2 phi' = m j", match,
                         tol["amplitude.current_match"]));
      }
    }
  } catch (const std::invalid_argument& ex) {
    amp["status"] = "not applicable";
    amp["reason"] = ex.what();
  }
  r.summary["amplitude_relation"] = amp;

  if (energy) {
    const double mhj = verify_modified_hj(*psi, ctx.v, *energy, c);
    r.summary["modified_hj_residual"] = number_or_null(mhj);
    double vt_dev = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
      if (q.mask[i]) continue;
      vt_dev = std::max(vt_dev, std::abs(q.v_t[i] - *energy));
      any = true;
    }
    if (eig) {
      r.add(make_check("madelung", 0, "gap.effective_potential", "V_t = V + V_q = E",
                       any ? vt_dev : std::numeric_limits<double>::quiet_NaN(), tol["gap.effective_potential"]));
    }
  }
  if (const auto* ho = std::get_if<potential::Harmonic>(&ctx.cfg.potential); ho && eig) {
    const double id = verify_oscillator_identity(static_cast<int>(m.state), *eig, c, ho->omega);
    r.summary["oscillator_identity"] = id;
    r.add(make_check("madelung", 0, "oscillator.identity",
                     "lambda'' + (2m/hbar^2)[(n+1/2) hbar omega - m omega^2 x^2/2] lambda = 0", id,
                     tol["oscillator.identity"]));
  }
  if (m.expect_inertial || m.input == "plane_wave") {
    r.add(make_check("madelung", 0, "madelung.free_quantum_potential", "V_q = 0 for inertial motion", vq_max,
                     tol["madelung.free_quantum_potential"]));
  }
  return r;
}

// ---------------------------------------------------------------- hj

VerificationReport cmd_hj(const Context& ctx) {
  const auto& h = ctx.cfg.hj;
  const auto& c = ctx.cfg.constants;
  VerificationReport r = new_report(ctx, "hj");
  r.parameters["x0"] = h.x0;
  r.parameters["p0"] = h.p0;
  r.parameters["dt"] = h.dt;
  r.parameters["steps"] = h.steps;
  r.parameters["initial_action"] = h.initial_action;
  r.parameters["family_steps"] = h.family_steps;
  r.parameters["stride"] = h.stride;

  const ClassicalPotential pot(ctx.cfg.potential, ctx.grid, c);
  const Trajectory traj = integrate_hamilton(pot, h.x0, h.p0, h.dt, h.steps, c);
  {
    const std::vector<std::string> header{"t", "x", "p", "action"};
    CsvWriter w(ctx.file("trajectory.csv"), header);
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
      w.row({traj.samples[k].t, traj.samples[k].x, traj.samples[k].p, traj.action[k]});
    }
  }
  const double e0 = classical_energy(pot, h.x0, h.p0, c);
  double drift = 0.0;
  for (const auto& s : traj.samples) drift = std::max(drift, std::abs(classical_energy(pot, s.x, s.p, c) - e0));
  drift /= std::max(std::abs(e0), 1e-300);
  r.add(make_check("hj", 0, "hj.energy_drift", "H(x(t), p(t)) = H(x0, p0)", drift, ctx.cfg.tolerances["hj.energy_drift"]));

  RealField s0(ctx.grid.size(), 0.0);
  if (h.initial_action == "free") {
    r.parameters["energy"] = h.energy;
    const FreePrincipalFunction s(h.energy, c);
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) s0[i] = s(ctx.grid.x(i), 0.0);
  }
  const PrincipalFunctionField f =
      principal_function_from_characteristics(pot, s0, h.dt, h.family_steps, c, h.stride, Execution::Parallel);
  char name[64];
  for (std::size_t k = 0; k < f.slices(); ++k) {
    std::snprintf(name, sizeof name, "s_field_%06zu.csv", k * h.stride);
    const std::vector<std::string> header{"x", "t", "S", "invalid"};
    CsvWriter w(ctx.file(name), header);
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
      w.row({ctx.grid.x(i), f.time(k), f.s[k][i], static_cast<double>(f.invalid[k][i])});
    }
  }
  r.summary["slices"] = f.slices();
  r.summary["caustic_time"] = f.caustic_time() ? json(*f.caustic_time()) : json(nullptr);
  r.summary["final_action"] = traj.action.back();
  return r;
}

// ---------------------------------------------------------------- hj-compare

VerificationReport cmd_hj_compare(const Context& ctx) {
  const auto& h = ctx.cfg.hj_compare;
  const auto& c = ctx.cfg.constants;
  const auto& tol = ctx.cfg.tolerances;
  if (h.slices < 3) throw UsageError("hj_compare.slices must be at least 3");
  VerificationReport r = new_report(ctx, "hj-compare");
  r.parameters["scenario"] = h.scenario;
  r.parameters["dt"] = h.dt;
  r.parameters["slices"] = h.slices;

  std::vector<WaveFunction> series;
  if (h.scenario == "free") {
    if (!std::holds_alternative<potential::Free>(ctx.cfg.potential)) {
      throw UsageError("hj_compare.scenario = free needs potential.kind = free");
    }
    r.parameters["energy"] = h.energy;
    const FreePrincipalFunction s(h.energy, c);
    const double k = s.momentum() / c.hbar;
    for (std::size_t n = 0; n < h.slices; ++n) {
      const double t = h.dt * static_cast<double>(n);
      ComplexField v(ctx.grid.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::polar(1.0, (k * c.hbar * ctx.grid.x(i) - h.energy * t) / c.hbar);
      series.emplace_back(ctx.grid, std::move(v), t);
    }
    const PrincipalFunctionField phi = phase_field(series, c);
    const PrincipalFunctionField sf =
        sample_principal_function(ctx.grid, 0.0, h.dt, h.slices, [&](double x, double t) { return s(x, t); });
    double offset = std::numeric_limits<double>::quiet_NaN(), worst = 0.0;
    for (std::size_t n = 0; n < phi.slices(); ++n) {
      for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
        if (phi.invalid[n][i]) continue;
        const double d = phi.s[n][i] - sf.s[n][i];
        if (std::isnan(offset)) offset = d;
        worst = std::max(worst, std::abs(d - offset));
      }
    }
    r.add(make_check("hj-compare", 0, "inertial.phase_vs_action", "phase of free psi = S(x,t), up to a constant", worst,
                     tol["inertial.phase_vs_action"]));
    const HjResidual rp = hj_residual(phi, ctx.v, c);
    const HjResidual rs = hj_residual(sf, ctx.v, c);
    r.summary["phase_offset"] = number_or_null(offset);
    r.summary["hj_residual_phase"] = rp.max_abs();
    r.summary["hj_residual_principal_function"] = rs.max_abs();
  } else {
    r.parameters["state"] = h.state;
    const EigenPair st = basis_states(ctx, h.state + 1).back();
    for (std::size_t n = 0; n < h.slices; ++n) {
      const double t = h.dt * static_cast<double>(n);
      ComplexField v(ctx.grid.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = st.function[i] * std::polar(1.0, -st.energy * t / c.hbar);
      series.emplace_back(ctx.grid, std::move(v), t);
    }
    const HjResidual res = hj_residual(phase_field(series, c), ctx.v, c);
    double gap = 0.0, largest = 0.0;
    bool any = false;
    for (std::size_t s = 0; s < res.times.size(); ++s) {
      const QuantumPotentialField q = quantum_potential(decompose(series[s + 1], c), c);
      for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
        if (res.masks[s][i] || q.mask[i]) continue;
        gap = std::max(gap, std::abs(res.residual[s][i] + q.v_q[i]));
        largest = std::max(largest, std::abs(res.residual[s][i]));
        any = true;
      }
    }
    r.add(make_check("hj-compare", 0, "gap.hj_vs_quantum_potential", "(phi')^2/2m + V + d_t phi = -V_q",
                     any ? gap : std::numeric_limits<double>::quiet_NaN(), tol["gap.hj_vs_quantum_potential"]));
    r.summary["energy"] = st.energy;
    r.summary["max_abs_hj_residual_phase"] = largest;
  }
  return r;
}

// ---------------------------------------------------------------- superpose

WeightingFunction configured_weights(const Context& ctx, const std::vector<EigenPair>& states) {
  const auto& s = ctx.cfg.superpose;
  if (s.weights == "gaussian") return gaussian_weights(states, s.center, s.sigma);
  if (s.weights == "equal") return equal_weights(states.size());
  WeightingFunction w;
  w.coefficients.assign(states.size(), 0.0);
  std::vector<CsvRow> rows;
  try {
    rows = read_numeric_csv(s.file, 3);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  for (const auto& row : rows) {
    const double n = row.values[0];
    if (n < 0 || n != std::floor(n) || n >= static_cast<double>(states.size())) {
      throw UsageError(s.file.string() + ":" + std::to_string(row.line) + ": index outside 0.." +
                       std::to_string(states.size() - 1));
    }
    w.coefficients[static_cast<std::size_t>(n)] = {row.values[1], row.values[2]};
  }
  const double total = w.total_weight();
  if (!(total > 0.0)) throw UsageError(s.file.string() + ": all coefficients are zero");
  for (auto& z : w.coefficients) z /= std::sqrt(total);
  return w;
}

VerificationReport cmd_superpose(const Context& ctx) {
  const auto& s = ctx.cfg.superpose;
  const auto& tol = ctx.cfg.tolerances;
  VerificationReport r = new_report(ctx, "superpose");
  r.parameters["k"] = s.k;
  r.parameters["weights"] = s.weights;
  if (s.weights == "gaussian") {
    r.parameters["center"] = s.center;
    r.parameters["sigma"] = s.sigma;
  }
  const auto states = basis_states(ctx, s.k);
  const WeightingFunction w = configured_weights(ctx, states);
  const WaveFunction psi0 = build_superposition(states, w);
  write_complex_csv(ctx.file("psi0.csv"), psi0);

  json levels = json::array();
  for (std::size_t n = 0; n < states.size(); ++n) {
    levels.push_back({{"n", n},
                      {"energy", states[n].energy},
                      {"re", w.coefficients[n].real()},
                      {"im", w.coefficients[n].imag()},
                      {"probability", std::norm(w.coefficients[n])}});
  }
  double mean = 0.0;
  for (const auto& l : energy_distribution(w, states)) mean += l.energy * l.probability;
  write_json(ctx.file("energy_distribution.json"), json{{"levels", levels}, {"mean_energy", mean}});

  const WeightingFunction back = project(psi0, states);
  double round_trip = 0.0;
  for (std::size_t n = 0; n < states.size(); ++n) {
    round_trip = std::max(round_trip, std::abs(back.coefficients[n] - w.coefficients[n]));
  }
  r.add(make_check("superpose", 0, "superposition.normalisation", "sum |c_n|^2 = <psi_0, psi_0> = 1",
                   std::abs(psi0.norm() - 1.0), tol["superposition.normalisation"]));
  r.add(make_check("superpose", 0, "superposition.round_trip", "<psi_n, sum_m c_m psi_m> = c_n", round_trip,
                   tol["superposition.round_trip"]));
  r.summary["mean_energy"] = mean;
  r.summary["energy_expectation"] =
      energy_expectation(assemble_hamiltonian(ctx.grid, ctx.v, ctx.cfg.constants), psi0.values);
  return r;
}

// ---------------------------------------------------------------- ensemble

VerificationReport cmd_ensemble(const Context& ctx) {
  const auto& e = ctx.cfg.ensemble;
  const auto& c = ctx.cfg.constants;
  const auto& tol = ctx.cfg.tolerances;
  VerificationReport r = new_report(ctx, "ensemble");
  r.parameters["distribution"] = e.distribution;
  r.parameters["variable"] = e.variable;
  r.parameters["n_samples"] = e.n_samples;
  r.parameters["seed"] = ctx.cfg.seed;
  r.parameters["x_start"] = e.x_start;
  r.parameters["dt"] = e.dt;
  r.parameters["t_final"] = e.t_final;
  r.parameters["histogram_stride"] = e.histogram_stride;

  // The quantum reference is the configured superposition.
  const auto states = basis_states(ctx, ctx.cfg.superpose.k);
  const auto quantum = energy_distribution(configured_weights(ctx, states), states);

  EnsembleSpec spec;
  spec.n_samples = e.n_samples;
  spec.seed = ctx.cfg.seed;
  if (e.distribution == "table") {
    spec.variable = e.variable == "offset" ? EnsembleSpec::Variable::Offset : EnsembleSpec::Variable::Energy;
    spec.values = e.values;
    spec.probabilities = e.probabilities;
  } else {
    for (const auto& l : quantum) {
      spec.values.push_back(l.energy);
      spec.probabilities.push_back(e.distribution == "uniform" ? 1.0 / static_cast<double>(quantum.size())
                                                                : l.probability);
    }
  }
  const ClassicalPotential pot(ctx.cfg.potential, ctx.grid, c);
  const LaunchRule launch =
      spec.variable == EnsembleSpec::Variable::Offset ? release_at_offset() : launch_from(pot, e.x_start, c);
  EnsembleRun run;
  run.dt = e.dt;
  run.t_final = e.t_final;
  run.histogram_stride = e.histogram_stride;
  const EnsembleResult res = run_classical_ensemble(spec, pot, launch, run, c, Execution::Parallel);

  char name[64];
  json hist_summary = json::array();
  for (const auto& h : res.histograms) {
    std::snprintf(name, sizeof name, "histogram_t%.6f.csv", h.time);
    const std::vector<std::string> header{"x", "count"};
    CsvWriter w(ctx.file(name), header);
    for (std::size_t i = 0; i < h.counts.size(); ++i) w.row({ctx.grid.x(i), static_cast<double>(h.counts[i])});
    hist_summary.push_back({{"time", h.time}, {"file", name}, {"underflow", h.underflow}, {"overflow", h.overflow}});
  }
  {
    const std::vector<std::string> header{"sample", "drawn_index", "x0", "p0", "energy", "energy_drift"};
    CsvWriter w(ctx.file("sample_energies.csv"), header);
    for (std::size_t k = 0; k < res.samples.size(); ++k) {
      const auto& s = res.samples[k];
      w.row({static_cast<double>(k), static_cast<double>(s.drawn_index), s.x0, s.p0, s.energy, s.energy_drift});
    }
  }
  double drift = 0.0;
  for (const auto& s : res.samples) drift = std::max(drift, s.energy_drift);
  r.add(make_check("ensemble", 0, "ensemble.energy_drift", "H(x(t), p(t)) = H(x0, p0) along each sample", drift,
                   tol["ensemble.energy_drift"]));
  r.summary["rng_algorithm"] = res.rng_algorithm;
  r.summary["histograms"] = hist_summary;

  if (e.compare) {
    const EnergyComparison cmp = compare_energy_statistics(quantum, res.energies());
    json rows = json::array();
    for (const auto& row : cmp.rows) {
      rows.push_back({{"energy", row.energy}, {"quantum", row.quantum}, {"classical", row.classical}, {"count", row.count}});
    }
    write_json(ctx.file("comparison.json"), json{{"rng_algorithm", res.rng_algorithm},
                                                 {"seed", ctx.cfg.seed},
                                                 {"n_samples", e.n_samples},
                                                 {"total_variation", cmp.total_variation},
                                                 {"bins", rows}});
    r.summary["total_variation"] = cmp.total_variation;
    if (e.distribution == "superposition") {
      r.add(make_check("ensemble", 0, "ensemble.matched_tv", "1/2 sum_n |p_q(n) - p_c(n)| for samples drawn from |c_n|^2",
                       cmp.total_variation, tol["ensemble.matched_tv"]));
    } else if (e.distribution == "uniform") {
      r.add(make_check("ensemble", 0, "ensemble.mismatch_tv", "TV distance for samples drawn uniformly over the levels",
                       cmp.total_variation, tol["ensemble.mismatch_tv"], Check::Bound::AtLeast));
    }
  }
  return r;
}

// ---------------------------------------------------------------- verify-all

VerificationReport cmd_verify_all(const Context& ctx) {
  AcceptanceOptions options;
  options.tolerances = ctx.cfg.tolerances;
  options.seed = ctx.cfg.seed;
  VerificationReport r = run_acceptance(options);
  for (const auto& s : criterion_status(r)) {
    std::cout << (s.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << s.id << "  " << s.scenario << '\n';
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrodinger, Madelung and Hamilton-Jacobi verification tool"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  app.add_option("--config", config_path, "run configuration (INI)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "RNG seed (overrides run.seed)");
  app.add_option("--tolerance-scale", scale, "multiply every upper-bound tolerance")->check(CLI::PositiveNumber);

  using Command = VerificationReport (*)(const Context&);
  const std::vector<std::pair<std::string, std::pair<Command, std::string>>> commands{
      {"eigen", {cmd_eigen, "lowest eigenpairs of the configured Hamiltonian"}},
      {"evolve", {cmd_evolve, "Crank-Nicolson evolution with observables"}},
      {"madelung", {cmd_madelung, "modulus/phase decomposition and quantum potential"}},
      {"hj", {cmd_hj, "classical trajectory and principal function by characteristics"}},
      {"hj-compare", {cmd_hj_compare, "phase versus principal function for a named scenario"}},
      {"superpose", {cmd_superpose, "superposition of eigenstates and its energy distribution"}},
      {"ensemble", {cmd_ensemble, "classical ensemble and energy statistics"}},
      {"verify-all", {cmd_verify_all, "run every acceptance criterion"}},
  };
  for (const auto& [name, cmd] : commands) app.add_subcommand(name, cmd.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  Command run = nullptr;
  for (const auto& [name, cmd] : commands) {
    if (chosen->get_name() == name) run = cmd.first;
  }

  try {
    RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed) cfg.seed = *seed;
    if (scale) cfg.tolerances.set_scale(*scale);

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
      throw UsageError("cannot create output directory '" + cfg.output_dir.string() + "'");
    }
    const Context ctx(std::move(cfg));
    VerificationReport report = run(ctx);
    try {
      write_json(ctx.file("report.json"), to_json(report));
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    for (const auto& c : report.checks) {
      if (!c.pass) std::cerr << "check failed: " << c.name << '\n';
    }
    std::cout << chosen->get_name() << ": " << (report.passed() ? "pass" : "fail") << " (" << report.checks.size()
              << " checks, report in " << ctx.file("report.json").string() << ")\n";
    return report.passed() ? kExitPass : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "qhj " << chosen->get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }
}
