#include "qhj/madelung.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qhj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream msg;
    msg << what << ": length " << got << " does not match grid size " << want;
    throw std::invalid_argument(msg.str());
  }
}

// A point is usable for a 3-point central stencil when it is interior and it
// and both neighbours are unmasked.
bool central_ok(const Mask& m, std::size_t i) {
  return i > 0 && i + 1 < m.size() && !m[i - 1] && !m[i] && !m[i + 1];
}

double max_abs_masked(const std::vector<RealField>& fields, const std::vector<Mask>& masks) {
  double r = 0.0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    for (std::size_t i = 0; i < fields[k].size(); ++i) {
      if (!masks[k][i]) r = std::max(r, std::abs(fields[k][i]));
    }
  }
  return r;
}

}  // namespace

PolarField decompose(const WaveFunction& psi, const PhysicalConstants& constants) {
  constants.validate();
  const std::size_t n = psi.size();
  PolarField out{psi.grid, psi.time, RealField(n), RealField(n, kNaN), Mask(n, 0), 0.0};

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.lambda[i] = std::abs(psi.values[i]);
    peak = std::max(peak, out.lambda[i]);
  }
  out.node_threshold = kNodeThreshold * peak;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(out.lambda[i] >= out.node_threshold) || out.lambda[i] == 0.0) out.node_mask[i] = 1;
  }
  // Zero crossing between two grid nodes: the phase turns by more than pi/2.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (out.node_mask[i] || out.node_mask[i + 1]) continue;
    const double turn = std::arg(psi.values[i + 1] * std::conj(psi.values[i]));
    if (std::abs(turn) > 0.5 * std::numbers::pi) {
      out.node_mask[i] = 1;
      out.node_mask[i + 1] = 1;
    }
  }
  if (std::all_of(out.node_mask.begin(), out.node_mask.end(), [](auto m) { return m != 0; })) {
    throw std::invalid_argument("decompose: wavefunction vanishes everywhere (all points are nodes)");
  }

  const double hbar = constants.hbar;
  bool in_run = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.node_mask[i]) {
      in_run = false;
      continue;
    }
    if (!in_run) {
      double theta = std::arg(psi.values[i]);
      if (theta <= -std::numbers::pi) theta += 2.0 * std::numbers::pi;
      out.phi[i] = hbar * theta;
      in_run = true;
    } else {
      out.phi[i] = out.phi[i - 1] + hbar * std::arg(psi.values[i] * std::conj(psi.values[i - 1]));
    }
  }
  return out;
}

ComplexField recompose(const PolarField& polar, const PhysicalConstants& constants) {
  constants.validate();
  ComplexField v(polar.lambda.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double phase = polar.node_mask[i] ? 0.0 : polar.phi[i] / constants.hbar;
    v[i] = std::polar(polar.lambda[i], phase);
  }
  return v;
}

QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalConstants& constants) {
  constants.validate();
  const std::size_t n = polar.lambda.size();
  const double dx = polar.grid.dx();
  const double coef = -constants.hbar * constants.hbar / (2.0 * constants.mass * dx * dx);
  QuantumPotentialField q{polar.grid, RealField(n, kNaN), {}, Mask(n, 1)};
  const auto& lam = polar.lambda;
  for (std::size_t i = 0; i < n; ++i) {
    if (!central_ok(polar.node_mask, i)) continue;
    q.v_q[i] = coef * (lam[i + 1] - 2.0 * lam[i] + lam[i - 1]) / lam[i];
    q.mask[i] = 0;
  }
  return q;
}

QuantumPotentialField quantum_potential(const PolarField& polar, const PhysicalConstants& constants,
                                        std::span<const double> potential) {
  QuantumPotentialField q = quantum_potential(polar, constants);
  q.v_t = total_potential(q.v_q, potential);
  return q;
}

RealField total_potential(std::span<const double> v_q, std::span<const double> potential) {
  if (v_q.size() != potential.size()) {
    throw std::invalid_argument("total_potential: V_q and V have different lengths");
  }
  RealField vt(v_q.size());
  for (std::size_t i = 0; i < vt.size(); ++i) vt[i] = potential[i] + v_q[i];
  return vt;
}

double MadelungResiduals::max_abs_phase() const { return max_abs_masked(phase, masks); }
double MadelungResiduals::max_abs_continuity() const { return max_abs_masked(continuity, masks); }

MadelungResiduals madelung_residuals(std::span<const WaveFunction> series,
                                     std::span<const double> potential,
                                     const PhysicalConstants& constants, Execution exec) {
  constants.validate();
  if (series.size() < 3) {
    throw std::invalid_argument("madelung_residuals: need at least 3 time slices");
  }
  const Grid1D grid = series.front().grid;
  for (const auto& s : series) {
    if (!(s.grid == grid)) throw std::invalid_argument("madelung_residuals: slices on different grids");
  }
  require_size(potential.size(), grid.size(), "madelung_residuals potential");
  const double dt = series[1].time - series[0].time;
  if (!(dt > 0.0)) throw std::invalid_argument("madelung_residuals: times must increase");
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    const double step = series[k + 1].time - series[k].time;
    if (std::abs(step - dt) > 1e-9 * std::max(dt, std::abs(series[k + 1].time))) {
      std::ostringstream msg;
      msg << "madelung_residuals: non-uniform time step at slice " << k + 1 << " (" << step
          << " vs " << dt << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  std::vector<PolarField> polar(series.size(), PolarField{grid, 0.0, {}, {}, {}, 0.0});
  for_each_index(exec, series.size(), [&](std::size_t k) { polar[k] = decompose(series[k], constants); });

  const std::size_t slices = series.size() - 2;
  const std::size_t n = grid.size();
  MadelungResiduals out;
  out.times.resize(slices);
  out.phase.assign(slices, RealField(n, kNaN));
  out.continuity.assign(slices, RealField(n, kNaN));
  out.masks.assign(slices, Mask(n, 1));

  const double hbar = constants.hbar;
  const double m = constants.mass;
  const double dx = grid.dx();

  for_each_index(exec, slices, [&](std::size_t s) {
    const std::size_t k = s + 1;
    const PolarField& prev = polar[k - 1];
    const PolarField& cur = polar[k];
    const PolarField& next = polar[k + 1];
    out.times[s] = series[k].time;

    Mask joint(n);
    for (std::size_t i = 0; i < n; ++i) joint[i] = prev.node_mask[i] | cur.node_mask[i] | next.node_mask[i];

    const auto& lam = cur.lambda;
    const auto& phi = cur.phi;
    for (std::size_t i = 0; i < n; ++i) {
      if (!central_ok(joint, i)) continue;
      const double grad_phi = (phi[i + 1] - phi[i - 1]) / (2.0 * dx);
      const double lap_phi = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (dx * dx);
      const double v_q = -hbar * hbar / (2.0 * m) * (lam[i + 1] - 2.0 * lam[i] + lam[i - 1]) /
                         (dx * dx * lam[i]);
      const double grad_log = (std::log(lam[i + 1]) - std::log(lam[i - 1])) / (2.0 * dx);
      const double dphi_dt =
          hbar * std::arg(series[k + 1].values[i] * std::conj(series[k - 1].values[i])) / (2.0 * dt);
      const double dlog_dt = (std::log(next.lambda[i]) - std::log(prev.lambda[i])) / (2.0 * dt);

      out.phase[s][i] = grad_phi * grad_phi / (2.0 * m) + potential[i] + v_q + dphi_dt;
      out.continuity[s][i] = lap_phi + 2.0 * grad_phi * grad_log + 2.0 * m * dlog_dt;
      out.masks[s][i] = 0;
    }
  });
  return out;
}

RealField stationary_continuity_residual(const PolarField& polar) {
  const std::size_t n = polar.lambda.size();
  const double dx = polar.grid.dx();
  RealField r(n, kNaN);
  const auto& lam = polar.lambda;
  const auto& phi = polar.phi;
  for (std::size_t i = 0; i < n; ++i) {
    if (!central_ok(polar.node_mask, i)) continue;
    const double p = (phi[i + 1] - phi[i - 1]) / (2.0 * dx);
    const double lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (dx * dx);
    const double grad_log = (std::log(lam[i + 1]) - std::log(lam[i - 1])) / (2.0 * dx);
    r[i] = lap + 2.0 * p * grad_log;
  }
  return r;
}

RealField probability_current(const WaveFunction& psi, const PhysicalConstants& constants) {
  constants.validate();
  const std::size_t n = psi.size();
  const double dx = psi.grid.dx();
  const auto& v = psi.values;
  RealField j(n);
  const double c = constants.hbar / constants.mass;
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> d;
    if (i == 0) {
      d = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
    } else if (i + 1 == n) {
      d = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx);
    } else {
      d = (v[i + 1] - v[i - 1]) / (2.0 * dx);
    }
    j[i] = c * std::imag(std::conj(v[i]) * d);
  }
  return j;
}

AmplitudeRelation verify_1d_amplitude_relation(const PolarField& polar) {
  const std::size_t n = polar.lambda.size();
  const double dx = polar.grid.dx();
  std::vector<double> q;
  double max_p = 0.0;
  double min_p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!central_ok(polar.node_mask, i)) continue;
    const double p = (polar.phi[i + 1] - polar.phi[i - 1]) / (2.0 * dx);
    max_p = std::max(max_p, std::abs(p));
    min_p = std::min(min_p, p);
    q.push_back(polar.lambda[i] * polar.lambda[i] * p);
  }
  AmplitudeRelation out;
  out.points = q.size();
  // Constant phase: phase change per grid step is at roundoff level.
  const double phi_scale = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!polar.node_mask[i]) s = std::max(s, std::abs(polar.phi[i]));
    }
    return std::max(s, 1.0);
  }();
  if (q.empty() || max_p * dx <= 1e-12 * phi_scale) {
    out.status = AmplitudeRelation::Status::Vacuous;
    return out;
  }
  if (!(min_p > 0.0)) {
    throw std::invalid_argument(
        "verify_1d_amplitude_relation: phase gradient is not strictly positive (turning point or "
        "left-moving state)");
  }
  std::vector<double> sorted = q;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  double dev = 0.0;
  for (double v : q) dev = std::max(dev, std::abs(v - median) / median);
  out.status = AmplitudeRelation::Status::Measured;
  out.deviation = dev;
  out.median = median;
  return out;
}

double verify_oscillator_identity(int n, const EigenPair& eig, const PhysicalConstants& constants,
                                  double omega) {
  constants.validate();
  if (n < 0) throw std::invalid_argument("verify_oscillator_identity: n must be non-negative");
  const auto& f = eig.function;
  const Grid1D& g = eig.grid;
  require_size(f.size(), g.size(), "verify_oscillator_identity");
  const double dx = g.dx();
  const double m = constants.mass;
  const double hb = constants.hbar;
  const double energy = (n + 0.5) * hb * omega;
  double max_res = 0.0;
  double max_curv = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double curv = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dx * dx);
    const double x = g.x(i);
    const double res = curv + (2.0 * m / (hb * hb)) * (energy - 0.5 * m * omega * omega * x * x) * f[i];
    max_res = std::max(max_res, std::abs(res));
    max_curv = std::max(max_curv, std::abs(curv));
  }
  if (max_curv == 0.0) return std::numeric_limits<double>::infinity();
  return max_res / max_curv;
}

double verify_modified_hj(const WaveFunction& psi, std::span<const double> potential, double energy,
                          const PhysicalConstants& constants) {
  require_size(potential.size(), psi.size(), "verify_modified_hj potential");
  const PolarField polar = decompose(psi, constants);
  const QuantumPotentialField q = quantum_potential(polar, constants, potential);
  const double dx = psi.grid.dx();
  double r = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (q.mask[i]) continue;
    const double p = (polar.phi[i + 1] - polar.phi[i - 1]) / (2.0 * dx);
    r = std::max(r, std::abs(p * p - 2.0 * constants.mass * (energy - q.v_t[i])));
  }
  return r;
}

double verify_modified_hj(const EigenPair& eig, std::span<const double> potential,
                          const PhysicalConstants& constants) {
  return verify_modified_hj(from_real(eig.grid, eig.function), potential, eig.energy, constants);
}

}  // namespace qhj
