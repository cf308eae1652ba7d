#include "qhj/tolerances.hpp"

#include <cmath>
#include <stdexcept>

namespace qhj {

ToleranceTable::ToleranceTable() = default;

const std::map<std::string, ToleranceTable::Entry>& ToleranceTable::defaults() {
  static const std::map<std::string, Entry> table{
      {"inertial.phase_vs_action", {1e-10, true, "max |phi - S| after offset alignment"}},
      {"inertial.quantum_potential", {1e-8, true, "max |V_q| for a plane wave"}},
      {"eigen.level_error", {1e-4, true, "|E_n - (n + 1/2) hbar omega|"}},
      {"eigen.refinement_ratio", {3.5, false, "E_0 error reduction when dx halves"}},
      {"eigen.runtime_s", {10.0, false, "wall clock budget of the spectrum check"}},
      {"eigen.residual", {1e-8, true, "max |H psi - E psi| / max |psi|"}},
      {"eigen.orthonormality", {1e-10, true, "max |<psi_m, psi_n> - delta_mn|"}},
      {"oscillator.identity", {1e-3, true, "normalised oscillator identity residual"}},
      {"gap.effective_potential", {1e-3, true, "max |V_t - E_n| for oscillator eigenstates"}},
      {"gap.hj_vs_quantum_potential", {2e-3, true, "max |HJ residual on phi + V_q|"}},
      {"madelung.phase_residual", {1e-3, true, "max phase-equation residual"}},
      {"madelung.continuity_residual", {1e-3, true, "max continuity-equation residual"}},
      {"madelung.convergence_order", {1.7, false, "empirical order under dx, dt refinement"}},
      {"madelung.free_quantum_potential", {1e-8, true, "max |V_q| reported by the madelung command"}},
      {"amplitude.deviation", {1e-2, true, "relative spread of lambda^2 phi'"}},
      {"amplitude.current_match", {1e-3, true, "relative gap between lambda^2 phi' and m j"}},
      {"evolution.norm_drift", {1e-10, true, "max |norm(t) - norm(0)|"}},
      {"evolution.overlap_defect", {1e-6, true, "1 - |<psi(T), psi(0)>| after one period"}},
      {"evolution.energy_drift", {1e-8, true, "max relative change of <H>"}},
      {"ehrenfest.position", {1e-3, true, "max |<x>(t) - x_classical(t)|"}},
      {"superposition.coefficient_drift", {1e-8, true, "max ||c_n(t)| - |c_n(0)||"}},
      {"superposition.normalisation", {1e-10, true, "|norm(psi_0) - 1|"}},
      {"superposition.round_trip", {1e-10, true, "max |project(build(c))_n - c_n|"}},
      {"ensemble.matched_tv", {1e-2, true, "TV distance for an ensemble drawn from |c_n|^2"}},
      {"ensemble.mismatch_tv", {0.1, false, "TV distance for a mismatched ensemble"}},
      {"ensemble.energy_drift", {1e-6, true, "max relative classical energy drift"}},
      {"ensemble.runtime_s", {60.0, false, "wall clock budget of the statistics check"}},
      {"characteristics.free_reconstruction", {1e-6, true, "max |S_characteristics - S_closed_form|"}},
      {"characteristics.caustic_steps", {1.0, false, "caustic time error in integrator steps"}},
      {"characteristics.hj_residual", {1e-3, true, "HJ residual of characteristics S before focusing"}},
      {"hj.energy_drift", {1e-6, true, "relative energy drift of a single trajectory"}},
  };
  return table;
}

double ToleranceTable::operator[](const std::string& key) const {
  const auto it = defaults().find(key);
  if (it == defaults().end()) throw std::out_of_range("unknown tolerance '" + key + "'");
  const auto o = overrides_.find(key);
  const double v = o != overrides_.end() ? o->second : it->second.value;
  return it->second.scalable ? v * scale_ : v;
}

void ToleranceTable::set(const std::string& key, double value) {
  if (!defaults().contains(key)) throw std::invalid_argument("unknown tolerance '" + key + "'");
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("tolerance '" + key + "' must be positive");
  }
  overrides_[key] = value;
}

void ToleranceTable::set_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("tolerance scale must be positive");
  scale_ = scale;
}

}  // namespace qhj
