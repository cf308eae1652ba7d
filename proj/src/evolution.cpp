#include "qhj/evolution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qhj {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double checked_step(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("CrankNicolson: dt must be positive");
  return dt;
}

tridiag::ComplexThomas factor_lhs(const HamiltonianMatrix& h, double dt) {
  const std::size_t m = h.interior_size();
  const double a = dt / (2.0 * h.constants.hbar);
  std::vector<std::complex<double>> diag(m);
  for (std::size_t i = 0; i < m; ++i) diag[i] = 1.0 + kI * a * h.diagonal[i + 1];
  return tridiag::ComplexThomas(diag, kI * a * h.off_diagonal);
}

}  // namespace

CrankNicolson::CrankNicolson(const HamiltonianMatrix& h, double dt)
    : h_(h), dt_(checked_step(dt)), rhs_off_(0.0), lhs_(factor_lhs(h, dt_)) {
  const double a = dt / (2.0 * h.constants.hbar);
  rhs_off_ = -kI * a * h.off_diagonal;
  rhs_diag_.resize(h.interior_size());
  for (std::size_t i = 0; i < rhs_diag_.size(); ++i) rhs_diag_[i] = 1.0 - kI * a * h.diagonal[i + 1];
}

void CrankNicolson::step(ComplexField& psi) const {
  const std::size_t n = h_.grid.size();
  if (psi.size() != n) throw std::invalid_argument("CrankNicolson::step: size mismatch");
  const std::size_t m = n - 2;
  std::vector<std::complex<double>> rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = j + 1;
    std::complex<double> nb = 0.0;
    if (j > 0) nb += psi[i - 1];
    if (j + 1 < m) nb += psi[i + 1];
    rhs[j] = rhs_diag_[j] * psi[i] + rhs_off_ * nb;
  }
  lhs_.solve(rhs);
  psi[0] = 0.0;
  psi[n - 1] = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(rhs[j].real()) || !std::isfinite(rhs[j].imag())) {
      throw NumericalError("Crank-Nicolson step produced a non-finite value");
    }
    psi[j + 1] = rhs[j];
  }
}

double energy_expectation(const HamiltonianMatrix& h, std::span<const std::complex<double>> psi) {
  const ComplexField hpsi = h.apply(psi);
  const std::complex<double> num = inner_product(h.grid, psi, hpsi);
  return num.real() / norm_squared(h.grid, psi);
}

EvolutionResult evolve(const WaveFunction& psi0, std::span<const double> potential, double dt,
                       std::size_t n_steps, const PhysicalConstants& constants, std::size_t stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (stride == 0) throw std::invalid_argument("evolve: stride must be at least 1");
  const HamiltonianMatrix h = assemble_hamiltonian(psi0.grid, potential, constants);
  const CrankNicolson cn(h, dt);

  EvolutionResult out;
  out.dt = dt * static_cast<double>(stride);
  ComplexField psi = psi0.values;
  psi.front() = 0.0;
  psi.back() = 0.0;
  auto record = [&](std::size_t step) {
    const double t = psi0.time + dt * static_cast<double>(step);
    out.norm_history.push_back(std::sqrt(norm_squared(h.grid, psi)));
    out.energy_history.push_back(energy_expectation(h, psi));
    out.slices.emplace_back(psi0.grid, psi, t);
  };
  record(0);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    cn.step(psi);
    if (s % stride == 0) record(s);
  }
  return out;
}

double expectation(const WaveFunction& psi, const Observable& op, const PhysicalConstants& constants) {
  constants.validate();
  const Grid1D& g = psi.grid;
  const double nrm2 = norm_squared(g, psi.values);
  if (std::abs(nrm2 - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "expectation: wavefunction is not normalised (norm^2 = " << nrm2 << ")";
    throw std::invalid_argument(msg.str());
  }
  const std::size_t n = psi.size();
  const auto& v = psi.values;
  const std::complex<double> value = std::visit(
      overloaded{
          [&](const observable::Position&) {
            ComplexField xpsi(n);
            for (std::size_t i = 0; i < n; ++i) xpsi[i] = g.x(i) * v[i];
            return inner_product(g, v, xpsi);
          },
          [&](const observable::Momentum&) {
            // Zero beyond the walls, matching the Dirichlet Hamiltonian.
            ComplexField ppsi(n);
            for (std::size_t i = 0; i < n; ++i) {
              const std::complex<double> left = i > 0 ? v[i - 1] : 0.0;
              const std::complex<double> right = i + 1 < n ? v[i + 1] : 0.0;
              ppsi[i] = -kI * constants.hbar * (right - left) / (2.0 * g.dx());
            }
            return inner_product(g, v, ppsi);
          },
          [&](const observable::Energy& e) {
            const HamiltonianMatrix h = assemble_hamiltonian(g, e.potential, constants);
            return inner_product(g, v, h.apply(std::span<const std::complex<double>>(v)));
          },
      },
      op);
  if (std::abs(value.imag()) > 1e-10) {
    std::ostringstream msg;
    msg << "expectation: imaginary residue " << value.imag() << " exceeds 1e-10";
    throw NumericalError(msg.str());
  }
  return value.real();
}

}  // namespace qhj
