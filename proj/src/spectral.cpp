#include "qhj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qhj/log.hpp"
#include "qhj/tridiagonal.hpp"

namespace qhj {

namespace {

template <class T>
std::vector<T> apply_impl(const HamiltonianMatrix& h, std::span<const T> psi) {
  const std::size_t n = h.grid.size();
  if (psi.size() != n) throw std::invalid_argument("HamiltonianMatrix::apply: size mismatch");
  std::vector<T> out(n, T{});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    T left = i > 1 ? psi[i - 1] : T{};
    T right = i + 2 < n ? psi[i + 1] : T{};
    out[i] = h.diagonal[i] * psi[i] + h.off_diagonal * (left + right);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

RealField HamiltonianMatrix::apply(std::span<const double> psi) const {
  return apply_impl<double>(*this, psi);
}

ComplexField HamiltonianMatrix::apply(std::span<const std::complex<double>> psi) const {
  return apply_impl<std::complex<double>>(*this, psi);
}

HamiltonianMatrix assemble_hamiltonian(const Grid1D& grid, std::span<const double> potential,
                                       const PhysicalConstants& constants) {
  constants.validate();
  if (potential.size() != grid.size()) {
    std::ostringstream msg;
    msg << "assemble_hamiltonian: potential has " << potential.size()
        << " values but the grid has " << grid.size() << " points";
    throw std::invalid_argument(msg.str());
  }
  const double kinetic = constants.hbar * constants.hbar / (constants.mass * grid.dx() * grid.dx());
  HamiltonianMatrix h{grid, constants, RealField(grid.size()), -0.5 * kinetic};
  for (std::size_t i = 0; i < grid.size(); ++i) h.diagonal[i] = kinetic + potential[i];
  return h;
}

std::vector<EigenPair> solve_lowest_eigenpairs(const HamiltonianMatrix& h, std::size_t k,
                                              const EigenSolveOptions& options) {
  const std::size_t m = h.interior_size();
  if (k < 1 || k > m) {
    std::ostringstream msg;
    msg << "solve_lowest_eigenpairs: k=" << k << " out of range [1, " << m
        << "] (grid of " << h.grid.size() << " points has " << m << " interior unknowns)";
    throw std::invalid_argument(msg.str());
  }
  const std::span<const double> diag(h.diagonal.data() + 1, m);
  const std::vector<double> off(m - 1, h.off_diagonal);
  const auto [glo, ghi] = tridiag::gershgorin_bounds(diag, off);
  const double tnorm = std::max(std::abs(glo), std::abs(ghi));
  const double residual_target = 64.0 * std::numeric_limits<double>::epsilon() * tnorm;

  std::vector<std::vector<double>> vectors;
  std::vector<double> energies;
  vectors.reserve(k);
  std::uint64_t seed = 0x5eedULL;

  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = tridiag::bisect_eigenvalue(diag, off, j);
    const tridiag::PivotedLU lu(diag, off, lambda);

    std::vector<double> v(m);
    for (auto& x : v) x = 0.5 + static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;

    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < options.max_inverse_iterations; ++it) {
      lu.solve(v);
      for (const auto& u : vectors) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += u[i] * v[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= dot * u[i];
      }
      double nrm = 0.0;
      for (double x : v) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
      for (auto& x : v) x /= nrm;

      residual = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double r = (diag[i] - lambda) * v[i];
        if (i > 0) r += off[i - 1] * v[i - 1];
        if (i + 1 < m) r += off[i] * v[i + 1];
        residual = std::max(residual, std::abs(r));
      }
      if (it >= 1 && residual <= residual_target) break;
    }
    if (!(residual <= residual_target)) {
      std::ostringstream msg;
      msg << "inverse iteration for eigenvalue #" << j << " (E=" << lambda << ") did not converge: "
          << "residual " << residual << " > " << residual_target << " after " << it << " iterations";
      throw NumericalError(msg.str());
    }
    energies.push_back(lambda);
    vectors.push_back(std::move(v));
  }

  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    RealField f(h.grid.size(), 0.0);
    std::copy(vectors[j].begin(), vectors[j].end(), f.begin() + 1);
    const double peak = max_abs(f);
    for (double x : f) {
      if (std::abs(x) > 1e-8 * peak) {
        if (x < 0.0) {
          for (auto& y : f) y = -y;
        }
        break;
      }
    }
    const double nrm = std::sqrt(inner_product(h.grid, f, f));
    for (auto& y : f) y /= nrm;
    if (options.warn_on_boundary_tail) {
      const double tail = std::max(std::abs(f[1]), std::abs(f[f.size() - 2]));
      if (tail > 1e-10 * max_abs(f)) {
        std::ostringstream msg;
        msg << "eigenfunction #" << j << " is " << tail / max_abs(f)
            << " of its peak next to the walls; widen the grid";
        warn(msg.str());
      }
    }
    pairs.push_back(EigenPair{h.grid, energies[j], std::move(f)});
  }

  // Degenerate energies: order lexicographically on the sign-fixed vector.
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return std::lexicographical_compare(a.function.begin(), a.function.end(), b.function.begin(),
                                        b.function.end());
  });
  return pairs;
}

double eigen_residual(const HamiltonianMatrix& h, const EigenPair& pair) {
  const RealField hpsi = h.apply(pair.function);
  double r = 0.0;
  for (std::size_t i = 1; i + 1 < hpsi.size(); ++i) {
    r = std::max(r, std::abs(hpsi[i] - pair.energy * pair.function[i]));
  }
  return r;
}

WaveFunction stationary_scattering_state(const Grid1D& grid, std::span<const double> potential,
                                         double energy, const PhysicalConstants& constants) {
  constants.validate();
  if (potential.size() != grid.size()) {
    throw std::invalid_argument("stationary_scattering_state: potential/grid size mismatch");
  }
  const double vmax = *std::max_element(potential.begin(), potential.end());
  if (!(energy > vmax)) {
    std::ostringstream msg;
    msg << "stationary_scattering_state: E=" << energy << " must exceed max V=" << vmax
        << " (turning points are not supported)";
    throw std::invalid_argument(msg.str());
  }
  const std::size_t n = grid.size();
  const double h2 = grid.dx() * grid.dx();
  const double scale = 2.0 * constants.mass / (constants.hbar * constants.hbar);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + h2 * scale * (energy - potential[i]) / 12.0;

  // Discrete right-mover of the Numerov recurrence for the local wavenumber at x_min.
  const double cos_theta = (6.0 - 5.0 * w[0]) / w[0];
  if (cos_theta <= -1.0) {
    throw std::invalid_argument("stationary_scattering_state: wavelength not resolved by the grid");
  }
  const double theta = std::acos(cos_theta);

  ComplexField psi(n);
  psi[0] = 1.0;
  psi[1] = std::polar(1.0, theta);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    psi[i + 1] = ((12.0 - 10.0 * w[i]) * psi[i] - w[i - 1] * psi[i - 1]) / w[i + 1];
  }
  return WaveFunction(grid, std::move(psi), 0.0);
}

}  // namespace qhj
