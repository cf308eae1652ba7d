#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qhj {

/// Raised when an iterative or direct solve cannot proceed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tridiag {

/// Number of eigenvalues strictly below `sigma` of the symmetric tridiagonal
/// matrix (diag, off) via the Sturm sequence of the LDL^T pivots.
std::size_t count_below(std::span<const double> diag, std::span<const double> off, double sigma);

/// Gershgorin interval enclosing the spectrum.
std::pair<double, double> gershgorin_bounds(std::span<const double> diag, std::span<const double> off);

/// Eigenvalue with 0-based ascending index `k`, by bisection on count_below.
double bisect_eigenvalue(std::span<const double> diag, std::span<const double> off, std::size_t k);

/// LU factorisation with partial pivoting of the shifted matrix T - shift*I,
/// used for inverse iteration where the shifted matrix is nearly singular.
class PivotedLU {
 public:
  PivotedLU(std::span<const double> diag, std::span<const double> off, double shift);
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<unsigned char> swapped_;
};

/// Unpivoted LU of a complex tridiagonal matrix with constant off-diagonals.
/// Stable for matrices of the form I + iK with K real symmetric.
class ComplexThomas {
 public:
  ComplexThomas(std::span<const std::complex<double>> diag, std::complex<double> off);
  void solve(std::span<std::complex<double>> rhs) const;
  std::size_t size() const { return inv_pivot_.size(); }

 private:
  std::complex<double> off_;
  std::vector<std::complex<double>> inv_pivot_;
  std::vector<std::complex<double>> upper_;
};

}  // namespace tridiag
}  // namespace qhj
