#include "qhj/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qhj::tridiag {

namespace {

void check_shape(std::span<const double> diag, std::span<const double> off) {
  if (diag.empty() || off.size() + 1 != diag.size()) {
    throw std::invalid_argument("tridiagonal: off-diagonal must have size(diag) - 1 entries");
  }
}

}  // namespace

std::size_t count_below(std::span<const double> diag, std::span<const double> off, double sigma) {
  check_shape(diag, off);
  // Kahan's variant: replace an exact zero pivot with a tiny negative number.
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double q = diag[0] - sigma;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    q = diag[i] - sigma - off[i - 1] * off[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(std::span<const double> diag, std::span<const double> off) {
  check_shape(diag, off);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < diag.size()) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

double bisect_eigenvalue(std::span<const double> diag, std::span<const double> off, std::size_t k) {
  if (k >= diag.size()) throw std::invalid_argument("bisect_eigenvalue: index out of range");
  auto [lo, hi] = gershgorin_bounds(diag, off);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale;
  lo -= tol;
  hi += tol;
  // Invariant: count_below(lo) <= k < count_below(hi).
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(diag, off, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PivotedLU::PivotedLU(std::span<const double> diag, std::span<const double> off, double shift) {
  check_shape(diag, off);
  const std::size_t n = diag.size();
  d_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d_[i] = diag[i] - shift;
  dl_.assign(off.begin(), off.end());
  du_.assign(off.begin(), off.end());
  du2_.assign(n > 2 ? n - 2 : 0, 0.0);
  swapped_.assign(n > 0 ? n - 1 : 0, 0);

  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d_[i]));
  for (double e : off) anorm = std::max(anorm, std::abs(e));
  const double small = std::numeric_limits<double>::epsilon() * std::max(anorm, 1.0);

  // Same elimination order as LAPACK dgttrf.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] == 0.0) d_[i] = small;
      const double fact = dl_[i] / d_[i];
      dl_[i] = fact;
      d_[i + 1] -= fact * du_[i];
    } else {
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      swapped_[i] = 1;
    }
  }
  if (n > 0 && std::abs(d_[n - 1]) < small) d_[n - 1] = std::copysign(small, d_[n - 1] == 0.0 ? 1.0 : d_[n - 1]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) < small) d_[i] = std::copysign(small, d_[i] == 0.0 ? 1.0 : d_[i]);
  }
}

void PivotedLU::solve(std::span<double> b) const {
  const std::size_t n = d_.size();
  if (b.size() != n) throw std::invalid_argument("PivotedLU::solve: size mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!swapped_[i]) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (std::size_t ii = n >= 3 ? n - 2 : 0; ii-- > 0;) {
    b[ii] = (b[ii] - du_[ii] * b[ii + 1] - du2_[ii] * b[ii + 2]) / d_[ii];
  }
}

ComplexThomas::ComplexThomas(std::span<const std::complex<double>> diag, std::complex<double> off)
    : off_(off), inv_pivot_(diag.size()), upper_(diag.size()) {
  if (diag.empty()) throw std::invalid_argument("ComplexThomas: empty system");
  const double tiny = 1e3 * std::numeric_limits<double>::min();
  std::complex<double> pivot = diag[0];
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (i > 0) pivot = diag[i] - off_ * upper_[i - 1];
    if (std::abs(pivot) < tiny) {
      std::ostringstream msg;
      msg << "tridiagonal solve breakdown: pivot " << std::abs(pivot) << " at row " << i;
      throw NumericalError(msg.str());
    }
    inv_pivot_[i] = 1.0 / pivot;
    upper_[i] = off_ * inv_pivot_[i];
  }
}

void ComplexThomas::solve(std::span<std::complex<double>> b) const {
  const std::size_t n = inv_pivot_.size();
  if (b.size() != n) throw std::invalid_argument("ComplexThomas::solve: size mismatch");
  b[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) b[i] = (b[i] - off_ * b[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) b[i] -= upper_[i] * b[i + 1];
}

}  // namespace qhj::tridiag
