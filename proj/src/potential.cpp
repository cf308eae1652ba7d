#include "qhj/potential.hpp"

#include <cmath>
#include <sstream>

namespace qhj {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech2(double u) {
  const double c = std::cosh(u);
  return 1.0 / (c * c);
}

void check_tabulated(const potential::Tabulated& tab, const Grid1D& grid) {
  if (tab.values.size() != grid.size()) {
    std::ostringstream msg;
    msg << "tabulated potential has " << tab.values.size() << " values but the grid has "
        << grid.size() << " points";
    throw std::invalid_argument(msg.str());
  }
}

void check_barrier(const potential::SmoothBarrier& b) {
  if (!(b.width > 0.0)) throw std::invalid_argument("smooth_barrier width must be positive");
}

}  // namespace

std::string potential_kind_name(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const potential::Free&) { return std::string("free"); },
                        [](const potential::Harmonic&) { return std::string("harmonic"); },
                        [](const potential::InfiniteWell&) { return std::string("infinite_well"); },
                        [](const potential::SmoothBarrier&) { return std::string("smooth_barrier"); },
                        [](const potential::Tabulated&) { return std::string("tabulated"); },
                    },
                    spec);
}

RealField eval_potential(const PotentialSpec& spec, const Grid1D& grid,
                         const PhysicalConstants& constants) {
  constants.validate();
  RealField v(grid.size(), 0.0);
  std::visit(overloaded{
                 [](const potential::Free&) {},
                 [](const potential::InfiniteWell&) {},
                 [&](const potential::Harmonic& h) {
                   const double k = 0.5 * constants.mass * h.omega * h.omega;
                   for (std::size_t i = 0; i < grid.size(); ++i) {
                     const double x = grid.x(i);
                     v[i] = k * (x * x);
                   }
                 },
                 [&](const potential::SmoothBarrier& b) {
                   check_barrier(b);
                   for (std::size_t i = 0; i < grid.size(); ++i) {
                     v[i] = b.height * sech2((grid.x(i) - b.center) / b.width);
                   }
                 },
                 [&](const potential::Tabulated& t) {
                   check_tabulated(t, grid);
                   v = t.values;
                 },
             },
             spec);
  return v;
}

ClassicalPotential::ClassicalPotential(PotentialSpec spec, const Grid1D& grid,
                                       const PhysicalConstants& constants)
    : spec_(std::move(spec)), grid_(grid), constants_(constants) {
  constants_.validate();
  if (const auto* b = std::get_if<potential::SmoothBarrier>(&spec_)) check_barrier(*b);
  if (const auto* t = std::get_if<potential::Tabulated>(&spec_)) {
    check_tabulated(*t, grid_);
    const auto& v = t->values;
    const std::size_t n = v.size();
    const double dx = grid_.dx();
    table_gradient_.resize(n);
    table_gradient_[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
    table_gradient_[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) table_gradient_[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
  }
}

double ClassicalPotential::interpolate(const std::vector<double>& table, double x) const {
  if (!grid_.contains(x)) {
    std::ostringstream msg;
    msg << "position x=" << x << " left the tabulated potential domain [" << grid_.x_min() << ", "
        << grid_.x_max() << "]";
    throw DomainError(msg.str());
  }
  const double s = (x - grid_.x_min()) / grid_.dx();
  std::size_t i = static_cast<std::size_t>(s);
  if (i >= grid_.size() - 1) i = grid_.size() - 2;
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * table[i] + f * table[i + 1];
}

double ClassicalPotential::value(double x) const {
  return std::visit(overloaded{
                        [](const potential::Free&) { return 0.0; },
                        [](const potential::InfiniteWell&) { return 0.0; },
                        [&](const potential::Harmonic& h) {
                          return 0.5 * constants_.mass * h.omega * h.omega * (x * x);
                        },
                        [&](const potential::SmoothBarrier& b) {
                          return b.height * sech2((x - b.center) / b.width);
                        },
                        [&](const potential::Tabulated& t) { return interpolate(t.values, x); },
                    },
                    spec_);
}

double ClassicalPotential::gradient(double x) const {
  return std::visit(overloaded{
                        [](const potential::Free&) { return 0.0; },
                        [](const potential::InfiniteWell&) { return 0.0; },
                        [&](const potential::Harmonic& h) {
                          return constants_.mass * h.omega * h.omega * x;
                        },
                        [&](const potential::SmoothBarrier& b) {
                          const double u = (x - b.center) / b.width;
                          return -2.0 * b.height * sech2(u) * std::tanh(u) / b.width;
                        },
                        [&](const potential::Tabulated&) { return interpolate(table_gradient_, x); },
                    },
                    spec_);
}

}  // namespace qhj
