#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qhj/grid.hpp"

namespace qhj {

namespace potential {

struct Free {};

struct Harmonic {
  double omega = 1.0;
};

/// Free inside the grid; the walls come from the Dirichlet ends of the grid.
struct InfiniteWell {};

/// height * sech^2((x - center) / width)
struct SmoothBarrier {
  double height = 1.0;
  double width = 1.0;
  double center = 0.0;
};

/// One value per grid node.
struct Tabulated {
  std::vector<double> values;
};

}  // namespace potential

using PotentialSpec = std::variant<potential::Free, potential::Harmonic, potential::InfiniteWell,
                                   potential::SmoothBarrier, potential::Tabulated>;

std::string potential_kind_name(const PotentialSpec& spec);

RealField eval_potential(const PotentialSpec& spec, const Grid1D& grid,
                         const PhysicalConstants& constants);

/// Thrown when a classical trajectory leaves the domain on which a
/// tabulated potential is defined.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Off-grid evaluation of V and dV/dx for classical integration.
///
/// Catalog kinds use their closed forms. Tabulated potentials are linearly
/// interpolated; the gradient is the linear interpolant of the central-difference
/// derivative of the table.
class ClassicalPotential {
 public:
  ClassicalPotential(PotentialSpec spec, const Grid1D& grid, const PhysicalConstants& constants);

  double value(double x) const;
  double gradient(double x) const;

  const PotentialSpec& spec() const { return spec_; }
  const Grid1D& grid() const { return grid_; }
  bool bounded_domain() const { return std::holds_alternative<potential::Tabulated>(spec_); }

 private:
  double interpolate(const std::vector<double>& table, double x) const;

  PotentialSpec spec_;
  Grid1D grid_;
  PhysicalConstants constants_;
  std::vector<double> table_gradient_;
};

}  // namespace qhj
