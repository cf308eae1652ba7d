#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qhj/grid.hpp"
#include "qhj/potential.hpp"
#include "qhj/tolerances.hpp"

namespace qhj {

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenConfig {
  std::size_t k = 5;
};

struct EvolveConfig {
  std::string initial = "gaussian";  // gaussian | eigenstate | csv
  std::size_t state = 0;
  double center = 2.0;
  double momentum = 0.0;
  double width = 0.7071067811865476;
  std::filesystem::path file;
  double dt = 1e-3;
  std::size_t steps = 6283;
  std::size_t stride = 100;
};

struct MadelungConfig {
  std::string input = "eigenstate";  // plane_wave | eigenstate | scattering | gaussian | csv
  std::size_t state = 0;
  double energy = 0.5;
  double center = 0.0;
  double momentum = 1.0;
  double width = 1.0;
  std::filesystem::path file;
  bool expect_inertial = false;  // assert V_q = 0 (implied for plane_wave)
};

struct HjConfig {
  double x0 = 1.0;
  double p0 = 0.0;
  double dt = 1e-3;
  std::size_t steps = 6283;
  std::string initial_action = "rest";  // rest | free
  double energy = 0.5;
  std::size_t family_steps = 1000;
  std::size_t stride = 100;
};

struct HjCompareConfig {
  std::string scenario = "free";  // free | eigenstate
  double energy = 0.5;
  std::size_t state = 0;
  double dt = 1e-2;
  std::size_t slices = 5;
};

struct SuperposeConfig {
  std::size_t k = 8;
  std::string weights = "gaussian";  // gaussian | equal | file
  double center = 3.5;
  double sigma = 1.5;
  std::filesystem::path file;  // n, re, im
};

struct EnsembleConfig {
  std::string distribution = "superposition";  // superposition | uniform | table
  std::string variable = "energy";             // energy | offset
  std::vector<double> values;
  std::vector<double> probabilities;
  bool compare = true;  // compare energies with the superposition distribution
  std::size_t n_samples = 100000;
  double x_start = 0.0;
  double dt = 1e-3;
  double t_final = 1.0;
  std::size_t histogram_stride = 100;
};

/// Everything a subcommand needs. Loaded from an INI file whose sections map
/// to dotted keys (grid.x_min, potential.kind, ...).
struct RunConfig {
  std::filesystem::path source;
  double x_min = -12.0;
  double x_max = 12.0;
  std::size_t n_points = 2401;
  PhysicalConstants constants;
  PotentialSpec potential = potential::Harmonic{1.0};
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 20240601;
  ToleranceTable tolerances;

  EigenConfig eigen;
  EvolveConfig evolve;
  MadelungConfig madelung;
  HjConfig hj;
  HjCompareConfig hj_compare;
  SuperposeConfig superpose;
  EnsembleConfig ensemble;

  Grid1D grid() const { return build_grid(x_min, x_max, n_points); }
};

/// Parses a config file. Unknown keys, bad values and missing referenced files
/// raise ConfigError with the offending key in the message. Relative file
/// paths are resolved against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

/// Defaults only, as if an empty file had been loaded.
RunConfig default_config();

/// Two-column CSV (x, V) that must lie on `grid`. A header line is allowed.
std::vector<double> read_tabulated_potential(const std::filesystem::path& path, const Grid1D& grid);

}  // namespace qhj
