#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "qhj/config.hpp"
#include "qhj/csv.hpp"

using namespace qhj;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qhj_config_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string error_of(const fs::path& p) {
  try {
    load_config(p);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("empty config gives the defaults", "[config]") {
  TempDir d;
  const RunConfig cfg = load_config(d.write("empty.ini", ""));
  const RunConfig def = default_config();
  CHECK(cfg.n_points == def.n_points);
  CHECK(cfg.seed == def.seed);
  CHECK(std::holds_alternative<potential::Harmonic>(cfg.potential));
  CHECK(cfg.eigen.k == 5);
  CHECK(cfg.tolerances["eigen.level_error"] == 1e-4);
}

TEST_CASE("sections map onto run parameters", "[config]") {
  TempDir d;
  const RunConfig cfg = load_config(d.write("c.ini", R"(
# comment
[grid]
x_min = -5
x_max = 5
n_points = 101
[constants]
hbar = 2
mass = 0.5
[potential]
kind = smooth_barrier
height = 3
width = 0.5
center = 1
[run]
seed = 7
[ensemble]
distribution = table
values = 1, 2.5,4
probabilities = 0.2,0.3, 0.5
compare = false
[tolerance]
eigen.residual = 1e-6
)"));
  CHECK(cfg.grid().dx() == Catch::Approx(0.1));
  CHECK(cfg.constants.hbar == 2.0);
  const auto& b = std::get<potential::SmoothBarrier>(cfg.potential);
  CHECK(b.height == 3.0);
  CHECK(b.width == 0.5);
  CHECK(cfg.seed == 7);
  CHECK(cfg.ensemble.values == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(cfg.ensemble.probabilities.size() == 3);
  CHECK_FALSE(cfg.ensemble.compare);
  CHECK(cfg.tolerances["eigen.residual"] == 1e-6);
}

TEST_CASE("malformed configs name the line and key", "[config]") {
  TempDir d;
  CHECK_THAT(error_of(d.write("a.ini", "[eigen]\nkk = 3\n")),
             Catch::Matchers::ContainsSubstring("a.ini:2") && Catch::Matchers::ContainsSubstring("eigen.kk"));
  CHECK_THAT(error_of(d.write("b.ini", "[grid]\n\nn_points = ten\n")),
             Catch::Matchers::ContainsSubstring("b.ini:3") && Catch::Matchers::ContainsSubstring("grid.n_points"));
  CHECK_THAT(error_of(d.write("c.ini", "[eigen]\nk = -1\n")), Catch::Matchers::ContainsSubstring("eigen.k"));
  CHECK_THAT(error_of(d.write("d.ini", "[potential]\nkind = square\n")),
             Catch::Matchers::ContainsSubstring("potential.kind"));
  CHECK_THAT(error_of(d.write("e.ini", "[potential]\nkind = free\nomega = 1\n")),
             Catch::Matchers::ContainsSubstring("e.ini:3"));
  CHECK_THAT(error_of(d.write("f.ini", "[tolerance]\nmadelung.phase_residual = 0\n")),
             Catch::Matchers::ContainsSubstring("must be positive"));
  CHECK_THAT(error_of(d.write("g.ini", "[tolerance]\nno.such = 1\n")), Catch::Matchers::ContainsSubstring("no.such"));
  CHECK_THAT(error_of(d.write("h.ini", "[constants]\nmass = 0\n")), Catch::Matchers::ContainsSubstring("mass"));
  CHECK_THAT(error_of(d.write("i.ini", "[grid]\nx_min = 1\nx_max = 0\n")), Catch::Matchers::ContainsSubstring("x_max"));
  CHECK_THAT(error_of(d.write("j.ini", "[madelung]\ninput = csv\n")), Catch::Matchers::ContainsSubstring("madelung.file"));
  CHECK_THAT(error_of(d.write("k.ini", "[ensemble]\ndistribution = table\nvalues = 1,2\nprobabilities = 1\n")),
             Catch::Matchers::ContainsSubstring("equal-length"));
  CHECK_THAT(error_of(d.write("l.ini", "[run]\nseed = 1\nseed = 2\n")), Catch::Matchers::ContainsSubstring("seed"));
  CHECK_THROWS_AS(load_config(d.path / "missing.ini"), ConfigError);
}

TEST_CASE("referenced files resolve against the config directory", "[config]") {
  TempDir d;
  fs::create_directories(d.path / "sub");
  d.write("psi.csv", "x,re,im\n0,1,0\n0.5,1,0\n1,1,0\n");
  const RunConfig cfg = load_config(d.write("sub/c.ini", "[madelung]\ninput = csv\nfile = ../psi.csv\n"));
  CHECK(fs::equivalent(cfg.madelung.file, d.path / "psi.csv"));
  CHECK_THAT(error_of(d.write("sub/m.ini", "[evolve]\ninitial = csv\nfile = nope.csv\n")),
             Catch::Matchers::ContainsSubstring("does not exist"));
}

TEST_CASE("tabulated potential must sit on the grid", "[config]") {
  TempDir d;
  d.write("v.csv", "x,V\n0,1\n0.5,2\n1,3\n");
  d.write("w.csv", "0,1\n0.4,2\n1,3\n");
  const RunConfig cfg = load_config(
      d.write("ok.ini", "[grid]\nx_min = 0\nx_max = 1\nn_points = 3\n[potential]\nkind = tabulated\nfile = v.csv\n"));
  CHECK(std::get<potential::Tabulated>(cfg.potential).values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THAT(error_of(d.write("bad.ini",
                              "[grid]\nx_min = 0\nx_max = 1\nn_points = 3\n[potential]\nkind = tabulated\nfile = w.csv\n")),
             Catch::Matchers::ContainsSubstring("w.csv:2"));
  CHECK_THAT(error_of(d.write("short.ini",
                              "[grid]\nx_min = 0\nx_max = 1\nn_points = 5\n[potential]\nkind = tabulated\nfile = v.csv\n")),
             Catch::Matchers::ContainsSubstring("3 rows"));
}

TEST_CASE("tolerance scale touches upper bounds only", "[config]") {
  ToleranceTable t;
  t.set_scale(10.0);
  CHECK(t["madelung.phase_residual"] == Catch::Approx(1e-2));
  CHECK(t["madelung.convergence_order"] == 1.7);
  CHECK(t["eigen.runtime_s"] == 10.0);
  t.set("madelung.phase_residual", 2e-3);
  CHECK(t["madelung.phase_residual"] == Catch::Approx(2e-2));
  CHECK_THROWS_AS(t.set_scale(0.0), std::invalid_argument);
  CHECK_THROWS_AS(t["nope"], std::out_of_range);
}

TEST_CASE("csv round trip", "[csv]") {
  TempDir d;
  const Grid1D g = build_grid(-1.0, 1.0, 5);
  {
    const std::vector<std::string> header{"x", "re", "im"};
    CsvWriter w(d.path / "psi.csv", header);
    for (std::size_t i = 0; i < g.size(); ++i) w.row({g.x(i), 0.1 * static_cast<double>(i), 1.0 / 3.0});
    CHECK_THROWS_AS(w.row({1.0}), std::logic_error);
  }
  const WaveFunction psi = read_wavefunction_csv(d.path / "psi.csv");
  CHECK(psi.grid == g);
  CHECK(psi.values[3] == std::complex<double>(0.1 * 3.0, 1.0 / 3.0));
}

TEST_CASE("csv reader diagnostics", "[csv]") {
  TempDir d;
  d.write("a.csv", "x,re,im\n0,1,0\n1,1\n");
  d.write("b.csv", "0,1,0\n1,x,0\n");
  d.write("c.csv", "0,1,0\n0.3,1,0\n1,1,0\n");
  CHECK_THROWS_WITH(read_numeric_csv(d.path / "a.csv", 3), Catch::Matchers::ContainsSubstring("a.csv:3"));
  CHECK_THROWS_WITH(read_numeric_csv(d.path / "b.csv", 3), Catch::Matchers::ContainsSubstring("b.csv:2"));
  CHECK_THROWS_WITH(read_wavefunction_csv(d.path / "c.csv"), Catch::Matchers::ContainsSubstring("uniform"));
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
}
