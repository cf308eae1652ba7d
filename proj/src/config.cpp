#include "qhj/config.hpp"

#include <boost/program_options.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qhj/csv.hpp"

namespace po = boost::program_options;

namespace qhj {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const std::string& why) {
  throw ConfigError("key '" + key + "': value '" + text + "' " + why);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text, "is not a number");
  if (!std::isfinite(v)) bad_value(key, text, "is not finite");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    bad_value(key, text, "is not a non-negative integer");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  bad_value(key, text, "is not a boolean (true/false)");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, item));
  if (out.empty()) bad_value(key, text, "is an empty list");
  return out;
}

std::string one_of(const std::string& key, const std::string& text, std::initializer_list<const char*> choices) {
  const std::string t = trim(text);
  std::string list;
  for (const char* c : choices) {
    if (t == c) return t;
    list += list.empty() ? c : std::string(", ") + c;
  }
  bad_value(key, text, "is not one of {" + list + "}");
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{
        "grid.x_min", "grid.x_max", "grid.n_points",
        "constants.hbar", "constants.mass",
        "potential.kind", "potential.omega", "potential.height", "potential.width", "potential.center",
        "potential.file",
        "output.dir",
        "run.seed",
        "eigen.k",
        "evolve.initial", "evolve.state", "evolve.center", "evolve.momentum", "evolve.width", "evolve.file",
        "evolve.dt", "evolve.steps", "evolve.stride",
        "madelung.input", "madelung.state", "madelung.energy", "madelung.center", "madelung.momentum",
        "madelung.width", "madelung.file", "madelung.expect_inertial",
        "hj.x0", "hj.p0", "hj.dt", "hj.steps", "hj.initial_action", "hj.energy", "hj.family_steps", "hj.stride",
        "hj_compare.scenario", "hj_compare.energy", "hj_compare.state", "hj_compare.dt", "hj_compare.slices",
        "superpose.k", "superpose.weights", "superpose.center", "superpose.sigma", "superpose.file",
        "ensemble.distribution", "ensemble.variable", "ensemble.values", "ensemble.probabilities",
        "ensemble.compare", "ensemble.n_samples", "ensemble.x_start", "ensemble.dt", "ensemble.t_final",
        "ensemble.histogram_stride",
    };
    for (const auto& [name, entry] : ToleranceTable::defaults()) k.push_back("tolerance." + name);
    return k;
  }();
  return keys;
}

std::filesystem::path existing_file(const std::string& key, const std::string& text,
                                    const std::filesystem::path& base) {
  std::filesystem::path p = trim(text);
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::is_regular_file(p)) {
    throw ConfigError("key '" + key + "': file '" + p.string() + "' does not exist");
  }
  return p;
}

// Line number of every "section.key" and of every raw line, for diagnostics.
struct SourceLines {
  std::map<std::string, std::size_t> keys;
  std::vector<std::string> raw;

  explicit SourceLines(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line, section;
    while (std::getline(in, line)) {
      raw.push_back(line);
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(t.substr(0, eq));
      keys.emplace(section.empty() ? key : section + "." + key, raw.size());
    }
  }

  // "file:line: message" when the message names a key or quotes a line.
  std::string locate(const std::filesystem::path& path, const std::string& message) const {
    for (const char* marker : {"key '", "option '"}) {
      const auto at = message.find(marker);
      if (at == std::string::npos) continue;
      const auto begin = at + std::string(marker).size();
      const auto end = message.find('\'', begin);
      const auto it = keys.find(message.substr(begin, end - begin));
      if (it != keys.end()) return path.string() + ":" + std::to_string(it->second) + ": " + message;
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const std::string t = trim(raw[i]);
      if (!t.empty() && message.find("'" + t + "'") != std::string::npos) {
        return path.string() + ":" + std::to_string(i + 1) + ": " + message;
      }
    }
    return path.string() + ": " + message;
  }
};

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");

  const SourceLines lines(path);
  po::options_description desc;
  for (const auto& key : known_keys()) desc.add_options()(key.c_str(), po::value<std::string>());

  std::map<std::string, std::string> kv;
  try {
    po::variables_map vm;
    po::store(po::parse_config_file(in, desc, false), vm);
    for (const auto& [key, value] : vm) kv[key] = value.as<std::string>();
  } catch (const po::error& e) {
    throw ConfigError(lines.locate(path, e.what()));
  }

  RunConfig cfg;
  cfg.source = path;
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    used.insert(key);
    return it->second;
  };
  auto num = [&](const std::string& key, double& target) {
    if (auto v = get(key)) target = to_double(key, *v);
  };
  auto count = [&](const std::string& key, std::size_t& target) {
    if (auto v = get(key)) target = static_cast<std::size_t>(to_unsigned(key, *v));
  };

  try {
    num("grid.x_min", cfg.x_min);
    num("grid.x_max", cfg.x_max);
    count("grid.n_points", cfg.n_points);
    num("constants.hbar", cfg.constants.hbar);
    num("constants.mass", cfg.constants.mass);
    try {
      cfg.constants.validate();
      (void)cfg.grid();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }

    const std::string kind = one_of("potential.kind", get("potential.kind").value_or("harmonic"),
                                    {"free", "harmonic", "infinite_well", "smooth_barrier", "tabulated"});
    if (kind == "free") {
      cfg.potential = potential::Free{};
    } else if (kind == "harmonic") {
      potential::Harmonic h;
      num("potential.omega", h.omega);
      positive("potential.omega", h.omega);
      cfg.potential = h;
    } else if (kind == "infinite_well") {
      cfg.potential = potential::InfiniteWell{};
    } else if (kind == "smooth_barrier") {
      potential::SmoothBarrier b;
      num("potential.height", b.height);
      num("potential.width", b.width);
      num("potential.center", b.center);
      positive("potential.width", b.width);
      cfg.potential = b;
    } else {
      const auto file = get("potential.file");
      if (!file) throw ConfigError("key 'potential.file' is required when potential.kind = tabulated");
      cfg.potential = potential::Tabulated{read_tabulated_potential(existing_file("potential.file", *file, base), cfg.grid())};
    }

    if (auto v = get("output.dir")) cfg.output_dir = trim(*v);
    if (auto v = get("run.seed")) cfg.seed = to_unsigned("run.seed", *v);

    count("eigen.k", cfg.eigen.k);

    auto& ev = cfg.evolve;
    if (auto v = get("evolve.initial")) ev.initial = one_of("evolve.initial", *v, {"gaussian", "eigenstate", "csv"});
    count("evolve.state", ev.state);
    num("evolve.center", ev.center);
    num("evolve.momentum", ev.momentum);
    num("evolve.width", ev.width);
    positive("evolve.width", ev.width);
    if (auto v = get("evolve.file")) ev.file = existing_file("evolve.file", *v, base);
    if (ev.initial == "csv" && ev.file.empty()) throw ConfigError("key 'evolve.file' is required when evolve.initial = csv");
    num("evolve.dt", ev.dt);
    positive("evolve.dt", ev.dt);
    count("evolve.steps", ev.steps);
    count("evolve.stride", ev.stride);
    if (ev.stride == 0) throw ConfigError("key 'evolve.stride' must be at least 1");

    auto& md = cfg.madelung;
    if (auto v = get("madelung.input")) {
      md.input = one_of("madelung.input", *v, {"plane_wave", "eigenstate", "scattering", "gaussian", "csv"});
    }
    count("madelung.state", md.state);
    num("madelung.energy", md.energy);
    num("madelung.center", md.center);
    num("madelung.momentum", md.momentum);
    num("madelung.width", md.width);
    positive("madelung.width", md.width);
    if (auto v = get("madelung.file")) md.file = existing_file("madelung.file", *v, base);
    if (auto v = get("madelung.expect_inertial")) md.expect_inertial = to_bool("madelung.expect_inertial", *v);
    if (md.input == "csv" && md.file.empty()) throw ConfigError("key 'madelung.file' is required when madelung.input = csv");

    auto& hj = cfg.hj;
    num("hj.x0", hj.x0);
    num("hj.p0", hj.p0);
    num("hj.dt", hj.dt);
    positive("hj.dt", hj.dt);
    count("hj.steps", hj.steps);
    if (auto v = get("hj.initial_action")) hj.initial_action = one_of("hj.initial_action", *v, {"rest", "free"});
    num("hj.energy", hj.energy);
    count("hj.family_steps", hj.family_steps);
    count("hj.stride", hj.stride);
    if (hj.stride == 0) throw ConfigError("key 'hj.stride' must be at least 1");

    auto& hc = cfg.hj_compare;
    if (auto v = get("hj_compare.scenario")) hc.scenario = one_of("hj_compare.scenario", *v, {"free", "eigenstate"});
    num("hj_compare.energy", hc.energy);
    count("hj_compare.state", hc.state);
    num("hj_compare.dt", hc.dt);
    positive("hj_compare.dt", hc.dt);
    count("hj_compare.slices", hc.slices);

    auto& sp = cfg.superpose;
    count("superpose.k", sp.k);
    if (auto v = get("superpose.weights")) sp.weights = one_of("superpose.weights", *v, {"gaussian", "equal", "file"});
    num("superpose.center", sp.center);
    num("superpose.sigma", sp.sigma);
    positive("superpose.sigma", sp.sigma);
    if (auto v = get("superpose.file")) sp.file = existing_file("superpose.file", *v, base);
    if (sp.weights == "file" && sp.file.empty()) throw ConfigError("key 'superpose.file' is required when superpose.weights = file");

    auto& en = cfg.ensemble;
    if (auto v = get("ensemble.distribution")) {
      en.distribution = one_of("ensemble.distribution", *v, {"superposition", "uniform", "table"});
    }
    if (auto v = get("ensemble.variable")) en.variable = one_of("ensemble.variable", *v, {"energy", "offset"});
    if (auto v = get("ensemble.values")) en.values = to_list("ensemble.values", *v);
    if (auto v = get("ensemble.probabilities")) en.probabilities = to_list("ensemble.probabilities", *v);
    if (en.distribution == "table" && (en.values.empty() || en.values.size() != en.probabilities.size())) {
      throw ConfigError("keys 'ensemble.values' and 'ensemble.probabilities' must be equal-length lists when "
                        "ensemble.distribution = table");
    }
    if (en.distribution != "table" && (!en.values.empty() || !en.probabilities.empty())) {
      throw ConfigError("keys 'ensemble.values' and 'ensemble.probabilities' are only used with ensemble.distribution = table");
    }
    if (en.variable == "offset" && en.distribution != "table") {
      throw ConfigError("key 'ensemble.variable' = offset needs ensemble.distribution = table");
    }
    if (auto v = get("ensemble.compare")) en.compare = to_bool("ensemble.compare", *v);
    count("ensemble.n_samples", en.n_samples);
    num("ensemble.x_start", en.x_start);
    num("ensemble.dt", en.dt);
    positive("ensemble.dt", en.dt);
    num("ensemble.t_final", en.t_final);
    count("ensemble.histogram_stride", en.histogram_stride);
    if (en.histogram_stride == 0) throw ConfigError("key 'ensemble.histogram_stride' must be at least 1");

    for (const auto& [name, entry] : ToleranceTable::defaults()) {
      const std::string key = "tolerance." + name;
      if (auto v = get(key)) {
        try {
          cfg.tolerances.set(name, to_double(key, *v));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("key '") + key + "': " + e.what());
        }
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(lines.locate(path, e.what()));
  }

  // Parameters that belong to a different potential kind are rejected.
  for (const auto& [key, value] : kv) {
    if (!used.contains(key)) {
      throw ConfigError(lines.locate(path, "key '" + key + "' is not used with potential.kind = " +
                                                potential_kind_name(cfg.potential)));
    }
  }
  return cfg;
}

std::vector<double> read_tabulated_potential(const std::filesystem::path& path, const Grid1D& grid) {
  std::vector<CsvRow> table;
  try {
    table = read_numeric_csv(path, 2);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (table.size() != grid.size()) {
    throw ConfigError(path.string() + ": " + std::to_string(table.size()) + " rows, grid has " +
                      std::to_string(grid.size()) + " points");
  }
  std::vector<double> v(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (std::abs(table[i].values[0] - grid.x(i)) > 1e-9 * grid.dx()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << path.string() << ":" << table[i].line << ": x = " << table[i].values[0] << " does not match grid point "
          << grid.x(i);
      throw ConfigError(msg.str());
    }
    v[i] = table[i].values[1];
  }
  return v;
}

}  // namespace qhj
