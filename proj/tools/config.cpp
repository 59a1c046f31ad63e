#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "conespec/errors.hpp"

namespace conespec::cli {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kSchema{
    {"geometry", {"cross_section", "n", "v0", "l_max", "length", "k_max", "modes", "volume", "v0_samples", "grid"}},
    {"perturbation", {"kind", "center", "width", "amplitude", "table"}},
    {"numerics", {"tol", "r_match", "r_min", "rel_tol", "mode_cap"}},
    {"task",
     {"lambda", "pairs", "sign", "kind", "lambda_c", "t", "fit_lo", "fit_hi", "n_lambda", "r_grid", "nu", "r_box",
      "h", "sigma", "expression", "geodesic", "y0", "eta0", "leaf_grid", "step", "series"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty() && std::isfinite(x)) return x;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
}

long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<long>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::vector<double> words(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(to_double(key, w));
  return out;
}

TabulatedPerturbation read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open perturbation table '" + path + "'");
  TabulatedPerturbation t;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split(line, ',');
    if (cols.size() != 2) throw ConfigError("perturbation table: expected two columns r, W: '" + line + "'");
    if (t.r.empty() && !std::isdigit(static_cast<unsigned char>(cols[0][0])) && cols[0][0] != '.' &&
        cols[0][0] != '-')
      continue;  // header
    t.r.push_back(to_double("table r", cols[0]));
    t.w.push_back(to_double("table W", cols[1]));
  }
  return t;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double("list", item));
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  if (head == "log" || head == "lin" || head == "dyadic") {
    std::string rest;
    std::getline(in, rest);
    const auto v = words("grid", rest);
    if (head == "dyadic") {
      if (v.size() != 2 || !(v[0] > 0) || !(v[1] >= v[0])) throw ConfigError("grid: 'dyadic t0 t1' with 0 < t0 <= t1");
      return dyadic_times(v[0], v[1]);
    }
    if (v.size() != 3 || v[2] < 2 || v[2] != std::floor(v[2]))
      throw ConfigError("grid: '" + head + " lo hi count' with count >= 2");
    const int n = static_cast<int>(v[2]);
    if (head == "log" && !(v[0] > 0 && v[1] > 0)) throw ConfigError("grid: log grid needs positive ends");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double f = double(i) / (n - 1);
      out.push_back(head == "log" ? v[0] * std::pow(v[1] / v[0], f) : v[0] + (v[1] - v[0]) * f);
    }
    return out;
  }
  return parse_list(text);
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    const auto schema = kSchema.find(section);
    if (schema == kSchema.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!schema->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      c.echo[section][key] = trim(value.data());
    }
  }
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto s = c.echo.find(section);
    if (s == c.echo.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  };
  auto num = [&](const std::string& s, const std::string& k, double def) {
    const auto v = get(s, k);
    return v ? to_double(k, *v) : def;
  };
  auto integer = [&](const std::string& s, const std::string& k, long def) {
    const auto v = get(s, k);
    return v ? to_int(k, *v) : def;
  };

  const std::string cs = get("geometry", "cross_section").value_or("sphere");
  if (cs == "sphere") {
    c.geometry = SphereSpec{int(integer("geometry", "n", 3)), num("geometry", "v0", 0.0),
                            int(integer("geometry", "l_max", 200))};
  } else if (cs == "circle") {
    c.geometry = CircleSpec{num("geometry", "length", 2 * std::numbers::pi), num("geometry", "v0", 1.0),
                            int(integer("geometry", "k_max", 200))};
  } else if (cs == "custom") {
    CustomSpec spec{int(integer("geometry", "n", 3)), {}, num("geometry", "volume", 1.0)};
    for (const auto& item : split(get("geometry", "modes").value_or(""), ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 2) throw ConfigError("config: custom modes are 'nu:multiplicity'");
      spec.modes.push_back({to_double("modes", parts[0]), int(to_int("modes", parts[1]))});
    }
    c.geometry = spec;
  } else if (cs == "discretized_circle") {
    c.geometry = DiscretizedCircleSpec{parse_list(get("geometry", "v0_samples").value_or("1")),
                                       int(integer("geometry", "grid", 256))};
  } else {
    throw ConfigError("config: unknown cross_section '" + cs + "'");
  }

  const std::string pk = get("perturbation", "kind").value_or("none");
  if (pk == "bump") {
    c.perturbation = BumpPerturbation{num("perturbation", "center", 1.0), num("perturbation", "width", 0.5),
                                      num("perturbation", "amplitude", 0.0)};
  } else if (pk == "table") {
    const auto file = get("perturbation", "table");
    if (!file) throw ConfigError("config: perturbation kind 'table' needs 'table = path'");
    std::filesystem::path p(*file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.perturbation = read_table(p.string());
  } else if (pk != "none") {
    throw ConfigError("config: unknown perturbation kind '" + pk + "'");
  }
  // Validates the perturbation eagerly.
  (void)PerturbationFunction(c.perturbation);

  c.tol = num("numerics", "tol", 1e-12);
  c.r_match = num("numerics", "r_match", 0.0);
  c.r_min = num("numerics", "r_min", 0.0);
  c.truncation.rel_tol = num("numerics", "rel_tol", 1e-12);
  c.truncation.mode_cap = std::size_t(integer("numerics", "mode_cap", 5000));
  if (!(c.tol > 0) || !(c.truncation.rel_tol > 0)) throw ConfigError("config: tolerances must be positive");

  TaskConfig& t = c.task;
  if (auto v = get("task", "lambda")) t.lambda = parse_grid(*v);
  for (double l : t.lambda)
    if (!(l > 0)) throw ConfigError("config: lambda values must be positive");
  if (auto v = get("task", "pairs")) {
    for (const auto& quad : split(*v, ';')) {
      const auto x = words("pairs", quad);
      if (x.size() != 4) throw ConfigError("config: each pair is 'r phi r_prime phi_prime'");
      if (!(x[0] > 0 && x[2] > 0)) throw ConfigError("config: radii must be positive");
      t.pairs.push_back({{x[0], x[1]}, {x[2], x[3]}});
    }
  }
  t.sign = get("task", "sign").value_or("outgoing");
  if (t.sign != "outgoing" && t.sign != "incoming") throw ConfigError("config: sign is outgoing or incoming");
  t.kind = get("task", "kind").value_or("wave_sin");
  (void)propagator_kind_from_string(t.kind);
  t.lambda_c = num("task", "lambda_c", 1.0);
  if (!(t.lambda_c > 0)) throw ConfigError("config: lambda_c must be positive");
  if (auto v = get("task", "t")) t.t = parse_grid(*v);
  t.fit_lo = num("task", "fit_lo", 0.0);
  t.fit_hi = num("task", "fit_hi", 0.0);
  t.n_lambda = std::size_t(integer("task", "n_lambda", 0));
  t.r_grid = parse_grid(get("task", "r_grid").value_or("log 0.01 100 41"));
  if (auto v = get("task", "nu")) t.nu = to_double("nu", *v);
  t.r_box = num("task", "r_box", 400.0);
  t.h = num("task", "h", 0.05);
  t.sigma = num("task", "sigma", 0.0);
  t.expression = get("task", "expression").value_or("");
  t.geodesic = get("task", "geodesic").value_or("sphere");
  if (t.geodesic != "sphere" && t.geodesic != "torus") throw ConfigError("config: geodesic is sphere or torus");
  if (auto v = get("task", "y0")) t.y0 = parse_list(*v);
  if (auto v = get("task", "eta0")) t.eta0 = parse_list(*v);
  t.leaf_grid = int(integer("task", "leaf_grid", 20));
  if (t.leaf_grid < 1) throw ConfigError("config: leaf_grid must be >= 1");
  t.step = num("task", "step", 1e-4);
  if (auto v = get("task", "series")) {
    std::filesystem::path p(*v);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    t.series = p.string();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
  c.path = path;
  return c;
}

void apply_tol(RunConfig& c, double tol) {
  if (!(tol > 0)) throw ConfigError("--tol must be positive");
  c.tol = tol;
  c.truncation.rel_tol = tol;
}

void apply_modes(RunConfig& c, int l_max) {
  if (l_max < 0) throw ConfigError("--modes must be >= 0");
  if (auto* s = std::get_if<SphereSpec>(&c.geometry)) s->l_max = l_max;
  if (auto* s = std::get_if<CircleSpec>(&c.geometry)) s->k_max = l_max;
}

ModeSpectrum RunConfig::spectrum() const { return check_hyp2(geometry); }

RadialModel RunConfig::model() const {
  RadialModel m{spectrum(), perturbation};
  m.tol = tol;
  m.r_match = r_match;
  m.r_min = r_min;
  return m;
}

}  // namespace conespec::cli
