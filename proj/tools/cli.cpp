#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "conespec/errors.hpp"
#include "conespec/index_sets.hpp"
#include "conespec/legendrian_geom.hpp"
#include "conespec/oracle.hpp"
#include "json.hpp"

#ifndef CONESPEC_VERSION
#define CONESPEC_VERSION "0.0.0"
#endif

namespace conespec::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr int kSchemaVersion = 1;

struct Flags {
  std::string config;
  std::string out = ".";
  unsigned threads = 1;
  bool fit = false;
  double tol = 0.0;
  int modes = -1;
  std::string kind;
  std::string expr;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) { row_strings(header); }
  void row(const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double x : v) s.push_back(fmt(x));
    row_strings(s);
  }
  void row_strings(const std::vector<std::string>& v) {
    if (v.size() != cols_) throw std::logic_error("csv: column count mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) text_ << (i ? "," : "") << v[i];
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }

 private:
  std::size_t cols_;
  std::ostringstream text_;
};

// Output bundle for one run.
struct Output {
  std::string name;
  Json summary;
  std::string csv;
  std::string plot;
  std::string stdout_text;
  Json checks = Json::array();
  void check(const std::string& what, bool passed, double measured, double expected, double tolerance) {
    checks.push_back({{"name", what},
                      {"passed", passed},
                      {"measured", measured},
                      {"expected", expected},
                      {"tolerance", tolerance}});
  }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  f << text;
}

std::string gnuplot(const std::string& name, const std::string& using_cols, bool loglog, const std::string& xlabel,
                    const std::string& ylabel) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set terminal pngcairo size 900,600\n"
    << "set output '" << name << ".png'\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n";
  if (loglog) s << "set logscale xy\n";
  s << "plot '" << name << ".csv' using " << using_cols << " with linespoints\n";
  return s.str();
}

// Evaluates f(i) for i < n on `threads` workers; results in index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(n, 1))));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < n; i += threads) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

const std::vector<PointPair>& require_pairs(const RunConfig& c) {
  if (c.task.pairs.empty()) throw ConfigError("[task] pairs is required for this subcommand");
  return c.task.pairs;
}

const std::vector<double>& require_lambda(const RunConfig& c) {
  if (c.task.lambda.empty()) throw ConfigError("[task] lambda is required for this subcommand");
  return c.task.lambda;
}

void run_eigens(const RunConfig& c, const Flags&, Output& o) {
  const ModeSpectrum s = c.spectrum();
  Csv csv({"j", "nu", "multiplicity", "diagonal"});
  for (std::size_t j = 0; j < s.size(); ++j)
    csv.row({double(j), s.mode(j).nu, double(s.mode(j).multiplicity), s.mode(j).diagonal});
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:2", false, "j", "nu_j");
  o.summary["results"] = {{"n", s.dimension()},
                          {"volume", s.volume()},
                          {"modes", s.size()},
                          {"nu0", s.nu0()},
                          {"nu1", std::isfinite(s.nu1()) ? Json(s.nu1()) : Json(nullptr)},
                          {"nu0_multiplicity", s.mode(0).multiplicity}};
  o.check("hyp2: nu0^2 > 0", s.nu0() > 0, s.nu0() * s.nu0(), 0.0, 0.0);
  o.stdout_text = "nu0 = " + fmt(s.nu0()) + ", " + std::to_string(s.size()) + " modes\n";
}

void run_resolvent(const RunConfig& c, const Flags& f, Output& o) {
  const RadialModel model = c.model();
  const bool perturbed = !std::holds_alternative<std::monostate>(model.w_pert);
  const Sign sign = c.task.sign == "incoming" ? Sign::incoming : Sign::outgoing;
  const auto& lambdas = require_lambda(c);
  const auto& pairs = require_pairs(c);
  const std::size_t n = lambdas.size() * pairs.size();
  const auto samples = parallel_map<KernelSample>(n, f.threads, [&](std::size_t i) {
    const double l = lambdas[i / pairs.size()];
    const auto& p = pairs[i % pairs.size()];
    return perturbed ? perturbed_resolvent(model, l, p.left, p.right, sign, c.truncation)
                     : resolvent_kernel(model.spectrum, l, p.left, p.right, sign, c.truncation);
  });
  Csv csv({"lambda", "r", "theta", "r_prime", "re", "im", "modes_used", "tail_bound"});
  for (const auto& s : samples)
    csv.row({s.lambda, s.left.r, std::abs(s.left.phi - s.right.phi), s.right.r, s.value.real(), s.value.imag(),
             double(s.modes_used), s.tail_bound});
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:5", false, "lambda", "Re R");
  o.summary["results"] = {{"samples", samples.size()}, {"perturbed", perturbed}, {"sign", c.task.sign}};
}

void run_specmeasure(const RunConfig& c, const Flags& f, Output& o) {
  const RadialModel model = c.model();
  const bool perturbed = !std::holds_alternative<std::monostate>(model.w_pert);
  const auto& lambdas = require_lambda(c);
  const auto& pairs = require_pairs(c);
  const std::size_t n = lambdas.size() * pairs.size();
  const auto samples = parallel_map<DensitySample>(n, f.threads, [&](std::size_t i) {
    const double l = lambdas[i / pairs.size()];
    const auto& p = pairs[i % pairs.size()];
    return perturbed ? perturbed_density(model, l, p.left, p.right, c.truncation)
                     : spectral_measure_density(model.spectrum, l, p.left, p.right, c.truncation);
  });
  Csv csv({"lambda", "r", "theta", "r_prime", "density", "modes_used", "tail_bound"});
  for (const auto& s : samples)
    csv.row({s.lambda, s.left.r, std::abs(s.left.phi - s.right.phi), s.right.r, s.value, double(s.modes_used),
             s.tail_bound});
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:5", true, "lambda", "dE/dlambda");
  o.summary["results"] = {{"samples", samples.size()}, {"perturbed", perturbed}};
  if (f.fit) {
    const auto& p = pairs.front();
    const LowEnergyFit fit = low_energy_fit(model, p.left, p.right, lambdas);
    o.summary["fit"] = {{"slope", fit.slope},
                        {"predicted_slope", fit.predicted_slope},
                        {"coefficient", fit.coefficient},
                        {"predicted_coefficient", fit.predicted_coefficient},
                        {"intercept_coefficient", fit.intercept_coefficient},
                        {"residual_rms", fit.residual_rms}};
    o.check("low-energy slope 2 nu0 + 1 (1%)",
            std::abs(fit.slope - fit.predicted_slope) <= 0.01 * fit.predicted_slope, fit.slope, fit.predicted_slope,
            0.01);
    o.check("leading coefficient w(z) w(z') (2%)",
            std::abs(fit.coefficient - fit.predicted_coefficient) <= 0.02 * std::abs(fit.predicted_coefficient),
            fit.coefficient, fit.predicted_coefficient, 0.02);
    o.stdout_text = "slope " + fmt(fit.slope) + " (predicted " + fmt(fit.predicted_slope) + ")\n";
  }
}

void run_zeromode(const RunConfig& c, const Flags&, Output& o) {
  const RadialModel model = c.model();
  const ZeroMode z = zero_mode(model);
  Csv csv({"r", "radial", "u0"});
  for (double r : c.task.r_grid) csv.row({r, z.radial(r), z.u0_at(r)});
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:2", true, "r", "w radial profile");
  Json w = Json::array();
  for (const auto& p : c.task.pairs)
    w.push_back({{"r", p.left.r},
                 {"phi", p.left.phi},
                 {"r_prime", p.right.r},
                 {"phi_prime", p.right.phi},
                 {"pair", z.pair(model.spectrum, p.left, p.right)}});
  o.summary["results"] = {{"nu0", z.nu0},
                          {"multiplicity", z.multiplicity},
                          {"a_coeff", z.a_coeff},
                          {"b_coeff", z.b_coeff},
                          {"w_pairs", w}};
  o.stdout_text = "a = " + fmt(z.a_coeff) + ", b = " + fmt(z.b_coeff) + "\n";
}

void run_propagate(const RunConfig& c, const Flags& f, Output& o) {
  const RadialModel model = c.model();
  const PropagatorKind kind = propagator_kind_from_string(f.kind.empty() ? c.task.kind : f.kind);
  const auto& pairs = require_pairs(c);
  if (c.task.t.empty()) throw ConfigError("[task] t is required for propagate");
  const auto& times = c.task.t;
  const double t_max = *std::max_element(times.begin(), times.end());
  const Cutoff cutoff{c.task.lambda_c};
  const std::size_t n_lambda =
      c.task.n_lambda ? c.task.n_lambda : 16 * required_panels(kind, cutoff.lambda_c, t_max);
  const auto& p = pairs.front();

  Json warnings = Json::array();
  if (const std::size_t bound = bound_state_count(model); bound > 0)
    warnings.push_back("bound states detected (" + std::to_string(bound) +
                       "); the quadrature covers the continuous spectrum only");
  const DensityTable table = density_table(model, cutoff, p.left, p.right, n_lambda, f.threads);
  std::vector<TimeSample> series;
  Csv csv({"t", "re", "im", "abs"});
  for (double t : times) {
    const Complex v = stone_quadrature(table, kind, t);
    series.push_back({t, v});
    csv.row({t, v.real(), v.imag(), std::abs(v)});
  }
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:4", true, "t", "|kernel|");
  const PredictedDecay pred = predicted_constants(model, kind, p.left, p.right);
  o.summary["results"] = {{"kind", to_string(kind)},
                          {"lambda_c", cutoff.lambda_c},
                          {"n_lambda", table.lambda.size()},
                          {"modes", table.modes},
                          {"predicted_exponent", pred.exponent},
                          {"predicted_coefficient", complex_json(pred.coefficient)}};
  const double lo = c.task.fit_lo > 0 ? c.task.fit_lo : times.front();
  const double hi = c.task.fit_hi > 0 ? c.task.fit_hi : t_max;
  std::size_t in_window = 0;
  for (double t : times) in_window += (t >= lo && t <= hi);
  if (in_window >= 12) {
    DecayFit fit = fit_decay(series, lo, hi, pred.exponent);
    o.summary["fit"] = {{"exponent", fit.exponent},
                        {"ci_exponent", std::isfinite(fit.ci_exponent) ? Json(fit.ci_exponent) : Json("inf")},
                        {"coefficient", complex_json(fit.coefficient)},
                        {"points", fit.points},
                        {"monotone", fit.monotone}};
    if (!fit.warning.empty()) warnings.push_back(fit.warning);
    o.check("decay exponent (5%)", std::abs(fit.exponent - pred.exponent) <= 0.05 * pred.exponent, fit.exponent,
            pred.exponent, 0.05);
    if (std::abs(pred.coefficient) > 0)
      o.check("decay coefficient (5%)",
              std::abs(fit.coefficient - pred.coefficient) <= 0.05 * std::abs(pred.coefficient),
              std::abs(fit.coefficient), std::abs(pred.coefficient), 0.05);
    o.stdout_text = "exponent " + fmt(fit.exponent) + " (predicted " + fmt(pred.exponent) + ")\n";
  } else {
    warnings.push_back("fewer than 12 times in the fit window; no decay fit");
  }
  o.summary["warnings"] = warnings;
}

void run_fit_decay(const RunConfig& c, const Flags&, Output& o) {
  if (c.task.series.empty()) throw ConfigError("[task] series (CSV with t, re, im) is required for fit-decay");
  std::ifstream in(c.task.series);
  if (!in) throw ConfigError("cannot open series '" + c.task.series + "'");
  std::vector<TimeSample> series;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::logic_error&) {
        throw ConfigError("series: bad number '" + cell + "'");
      }
    }
    if (v.size() < 3) throw ConfigError("series: expected columns t, re, im");
    series.push_back({v[0], Complex(v[1], v[2])});
  }
  if (series.empty()) throw ConfigError("series: no samples");
  const double lo = c.task.fit_lo > 0 ? c.task.fit_lo : series.front().t;
  const double hi = c.task.fit_hi > 0 ? c.task.fit_hi : series.back().t;
  const DecayFit fit = fit_decay(series, lo, hi);
  Csv csv({"t", "abs", "fit"});
  for (const auto& s : series)
    if (s.t >= lo && s.t <= hi) csv.row({s.t, std::abs(s.value), std::abs(fit.coefficient) * std::pow(s.t, -fit.exponent)});
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:2", true, "t", "|value|");
  o.summary["fit"] = {{"exponent", fit.exponent},
                      {"ci_exponent", std::isfinite(fit.ci_exponent) ? Json(fit.ci_exponent) : Json("inf")},
                      {"coefficient", complex_json(fit.coefficient)},
                      {"points", fit.points},
                      {"monotone", fit.monotone},
                      {"warning", fit.warning}};
  o.stdout_text = "exponent " + fmt(fit.exponent) + "\n";
}

void run_oracle_box(const RunConfig& c, const Flags& f, Output& o) {
  const ModeSpectrum s = c.spectrum();
  BoxProblem box{c.task.nu.value_or(s.nu0()), c.perturbation, c.task.r_box, c.task.h};
  const auto& lambdas = require_lambda(c);
  const auto& p = require_pairs(c).front();
  // Per-lambda comparisons are independent; the box is solved once.
  const double sigma = c.task.sigma > 0 ? c.task.sigma : 5.0 * std::numbers::pi / box.r_box;
  const BoxEigen eigen = box_eigen(box, {p.left.r, p.right.r});
  const auto rows = parallel_map<OracleRow>(lambdas.size(), f.threads, [&](std::size_t i) {
    const double l = lambdas[i];
    OracleRow r{l, mollified_mode_density(box, sigma, l, p.left.r, p.right.r),
                mollified_density(eigen, sigma, l, p.left.r, p.right.r), 0.0};
    r.deviation = std::abs(r.box_density - r.mode_density) / std::abs(r.mode_density);
    return r;
  });
  Csv csv({"lambda", "mode_density", "box_density", "deviation"});
  double worst = 0;
  for (const auto& r : rows) {
    csv.row({r.lambda, r.mode_density, r.box_density, r.deviation});
    worst = std::max(worst, r.deviation);
  }
  o.csv = csv.str();
  o.plot = gnuplot(o.name, "1:2", false, "lambda", "mollified density");
  o.summary["results"] = {{"nu", box.nu}, {"r_box", box.r_box}, {"h", box.h}, {"sigma", sigma},
                          {"max_deviation", worst}};
  o.check("box oracle vs mode density (5%)", worst < 0.05, worst, 0.0, 0.05);
  o.stdout_text = "max deviation " + fmt(worst) + "\n";
}

void run_indexset(const RunConfig* c, const Flags& f, Output& o) {
  const std::string expr = !f.expr.empty() ? f.expr : (c ? c->task.expression : "");
  if (expr.empty()) throw ConfigError("indexset needs --expr or [task] expression");
  const IndexValue v = evaluate_index_expression(expr);
  Csv csv({"face", "beta", "j"});
  Json mins = Json::object();
  auto emit = [&](const std::string& face, const IndexSet& e) {
    for (const auto& g : e.generators()) csv.row_strings({face, g.beta.str(), std::to_string(g.j)});
    const auto m = min_e(e);
    mins[face] = m ? Json(m->str()) : Json("inf");
  };
  if (const auto* s = std::get_if<IndexSet>(&v)) {
    emit("set", *s);
  } else {
    const auto& fam = std::get<IndexFamily>(v);
    for (Face face : kAllFaces) emit(face_name(face), fam[face]);
  }
  o.csv = csv.str();
  o.summary["results"] = {{"expression", expr}, {"canonical", to_string(v)}, {"min", mins}};
  o.stdout_text = to_string(v) + "\n";
}

void run_legendrian(const RunConfig& c, const Flags&, Output& o) {
  const auto& t = c.task;
  const YGeodesic g =
      t.geodesic == "torus" ? YGeodesic::torus_line(t.y0, t.eta0) : YGeodesic::great_circle(t.y0, t.eta0);
  Csv csv({"s", "s_prime", "nu", "nu_prime", "sigma", "residual"});
  double worst = 0;
  const int n = t.leaf_grid;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k) {
      const double s = std::numbers::pi * i / (n + 1), sp = std::numbers::pi * k / (n + 1);
      const LeafPoint p = leaf_sample(g, s, sp);
      const double res = contact_check(g, s, sp, t.step);
      worst = std::max(worst, res);
      csv.row({s, sp, p.nu, p.nu_prime, p.sigma, res});
    }
  o.csv = csv.str();
  o.plot = "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n"
           "set output '" + o.name + ".png'\nset xlabel 's'\nset ylabel \"s'\"\n"
           "splot '" + o.name + ".csv' using 1:2:6 with points\n";
  o.summary["results"] = {{"geodesic", t.geodesic}, {"grid", n}, {"step", t.step}, {"max_residual", worst}};
  o.check("contact residual <= 1e-7", worst <= 1e-7, worst, 0.0, 1e-7);
  o.stdout_text = "max contact residual " + fmt(worst) + "\n";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const HypothesisError*>(&e)) return kHypothesisError;
  if (dynamic_cast<const ConvergenceError*>(&e) || dynamic_cast<const RangeError*>(&e)) return kConvergenceError;
  return kConfigError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-energy spectral and scattering computations on metric cones", "conespec"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::string> names{"eigens",   "resolvent", "specmeasure", "zeromode",  "propagate",
                                       "fit-decay", "oracle-box", "indexset",   "legendrian"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", f.config, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_flag("--fit", f.fit, "fit the low-energy law (specmeasure)");
    sub->add_option("--tol", f.tol, "override numerical tolerances");
    sub->add_option("--modes", f.modes, "override l_max / k_max");
    if (name == "propagate") sub->add_option("--kind", f.kind, "schrodinger | wave_sin | wave_cos");
    if (name == "indexset") sub->add_option("--expr", f.expr, "index-set expression");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  Output o;
  o.name = name;
  o.summary["schema_version"] = kSchemaVersion;
  o.summary["version"] = CONESPEC_VERSION;
  o.summary["subcommand"] = name;
  try {
    std::optional<RunConfig> config;
    if (!f.config.empty()) {
      config = load_config(f.config);
      if (f.tol > 0) apply_tol(*config, f.tol);
      if (f.modes >= 0) apply_modes(*config, f.modes);
    } else if (name != "indexset") {
      throw ConfigError(name + " needs --config");
    }
    Json echo = Json::object();
    if (config) {
      for (const auto& [section, kv] : config->echo) echo[section] = kv;
      // hyp2 is checked before any computation.
      if (name != "indexset" && name != "legendrian" && name != "fit-decay") (void)config->spectrum();
    }
    o.summary["config"] = echo;
    o.summary["flags"] = {{"threads", f.threads}, {"fit", f.fit}, {"tol", f.tol}, {"modes", f.modes}};

    if (name == "eigens") run_eigens(*config, f, o);
    else if (name == "resolvent") run_resolvent(*config, f, o);
    else if (name == "specmeasure") run_specmeasure(*config, f, o);
    else if (name == "zeromode") run_zeromode(*config, f, o);
    else if (name == "propagate") run_propagate(*config, f, o);
    else if (name == "fit-decay") run_fit_decay(*config, f, o);
    else if (name == "oracle-box") run_oracle_box(*config, f, o);
    else if (name == "indexset") run_indexset(config ? &*config : nullptr, f, o);
    else run_legendrian(*config, f, o);

    o.summary["checks"] = o.checks;
    const std::filesystem::path dir(f.out);
    std::filesystem::create_directories(dir);
    write_file(dir / (name + ".json"), o.summary.dump(2) + "\n");
    if (!o.csv.empty()) write_file(dir / (name + ".csv"), o.csv);
    if (!o.plot.empty()) write_file(dir / (name + ".gp"), o.plot);
    out << o.stdout_text;
    return kOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "error: " << e.what() << '\n';
    if (const auto* h = dynamic_cast<const HypothesisError*>(&e)) err << "  offending value: " << h->value() << '\n';
    if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) err << "  achieved: " << c->achieved() << '\n';
    return code;
  }
}

}  // namespace conespec::cli
