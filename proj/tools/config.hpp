#pragma once

// Run configuration: an INI file with sections geometry, perturbation,
// numerics and task. Unknown sections or keys are rejected.
//
//   [geometry]      cross_section = sphere | circle | custom | discretized_circle
//                   n, v0, l_max (sphere); length, v0, k_max (circle);
//                   n, modes = "nu:mult, ...", volume (custom);
//                   v0_samples = "a, b, ...", grid (discretized_circle)
//   [perturbation]  kind = none | bump | table; center, width, amplitude; table = path.csv
//   [numerics]      tol, r_match, r_min, rel_tol, mode_cap
//   [task]          see TaskConfig

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conespec/cone_kernels.hpp"
#include "conespec/cross_section.hpp"
#include "conespec/propagators.hpp"
#include "conespec/radial_scattering.hpp"

namespace conespec::cli {

struct PointPair {
  ConePoint left;
  ConePoint right;
};

struct TaskConfig {
  std::vector<double> lambda;       // lambda = "a, b, c" or "log lo hi count" / "lin lo hi count"
  std::vector<PointPair> pairs;     // pairs = "r phi r' phi'; ..."
  std::string sign = "outgoing";
  std::string kind = "wave_sin";
  double lambda_c = 1.0;
  std::vector<double> t;            // t = "dyadic t0 t1" or a list
  double fit_lo = 0.0, fit_hi = 0.0;  // 0: whole t range
  std::size_t n_lambda = 0;         // 0: 16 panels per required panel at max t
  std::vector<double> r_grid;       // zeromode output radii
  // oracle-box
  std::optional<double> nu;
  double r_box = 400.0, h = 0.05, sigma = 0.0;
  // indexset
  std::string expression;
  // legendrian
  std::string geodesic = "sphere";
  std::vector<double> y0{1.0, 0.0, 0.0}, eta0{0.0, 1.0, 0.0};
  int leaf_grid = 20;
  double step = 1e-4;
  // fit-decay
  std::string series;
};

struct RunConfig {
  std::string path;
  CrossSectionSpec geometry = SphereSpec{};
  Perturbation perturbation;
  double tol = 1e-12;
  double r_match = 0.0, r_min = 0.0;
  Truncation truncation;
  TaskConfig task;
  // Raw key/values as read, for the summary echo.
  std::map<std::string, std::map<std::string, std::string>> echo;

  ModeSpectrum spectrum() const;  // throws HypothesisError on hyp2
  RadialModel model() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

// Overrides from command-line flags.
void apply_tol(RunConfig& c, double tol);
void apply_modes(RunConfig& c, int l_max);

std::vector<double> parse_list(const std::string& text);
std::vector<double> parse_grid(const std::string& text);

}  // namespace conespec::cli
