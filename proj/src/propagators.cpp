#include "conespec/propagators.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "conespec/errors.hpp"
#include "conespec/quadrature.hpp"
#include "conespec/summation.hpp"

namespace conespec {

namespace {

constexpr double kPi = std::numbers::pi;
using quad = __float128;

double exp_of(double x) { return std::exp(x); }
quad exp_of(quad x) { return expq(x); }

template <class T>
T smooth_step(T x) {
  if (x <= 0) return T(0);
  if (x >= 1) return T(1);
  const T a = exp_of(T(-1) / x), b = exp_of(T(-1) / (T(1) - x));
  return a / (a + b);
}

template <class T>
T chi(T lambda, T lambda_c) {
  if (lambda <= lambda_c / 2) return T(1);
  if (lambda >= lambda_c) return T(0);
  const T h = smooth_step(T(2) * lambda / lambda_c - T(1));
  const T d = T(1) - h * h;
  if (d <= 0) return T(0);
  return exp_of(T(1) - T(1) / d);
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("propagator: t must be positive and finite");
}

void check_cutoff(Cutoff c) {
  if (!(c.lambda_c > 0.0) || !std::isfinite(c.lambda_c)) throw ConfigError("cutoff: lambda_c must be positive");
}

// Gauss-Legendre panels over [0, lambda_c]: `uniform` equal panels, the first
// replaced by `levels` geometrically shrinking panels towards 0.
template <class T, class Rule>
void panel_nodes(const Rule& rule, T lambda_c, std::size_t uniform, int levels, std::vector<T>& x,
                 std::vector<T>& w) {
  const T h = lambda_c / T(uniform);
  auto add = [&](T a, T b) {
    const T mid = (a + b) / 2, half = (b - a) / 2;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      x.push_back(mid + half * rule.x[k]);
      w.push_back(half * rule.w[k]);
    }
  };
  T lo = h;
  std::vector<std::pair<T, T>> graded;
  for (int k = 0; k < levels; ++k) {
    graded.emplace_back(lo / 4, lo);
    lo /= 4;
  }
  add(T(0), lo);
  for (auto it = graded.rbegin(); it != graded.rend(); ++it) add(it->first, it->second);
  for (std::size_t p = 1; p < uniform; ++p) add(h * T(p), h * T(p + 1));
}

constexpr int kGradedLevels = 12;

struct QuadRule {
  std::array<quad, 16> x, w;
};

// Legendre nodes refined by Newton in quadruple precision.
const QuadRule& gauss_legendre16_quad() {
  static const QuadRule rule = [] {
    QuadRule r;
    const GaussRule& d = gauss_legendre16();
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      quad z = d.x[i], dp = 0;
      for (int it = 0; it < 6; ++it) {
        quad p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const quad p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        z -= p1 / dp;
      }
      r.x[i] = z;
      r.w[i] = 2 / ((1 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double integrand_factor_re(PropagatorKind kind, double l, double t) {
  return kind == PropagatorKind::wave_sin ? std::sin(t * l) / l : std::cos(t * l);
}

}  // namespace

const char* to_string(PropagatorKind kind) {
  switch (kind) {
    case PropagatorKind::schrodinger: return "schrodinger";
    case PropagatorKind::wave_sin: return "wave_sin";
    case PropagatorKind::wave_cos: return "wave_cos";
  }
  return "?";
}

PropagatorKind propagator_kind_from_string(const std::string& name) {
  if (name == "schrodinger") return PropagatorKind::schrodinger;
  if (name == "wave_sin") return PropagatorKind::wave_sin;
  if (name == "wave_cos") return PropagatorKind::wave_cos;
  throw ConfigError("unknown propagator kind '" + name + "' (schrodinger, wave_sin, wave_cos)");
}

double cutoff_chi(double lambda, double lambda_c) {
  if (!(lambda >= 0.0)) throw DomainError("cutoff_chi: lambda must be >= 0");
  if (!(lambda_c > 0.0)) throw DomainError("cutoff_chi: lambda_c must be positive");
  return chi(lambda, lambda_c);
}

double phase_rate(PropagatorKind kind, double lambda_c, double t) {
  return kind == PropagatorKind::schrodinger ? 2.0 * lambda_c * t : t;
}

std::size_t required_panels(PropagatorKind kind, double lambda_c, double t) {
  const double period = 2.0 * kPi / phase_rate(kind, lambda_c, t);
  return static_cast<std::size_t>(std::ceil(lambda_c / (period / 10.0)));
}

DensityTable density_table(const RadialModel& model, Cutoff cutoff, ConePoint left, ConePoint right,
                           std::size_t n_lambda, unsigned threads) {
  check_cutoff(cutoff);
  const std::size_t panels = std::max<std::size_t>(1, n_lambda / 16);
  DensityTable table;
  table.lambda_c = cutoff.lambda_c;
  table.uniform_panels = panels;
  table.left = left;
  table.right = right;
  std::vector<double> w;
  panel_nodes(gauss_legendre16(), cutoff.lambda_c, panels, kGradedLevels, table.lambda, w);
  table.weight.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) table.weight[i] = w[i] * cutoff_chi(table.lambda[i], cutoff.lambda_c);

  const bool exact = std::holds_alternative<std::monostate>(model.w_pert);
  auto density = [&](double l, const Truncation& tr) {
    return exact ? spectral_measure_density(model.spectrum, l, left, right, tr)
                 : perturbed_density(model, l, left, right, tr);
  };
  // The mode count needed at the top of the window suffices below it.
  const double top = table.lambda.back();
  Truncation fixed;
  fixed.fixed_modes = std::min(model.spectrum.size(), density(top, Truncation{}).modes_used + 2);
  table.modes = fixed.fixed_modes;

  const std::size_t count = table.lambda.size();
  table.density.assign(count, 0.0);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned id) {
    const std::size_t lo = count * id / workers, hi = count * (id + 1) / workers;
    try {
      for (std::size_t i = lo; i < hi; ++i) {
        // Nodes with chi = 0 still get a density so tables can be inspected.
        table.density[i] = density(table.lambda[i], fixed).value;
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(run, id);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

Complex stone_quadrature(const DensityTable& table, PropagatorKind kind, double t) {
  check_time(t);
  const std::size_t need = required_panels(kind, table.lambda_c, t);
  if (table.uniform_panels < need) {
    std::ostringstream msg;
    msg << "stone_quadrature: undersampled oscillation at t = " << t << " (" << table.uniform_panels
        << " panels, need " << need << ", i.e. n_lambda >= " << 16 * need << ")";
    throw ConfigError(msg.str());
  }
  if (kind == PropagatorKind::schrodinger) {
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < table.lambda.size(); ++i) {
      const double l = table.lambda[i];
      acc.add(table.weight[i] * table.density[i] * std::polar(1.0, t * l * l));
    }
    return acc.value();
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < table.lambda.size(); ++i) {
    acc.add(table.weight[i] * table.density[i] * integrand_factor_re(kind, table.lambda[i], t));
  }
  return acc.value();
}

Complex stone_quadrature(const RadialModel& model, PropagatorKind kind, Cutoff cutoff, double t, ConePoint left,
                         ConePoint right, std::size_t n_lambda, unsigned threads) {
  check_time(t);
  check_cutoff(cutoff);
  if (n_lambda / 16 < required_panels(kind, cutoff.lambda_c, t)) {
    std::ostringstream msg;
    msg << "stone_quadrature: n_lambda = " << n_lambda << " undersamples the oscillation at t = " << t
        << "; need at least " << 16 * required_panels(kind, cutoff.lambda_c, t);
    throw ConfigError(msg.str());
  }
  return stone_quadrature(density_table(model, cutoff, left, right, n_lambda, threads), kind, t);
}

QuadratureCheck stone_quadrature_checked(const RadialModel& model, PropagatorKind kind, Cutoff cutoff, double t,
                                         ConePoint left, ConePoint right, std::size_t n_lambda, unsigned threads) {
  QuadratureCheck c;
  c.value = stone_quadrature(model, kind, cutoff, t, left, right, n_lambda, threads);
  c.refined = stone_quadrature(model, kind, cutoff, t, left, right, 2 * n_lambda, threads);
  c.relative_change = std::abs(c.refined - c.value) / std::abs(c.refined);
  return c;
}

ModelIntegral model_integral(double s, double t, Cutoff cutoff) {
  check_cutoff(cutoff);
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("model_integral: s must be positive");
  check_time(t);
  if (t * cutoff.lambda_c < 10.0) {
    std::ostringstream msg;
    msg << "model_integral: t = " << t << " below 10/lambda_c = " << 10.0 / cutoff.lambda_c;
    throw ConfigError(msg.str());
  }
  const std::size_t panels = std::max<std::size_t>(16, required_panels(PropagatorKind::wave_cos, cutoff.lambda_c, t));
  std::vector<quad> x, w;
  panel_nodes(gauss_legendre16_quad(), quad(cutoff.lambda_c), panels, 2 * kGradedLevels, x, w);
  const quad tq = t, lc = cutoff.lambda_c, sq = s;
  const bool integer = s == std::round(s) && s <= 16;
  quad re = 0, im = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const quad l = x[i];
    quad pw = 1;
    if (integer) {
      for (int k = 0; k < static_cast<int>(s); ++k) pw *= l;
    } else {
      pw = powq(l, sq);
    }
    const quad f = w[i] * chi(l, lc) * pw;
    quad sn, cs;
    sincosq(tq * l, &sn, &cs);
    re += f * cs;
    im += f * sn;
  }
  ModelIntegral out;
  out.quadrature = Complex(static_cast<double>(re), static_cast<double>(im));
  out.closed_form = std::tgamma(s + 1.0) * std::polar(1.0, 0.5 * kPi * (s + 1.0)) * std::pow(t, -(s + 1.0));
  out.nodes = x.size();
  return out;
}

DecayFit fit_decay(const std::vector<TimeSample>& series, double t_lo, double t_hi, double reference_exponent) {
  std::vector<TimeSample> win;
  for (const auto& p : series)
    if (p.t >= t_lo && p.t <= t_hi) win.push_back(p);
  std::sort(win.begin(), win.end(), [](const TimeSample& a, const TimeSample& b) { return a.t < b.t; });
  if (win.size() < 12) {
    std::ostringstream msg;
    msg << "fit_decay: " << win.size() << " samples in [" << t_lo << ", " << t_hi << "], need at least 12";
    throw ConfigError(msg.str());
  }
  const std::size_t k = win.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double a = std::abs(win[i].value);
    if (!(a > 0.0) || !std::isfinite(win[i].t) || win[i].t <= 0.0) {
      throw ConvergenceError("fit_decay: zero or invalid sample in the window", a);
    }
    x[i] = std::log(win[i].t);
    y[i] = std::log(a);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) mx += x[i], my += y[i];
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss += r * r;
  }
  DecayFit fit;
  fit.points = k;
  fit.exponent = -slope;
  fit.ci_exponent = 2.0 * std::sqrt(ss / (k - 2) / sxx);
  for (std::size_t i = 1; i < k; ++i) {
    if (!(std::abs(win[i].value) < std::abs(win[i - 1].value))) fit.monotone = false;
  }
  if (!fit.monotone) {
    fit.ci_exponent = std::numeric_limits<double>::infinity();
    fit.warning = "|value| is not monotone in the window (oscillatory contamination or noise floor)";
  }
  const double p = std::isfinite(reference_exponent) ? reference_exponent : fit.exponent;
  CompensatedComplexSum c;
  for (const auto& s : win) c.add(s.value * std::pow(s.t, p));
  fit.coefficient = c.value() / double(k);
  fit.predicted_exponent = std::numeric_limits<double>::quiet_NaN();
  fit.predicted_coefficient = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  return fit;
}

PredictedDecay predicted_constants(const RadialModel& model, PropagatorKind kind, ConePoint z, ConePoint z_prime) {
  const ZeroMode zm = zero_mode(model);
  const double ww = zm.pair(model.spectrum, z, z_prime);
  const double nu0 = zm.nu0, nu1 = model.spectrum.nu1();
  const double c = std::cos(kPi * (nu0 + 1.0));
  const bool cancels = std::abs(c) < 1e-12;
  const double remainder = std::min(2.0 * nu0 + 2.0, 2.0 * nu1 + 1.0);
  switch (kind) {
    case PropagatorKind::wave_sin:
      if (cancels) return {remainder, 0.0};
      return {2.0 * nu0 + 1.0, -std::tgamma(2.0 * nu0 + 1.0) * c * ww};
    case PropagatorKind::wave_cos:
      if (cancels) return {remainder + 1.0, 0.0};
      return {2.0 * nu0 + 2.0, std::tgamma(2.0 * nu0 + 2.0) * c * ww};
    case PropagatorKind::schrodinger:
      return {nu0 + 1.0, 0.5 * std::tgamma(nu0 + 1.0) * std::polar(1.0, 0.5 * kPi * (nu0 + 1.0)) * ww};
  }
  return {0.0, 0.0};
}

std::size_t bound_state_count(const RadialModel& model, std::size_t modes) {
  const double big = resolved_r_match(model);
  const double r0 = model.r_min > 0.0 ? model.r_min : 1e-3;
  constexpr int kGrid = 4000;
  std::vector<double> grid(kGrid);
  for (int i = 0; i < kGrid; ++i) grid[i] = r0 * std::pow(big / r0, double(i + 1) / kGrid);
  std::size_t total = 0;
  double last_nu = -1.0;
  for (std::size_t j = 0; j < std::min(modes, model.spectrum.size()); ++j) {
    const double nu = model.spectrum.mode(j).nu;
    if (nu == last_nu) continue;
    last_nu = nu;
    const RegularSolution reg = regular_solution(model, Order(nu), 0.0, grid);
    std::size_t zeros = 0;
    for (int i = 1; i < kGrid; ++i)
      if ((reg.u.value[i] > 0.0) != (reg.u.value[i - 1] > 0.0)) ++zeros;
    // Past r_match u = a r^s + b r^{1-s}, with a ~ ra R^{1-s}, b ~ rb R^s; the
    // node (-b/a)^{1/(2 nu)} lies beyond R iff -rb/ra > 1.
    const double s = nu + 0.5, u = reg.u.value.back(), up = reg.u.derivative.back();
    const double ra = up - u * (1.0 - s) / big, rb = u * s / big - up;
    if (ra * rb < 0.0 && std::abs(rb) > std::abs(ra)) ++zeros;
    total += zeros * static_cast<std::size_t>(model.spectrum.mode(j).multiplicity);
  }
  return total;
}

std::vector<double> dyadic_times(double t0, double t1) {
  if (!(t0 > 0.0) || !(t1 >= t0)) throw ConfigError("dyadic_times: need 0 < t0 <= t1");
  std::vector<double> t;
  const int steps = static_cast<int>(std::floor(2.0 * std::log2(t1 / t0) + 1e-9));
  for (int k = 0; k <= steps; ++k) t.push_back(t0 * std::pow(2.0, 0.5 * k));
  return t;
}

}  // namespace conespec
