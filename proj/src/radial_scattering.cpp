#include "conespec/radial_scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "conespec/detail/mode_sum.hpp"
#include "conespec/errors.hpp"
#include "conespec/ode.hpp"
#include "conespec/summation.hpp"

namespace conespec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << v;
    throw DomainError(msg.str());
  }
}

bool same_point_on_y(double phi, double phi_prime) {
  return std::fmod(std::abs(phi - phi_prime), 2.0 * kPi) == 0.0;
}

// sqrt(r) F(lambda r) and its r-derivative for F = J, Y.
struct FreeBasis {
  double j, jp, y, yp;
};

FreeBasis free_basis(Order nu, double lambda, double r) {
  const auto b = specfun::bessel_jy(nu, lambda * r);
  const double sr = std::sqrt(r);
  FreeBasis f{sr * b.j, b.j / (2.0 * sr) + sr * lambda * b.jp, sr * b.y, b.y / (2.0 * sr) + sr * lambda * b.yp};
  if (!std::isfinite(f.y) || !std::isfinite(f.yp)) {
    std::ostringstream msg;
    msg << "radial_scattering: Y_" << nu.value() << "(" << lambda * r << ") overflows at the matching radius";
    throw RangeError(msg.str());
  }
  return f;
}

// Launch coefficients of u = r^s (1 + c2 r^2 + c3 r^3) from a linear fit of W near r0.
struct Frobenius {
  double s, c2, c3;
};

Frobenius frobenius(double nu, double lambda, const PerturbationFunction& w, double r0) {
  const double w1 = (w(2.0 * r0) - w(r0)) / r0;
  const double w0 = w(r0) - w1 * r0;
  return {nu + 0.5, (w0 - lambda * lambda) / (4.0 * (nu + 1.0)), w1 / (3.0 * (2.0 * nu + 3.0))};
}

ode::State<double> frobenius_state(const Frobenius& f, double r) {
  const double r2 = r * r, r3 = r2 * r;
  return {1.0 + f.c2 * r2 + f.c3 * r3, (f.s + (f.s + 2.0) * f.c2 * r2 + (f.s + 3.0) * f.c3 * r3) / r};
}

std::vector<std::size_t> order_by(const std::vector<double>& r, bool ascending) {
  std::vector<std::size_t> idx(r.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? r[a] < r[b] : r[a] > r[b];
  });
  return idx;
}

void check_samples(const std::vector<double>& r) {
  for (double x : r) check_positive(x, "sample radius");
}

std::vector<double> natural_spline(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
    const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
    const double rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 1;) m[i] = d[i] - c[i] * m[i + 1];
  return m;
}

}  // namespace

PerturbationFunction::PerturbationFunction(Perturbation p) : p_(std::move(p)) {
  if (const auto* b = std::get_if<BumpPerturbation>(&p_)) {
    if (!(b->width > 0.0) || !std::isfinite(b->center) || !std::isfinite(b->amplitude))
      throw ConfigError("bump perturbation: width must be positive and parameters finite");
    support_end_ = std::max(0.0, b->center + b->width);
  } else if (const auto* t = std::get_if<TabulatedPerturbation>(&p_)) {
    if (t->r.size() != t->w.size() || t->r.size() < 2)
      throw ConfigError("tabulated perturbation: need at least two (r, W) pairs of equal length");
    for (std::size_t i = 0; i < t->r.size(); ++i) {
      if (!std::isfinite(t->r[i]) || !std::isfinite(t->w[i]) || t->r[i] < 0.0)
        throw ConfigError("tabulated perturbation: radii must be nonnegative and values finite");
      if (i > 0 && !(t->r[i] > t->r[i - 1]))
        throw ConfigError("tabulated perturbation: radii must be strictly increasing");
    }
    m_ = natural_spline(t->r, t->w);
    support_end_ = t->r.back();
  }
}

double PerturbationFunction::operator()(double r) const {
  if (const auto* b = std::get_if<BumpPerturbation>(&p_)) {
    const double s = (r - b->center) / b->width;
    if (std::abs(s) >= 1.0) return 0.0;
    return b->amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  if (const auto* t = std::get_if<TabulatedPerturbation>(&p_)) {
    const auto& x = t->r;
    if (r < x.front() || r > x.back()) return 0.0;
    std::size_t i = std::upper_bound(x.begin(), x.end(), r) - x.begin();
    i = std::clamp<std::size_t>(i, 1, x.size() - 1);
    const double h = x[i] - x[i - 1];
    const double a = (x[i] - r) / h, b = (r - x[i - 1]) / h;
    return a * t->w[i - 1] + b * t->w[i] + ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
  }
  return 0.0;
}

double resolved_r_match(const RadialModel& model) {
  if (model.r_match > 0.0) return model.r_match;
  const PerturbationFunction w(model.w_pert);
  double r = 1.0;
  for (int k = 0; k < 40; ++k, r *= 2.0) {
    if (r >= w.support_end() && std::abs(w(r)) * r * r < model.tol) return r;
  }
  throw ConfigError("r_match: perturbation does not become negligible below 2^40; set r_match explicitly");
}

double resolved_r_min(const RadialModel& model, double lambda) {
  if (model.r_min > 0.0) return model.r_min;
  return 1e-3 * (lambda > 1.0 ? 1.0 / lambda : 1.0);
}

EffectivePotential liouville_reduce(const RadialModel& model, Order nu) {
  PerturbationFunction w(model.w_pert);
  const double big = resolved_r_match(model);
  if (!w.is_zero()) {
    // r^3 |W| on the far window must stay below its level near r_match.
    auto sup = [&](double a, double b) {
      double m = 0.0;
      constexpr int kSamples = 256;
      for (int i = 0; i <= kSamples; ++i) {
        const double r = a * std::pow(b / a, double(i) / kSamples);
        m = std::max(m, r * r * r * std::abs(w(r)));
      }
      return m;
    };
    const double near = sup(0.5 * big, 8.0 * big), far = sup(8.0 * big, 64.0 * big);
    if (far > near * (1.0 + 1e-12) + 1e-300) {
      std::ostringstream msg;
      msg << "perturbation fails the r^-3 decay check beyond r_match = " << big << " (r^3|W| grows from " << near
          << " to " << far << ")";
      throw ConfigError(msg.str());
    }
  }
  return EffectivePotential(nu.value(), std::move(w));
}

RegularSolution regular_solution(const RadialModel& model, Order nu, double lambda,
                                 const std::vector<double>& sample_r) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("regular_solution: lambda must be >= 0");
  check_samples(sample_r);
  const EffectivePotential q = liouville_reduce(model, nu);
  // No Bessel continuation at lambda = 0: integrate through every sample.
  const double big = lambda > 0.0 ? resolved_r_match(model) : std::numeric_limits<double>::infinity();
  double r0 = resolved_r_min(model, lambda);
  if (!sample_r.empty()) r0 = std::min(r0, 0.5 * *std::min_element(sample_r.begin(), sample_r.end()));

  const Frobenius f = frobenius(nu.value(), lambda, q.perturbation(), r0);
  const double l2 = lambda * lambda;
  auto shifted = [&](double r) { return q(r) - l2; };

  RegularSolution out;
  out.r_match = big;
  out.u.r = sample_r;
  out.u.value.assign(sample_r.size(), 0.0);
  out.u.derivative.assign(sample_r.size(), 0.0);
  out.u.log_scale.assign(sample_r.size(), 0.0);

  ode::State<double> y = frobenius_state(f, r0);
  double ls = f.s * std::log(r0);
  ode::StepControl ctl{model.tol};
  double r = r0;
  std::vector<std::size_t> beyond;
  for (std::size_t i : order_by(sample_r, true)) {
    if (sample_r[i] >= big) {
      beyond.push_back(i);
      continue;
    }
    ode::integrate(shifted, y, ls, r, sample_r[i], ctl);
    r = sample_r[i];
    out.u.value[i] = y.u;
    out.u.derivative[i] = y.up;
    out.u.log_scale[i] = ls;
  }
  if (lambda == 0.0) {
    out.match_u = y.u;
    out.match_up = y.up;
    out.match_log_scale = ls;
    out.r_match = r;
    return out;
  }
  ode::integrate(shifted, y, ls, r, big, ctl);
  out.match_u = y.u;
  out.match_up = y.up;
  out.match_log_scale = ls;

  const FreeBasis fb = free_basis(nu, lambda, big);
  out.a_coeff = 0.5 * kPi * (y.u * fb.yp - y.up * fb.y);
  out.b_coeff = -0.5 * kPi * (y.u * fb.jp - y.up * fb.j);
  for (std::size_t i : beyond) {
    const FreeBasis g = free_basis(nu, lambda, sample_r[i]);
    out.u.value[i] = out.a_coeff * g.j + out.b_coeff * g.y;
    out.u.derivative[i] = out.a_coeff * g.jp + out.b_coeff * g.yp;
    out.u.log_scale[i] = ls;
  }
  return out;
}

SampledFunction<Complex> outgoing_solution(const RadialModel& model, Order nu, double lambda,
                                           const std::vector<double>& sample_r) {
  check_positive(lambda, "lambda");
  check_samples(sample_r);
  const EffectivePotential q = liouville_reduce(model, nu);
  const double big = resolved_r_match(model);
  const double w_big = std::abs(q.perturbation()(big));
  if (w_big > model.tol * lambda * lambda) {
    std::ostringstream msg;
    msg << "outgoing_solution: |W(r_match)| = " << w_big << " exceeds tol*lambda^2 = " << model.tol * lambda * lambda
        << "; increase r_match";
    throw ConfigError(msg.str());
  }
  const double l2 = lambda * lambda;
  auto shifted = [&](double r) { return q(r) - l2; };

  SampledFunction<Complex> out;
  out.r = sample_r;
  out.value.assign(sample_r.size(), Complex{});
  out.derivative.assign(sample_r.size(), Complex{});
  out.log_scale.assign(sample_r.size(), 0.0);

  const FreeBasis fb = free_basis(nu, lambda, big);
  ode::State<Complex> y{Complex(fb.j, fb.y), Complex(fb.jp, fb.yp)};
  double ls = 0.0;
  ode::StepControl ctl{model.tol};
  double r = big;
  for (std::size_t i : order_by(sample_r, false)) {
    if (sample_r[i] >= big) {
      const FreeBasis g = free_basis(nu, lambda, sample_r[i]);
      out.value[i] = Complex(g.j, g.y);
      out.derivative[i] = Complex(g.jp, g.yp);
      continue;
    }
    ode::integrate(shifted, y, ls, r, sample_r[i], ctl);
    r = sample_r[i];
    out.value[i] = y.u;
    out.derivative[i] = y.up;
    out.log_scale[i] = ls;
  }
  return out;
}

ModeSolution solve_mode(const RadialModel& model, Order nu, double lambda, const std::vector<double>& sample_r) {
  ModeSolution s{nu.value(), lambda, regular_solution(model, nu, lambda, sample_r),
                 outgoing_solution(model, nu, lambda, sample_r), Complex{}, 0.0};
  const FreeBasis fb = free_basis(nu, lambda, s.reg.r_match);
  const Complex h(fb.j, fb.y), hp(fb.jp, fb.yp);
  s.wronskian = s.reg.match_u * hp - s.reg.match_up * h;
  const double scale = std::abs(s.reg.match_u * hp) + std::abs(s.reg.match_up * h);
  if (std::abs(s.wronskian) < 1e-12 * scale) {
    throw HypothesisError("solve_mode: Wronskian numerically zero (near resonance)", std::abs(s.wronskian) / scale);
  }
  for (std::size_t i = 0; i < sample_r.size(); ++i) {
    const Complex wi = (s.reg.u.value[i] * s.u_out.derivative[i] - s.reg.u.derivative[i] * s.u_out.value[i]) *
                       std::exp(s.reg.u.scale(i) + s.u_out.scale(i) - s.reg.match_log_scale);
    s.wronskian_variation = std::max(s.wronskian_variation, std::abs(wi - s.wronskian) / std::abs(s.wronskian));
  }
  return s;
}

Complex mode_green_perturbed(const RadialModel& model, Order nu, double lambda, double r, double r_prime,
                             Sign sign) {
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  const double rs = std::min(r, r_prime), rl = std::max(r, r_prime);
  const ModeSolution s = solve_mode(model, nu, lambda, {rs, rl});
  const double log_fac = s.reg.u.scale(0) + s.u_out.scale(1) - s.reg.match_log_scale;
  const Complex g = -s.reg.u.value[0] * s.u_out.value[1] / s.wronskian * std::exp(log_fac);
  return sign == Sign::outgoing ? g : std::conj(g);
}

double mode_density_perturbed(const RadialModel& model, Order nu, double lambda, double r, double r_prime) {
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  const RegularSolution reg = regular_solution(model, nu, lambda, {r, r_prime});
  const double norm = reg.a_coeff * reg.a_coeff + reg.b_coeff * reg.b_coeff;
  const double log_fac = reg.u.scale(0) + reg.u.scale(1) - 2.0 * reg.match_log_scale;
  return lambda * reg.u.value[0] * reg.u.value[1] / norm * std::exp(log_fac);
}

DensitySample perturbed_density(const RadialModel& model, double lambda, ConePoint left, ConePoint right,
                                const Truncation& trunc) {
  check_positive(lambda, "lambda");
  check_positive(left.r, "r");
  check_positive(right.r, "r_prime");
  const ModeSpectrum& spectrum = model.spectrum;
  const double pref = detail::pair_prefactor(spectrum.dimension(), left.r, right.r) / std::sqrt(left.r * right.r);
  const std::size_t m = std::min(spectrum.size(), trunc.mode_cap);
  const auto tails = detail::suffix_tails(detail::density_bounds(spectrum, m, lambda, left.r, right.r));
  const auto proj = spectrum.projectors(left.phi, right.phi, m);

  CompensatedSum acc;
  double tail = 0.0;
  auto term = [&](std::size_t j) {
    if (proj[j] == 0.0) return 0.0;
    return proj[j] * pref * mode_density_perturbed(model, Order(spectrum.mode(j).nu), lambda, left.r, right.r);
  };
  const std::size_t used = detail::truncated_sum(tails, trunc, m, term, acc, tail, "perturbed_density");
  return {lambda, left, right, acc.value(), used, tail};
}

KernelSample perturbed_resolvent(const RadialModel& model, double lambda, ConePoint left, ConePoint right,
                                 Sign sign, const Truncation& trunc) {
  check_positive(lambda, "lambda");
  check_positive(left.r, "r");
  check_positive(right.r, "r_prime");
  if (left.r == right.r && same_point_on_y(left.phi, right.phi))
    throw DomainError("perturbed_resolvent: coincident points (diagonal singularity)");
  const ModeSpectrum& spectrum = model.spectrum;
  const double pref = detail::pair_prefactor(spectrum.dimension(), left.r, right.r) / std::sqrt(left.r * right.r);
  const std::size_t m = std::min(spectrum.size(), trunc.mode_cap);
  const auto tails = detail::suffix_tails(detail::resolvent_bounds(spectrum, m, lambda, left.r, right.r));
  const auto proj = spectrum.projectors(left.phi, right.phi, m);

  CompensatedComplexSum acc;
  double tail = 0.0;
  auto term = [&](std::size_t j) {
    if (proj[j] == 0.0) return Complex{};
    return proj[j] * pref *
           mode_green_perturbed(model, Order(spectrum.mode(j).nu), lambda, left.r, right.r, Sign::outgoing);
  };
  const std::size_t used = detail::truncated_sum(tails, trunc, m, term, acc, tail, "perturbed_resolvent");
  Complex value = acc.value();
  if (sign == Sign::incoming) value = std::conj(value);
  return {lambda, left, right, value, used, tail};
}

double ZeroMode::u0_at(double r) const {
  check_positive(r, "r");
  const double s = nu0 + 0.5;
  const auto& grid = u0.r;
  if (r <= grid.front()) return std::pow(r, s) * (1.0 + c2 * r * r + c3 * r * r * r);
  if (r >= grid.back()) return a_coeff * std::pow(r, s) + b_coeff * std::pow(r, 1.0 - s);
  std::size_t i = std::upper_bound(grid.begin(), grid.end(), r) - grid.begin();
  const double x0 = grid[i - 1], x1 = grid[i], h = x1 - x0, t = (r - x0) / h;
  const double rel = std::exp(u0.scale(i) - u0.scale(i - 1));
  const double y0 = u0.value[i - 1], y1 = u0.value[i] * rel;
  const double d0 = u0.derivative[i - 1], d1 = u0.derivative[i] * rel;
  const double t2 = t * t, t3 = t2 * t;
  const double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
  return v * std::exp(u0.scale(i - 1));
}

double ZeroMode::radial(double r) const {
  return u0_at(r) / a_coeff * std::pow(r, -0.5 * (n - 1)) / (std::pow(2.0, nu0) * specfun::gamma(nu0 + 1.0));
}

double ZeroMode::w(const ModeSpectrum& spectrum, ConePoint z) const {
  return std::sqrt(std::max(0.0, spectrum.projector(0, z.phi, z.phi))) * radial(z.r);
}

double ZeroMode::pair(const ModeSpectrum& spectrum, ConePoint z, ConePoint z_prime) const {
  return spectrum.projector(0, z.phi, z_prime.phi) * radial(z.r) * radial(z_prime.r);
}

ZeroMode zero_mode(const RadialModel& model) {
  const ModeSpectrum& spectrum = model.spectrum;
  const double nu0 = spectrum.nu0();
  const EffectivePotential q = liouville_reduce(model, Order(nu0));
  const double big = resolved_r_match(model);
  const double r0 = model.r_min > 0.0 ? model.r_min : 1e-3;
  if (!(r0 < big)) throw ConfigError("zero_mode: r_min must be below r_match");
  const Frobenius f = frobenius(nu0, 0.0, q.perturbation(), r0);

  ZeroMode z;
  z.nu0 = nu0;
  z.multiplicity = static_cast<std::size_t>(spectrum.mode(0).multiplicity);
  z.n = spectrum.dimension();
  z.c2 = f.c2;
  z.c3 = f.c3;

  constexpr std::size_t kGrid = 2000;
  auto& t = z.u0;
  t.r.resize(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) t.r[i] = r0 * std::pow(big / r0, double(i) / (kGrid - 1));
  t.r.back() = big;
  t.value.resize(kGrid);
  t.derivative.resize(kGrid);
  t.log_scale.resize(kGrid);

  // Scaled by r0^s so the state starts at order one.
  ode::State<double> y = frobenius_state(f, r0);
  double ls = f.s * std::log(r0);
  ode::StepControl ctl{model.tol};
  for (std::size_t i = 0; i < kGrid; ++i) {
    if (i > 0) ode::integrate(q, y, ls, t.r[i - 1], t.r[i], ctl);
    t.value[i] = y.u;
    t.derivative[i] = y.up;
    t.log_scale[i] = ls;
  }
  const double s = f.s;
  z.a_coeff = std::exp(ls + (1.0 - s) * std::log(big)) * (y.up - y.u * (1.0 - s) / big) / (2.0 * nu0);
  z.b_coeff = std::exp(ls + s * std::log(big)) * (y.u * s / big - y.up) / (2.0 * nu0);
  if (std::abs(z.a_coeff) < 1e-10 * std::abs(z.b_coeff)) {
    std::ostringstream msg;
    msg << "zero_mode: zero resonance (|a|/|b| = " << std::abs(z.a_coeff) / std::abs(z.b_coeff)
        << "); hyp3 violated";
    throw HypothesisError(msg.str(), std::abs(z.a_coeff) / std::abs(z.b_coeff));
  }
  return z;
}

LowEnergyFit low_energy_fit(const RadialModel& model, ConePoint left, ConePoint right,
                            const std::vector<double>& lambda_grid) {
  if (lambda_grid.size() < 8) throw ConfigError("low_energy_fit: need at least 8 lambda values");
  const ZeroMode zm = zero_mode(model);
  const double p = 2.0 * zm.nu0 + 1.0;
  const std::size_t k = lambda_grid.size();
  std::vector<double> x(k), y(k), lam(k), ratio(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double l = lambda_grid[i];
    const double d = perturbed_density(model, l, left, right).value;
    if (!(d > 0.0)) {
      std::ostringstream msg;
      msg << "low_energy_fit: nonpositive density " << d << " at lambda = " << l << " (underflow)";
      throw ConvergenceError(msg.str(), d);
    }
    lam[i] = l;
    x[i] = std::log(l);
    y[i] = std::log(d);
    ratio[i] = d / std::pow(l, p);
  }
  // Least-squares line through (t, v); returns {intercept, slope}.
  auto line = [k](const std::vector<double>& t, const std::vector<double>& v) {
    double mt = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < k; ++i) mt += t[i], mv += v[i];
    mt /= k;
    mv /= k;
    double stt = 0.0, stv = 0.0;
    for (std::size_t i = 0; i < k; ++i) stt += (t[i] - mt) * (t[i] - mt), stv += (t[i] - mt) * (v[i] - mv);
    const double slope = stv / stt;
    return std::pair{mv - slope * mt, slope};
  };
  const auto [icpt, slope] = line(x, y);
  const auto [c0, c1] = line(lam, ratio);
  (void)c1;
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (icpt + slope * x[i]);
    ss += r * r;
  }
  return {slope, std::exp(icpt), c0, p, zm.pair(model.spectrum, left, right), std::sqrt(ss / k)};
}

}  // namespace conespec
