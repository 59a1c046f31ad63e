#pragma once

// Radially perturbed cone: per-mode ODE solutions for
//   -u'' + Q(r) u = lambda^2 u,   Q(r) = (nu^2 - 1/4)/r^2 + W(r),
// regular (Friedrichs) at the tip and outgoing at infinity, assembled into
// Green functions, spectral densities and the zero mode.

#include <cstddef>
#include <variant>
#include <vector>

#include "conespec/cone_kernels.hpp"
#include "conespec/cross_section.hpp"

namespace conespec {

// amplitude * exp(1 - 1/(1 - s^2)) for |s| < 1, s = (r - center)/width.
struct BumpPerturbation {
  double center;
  double width;
  double amplitude;
};

// Natural cubic spline through (r_i, W_i); zero outside the table.
struct TabulatedPerturbation {
  std::vector<double> r;
  std::vector<double> w;
};

using Perturbation = std::variant<std::monostate, BumpPerturbation, TabulatedPerturbation>;

class PerturbationFunction {
 public:
  PerturbationFunction() = default;
  explicit PerturbationFunction(Perturbation p);
  double operator()(double r) const;
  // Radius beyond which W vanishes identically (0 when W = 0).
  double support_end() const noexcept { return support_end_; }
  bool is_zero() const noexcept { return std::holds_alternative<std::monostate>(p_); }

 private:
  Perturbation p_;
  std::vector<double> m_;  // spline second derivatives
  double support_end_ = 0.0;
};

struct RadialModel {
  ModeSpectrum spectrum;
  Perturbation w_pert;
  double tol = 1e-12;
  double r_match = 0.0;  // 0: smallest dyadic R >= 1 past the support of W with |W(R)| R^2 < tol
  double r_min = 0.0;    // 0: 1e-3 min(1, 1/lambda)
};

class EffectivePotential {
 public:
  EffectivePotential(double nu, PerturbationFunction w) : nu_(nu), w_(std::move(w)) {}
  double operator()(double r) const { return (nu_ * nu_ - 0.25) / (r * r) + w_(r); }
  double nu() const noexcept { return nu_; }
  const PerturbationFunction& perturbation() const noexcept { return w_; }

 private:
  double nu_;
  PerturbationFunction w_;
};

// Validates the decay requirement (r^3 |W| nonincreasing from r_match/2 on)
// and returns Q. Throws ConfigError on violation.
EffectivePotential liouville_reduce(const RadialModel& model, Order nu);

double resolved_r_match(const RadialModel& model);
double resolved_r_min(const RadialModel& model, double lambda);

// True value at r[i] is value[i] * exp(log_scale[i]) (log_scale may be empty
// when all factors are 1); scaling keeps high-order modes representable.
template <class T>
struct SampledFunction {
  std::vector<double> r;
  std::vector<T> value;
  std::vector<T> derivative;
  std::vector<double> log_scale;
  double scale(std::size_t i) const { return log_scale.empty() ? 0.0 : log_scale[i]; }
};

// Regular solution normalized as r^{nu+1/2}(1 + O(r^2)) at the tip.
struct RegularSolution {
  SampledFunction<double> u;
  // Past r_match: u = exp(match_log_scale) (A sqrt(r) J(lambda r) + B sqrt(r) Y(lambda r)).
  double a_coeff = 0.0;
  double b_coeff = 0.0;
  double match_log_scale = 0.0;
  double r_match = 0.0;
  double match_u = 0.0;   // u and u' at r_match, in units of exp(match_log_scale)
  double match_up = 0.0;
};

// lambda = 0 is allowed (no continuation past r_match; a, b stay 0).
RegularSolution regular_solution(const RadialModel& model, Order nu, double lambda,
                                 const std::vector<double>& sample_r);

// Outgoing solution equal to sqrt(r) H^(1)_nu(lambda r) from r_match on.
SampledFunction<Complex> outgoing_solution(const RadialModel& model, Order nu, double lambda,
                                           const std::vector<double>& sample_r);

struct ModeSolution {
  double nu;
  double lambda;
  RegularSolution reg;
  SampledFunction<Complex> u_out;
  // u_reg u_out' - u_reg' u_out at r_match; true value carries exp(reg.match_log_scale).
  Complex wronskian;
  // Max relative deviation of the pointwise Wronskian over the samples.
  double wronskian_variation;
};

ModeSolution solve_mode(const RadialModel& model, Order nu, double lambda, const std::vector<double>& sample_r);

// -u_reg(r_<) u_out(r_>) / Wronskian, conjugated for the incoming sign.
// Reduces to mode_green_exact when W = 0. Throws HypothesisError when the
// Wronskian is numerically zero.
Complex mode_green_perturbed(const RadialModel& model, Order nu, double lambda, double r, double r_prime,
                             Sign sign);

// lambda u_reg(r) u_reg(r') / (A^2 + B^2), the per-mode density in
// Schrodinger form; equals (2 lambda / pi) Im mode_green_perturbed(+).
double mode_density_perturbed(const RadialModel& model, Order nu, double lambda, double r, double r_prime);

// Assembled scalar kernels for the perturbed model (mode sums as in
// cone_kernels; the free-cone tail bounds are used for truncation).
DensitySample perturbed_density(const RadialModel& model, double lambda, ConePoint left, ConePoint right,
                                const Truncation& trunc = {});
KernelSample perturbed_resolvent(const RadialModel& model, double lambda, ConePoint left, ConePoint right,
                                 Sign sign, const Truncation& trunc = {});

struct ZeroMode {
  double nu0;
  std::size_t multiplicity;
  // r^{nu0+1/2}(1 + c2 r^2 + c3 r^3 + ...) at the tip, tabulated on a log
  // grid over [r_min, r_match]; evaluated by cubic Hermite interpolation.
  SampledFunction<double> u0;
  double a_coeff;              // u0 ~ a r^{nu0+1/2} + b r^{1/2-nu0} at large r
  double b_coeff;
  int n;
  // rho(r) = u0(r)/a r^{-(n-1)/2} / (2^{nu0} Gamma(nu0+1)).
  double radial(double r) const;
  // w(z) for a simple lowest mode (W(y) = sqrt(Pi_0(y, y)) > 0).
  double w(const ModeSpectrum& spectrum, ConePoint z) const;
  // w(z) w(z') summed over an orthonormal basis of the nu0 eigenspace.
  double pair(const ModeSpectrum& spectrum, ConePoint z, ConePoint z_prime) const;
  double u0_at(double r) const;

  double c2 = 0.0, c3 = 0.0;
};

// Throws HypothesisError (value |a|/|b|) when |a| < 1e-10 |b|.
ZeroMode zero_mode(const RadialModel& model);

struct LowEnergyFit {
  double slope;
  double intercept_coefficient;  // exp(intercept) of the free-slope fit
  double coefficient;            // lambda -> 0 limit of density / lambda^{2 nu0 + 1} (linear fit in lambda)
  double predicted_slope;
  double predicted_coefficient;  // w(left) w(right)
  double residual_rms;
};

LowEnergyFit low_energy_fit(const RadialModel& model, ConePoint left, ConePoint right,
                            const std::vector<double>& lambda_grid);

}  // namespace conespec
