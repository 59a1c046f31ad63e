#pragma once

// Low-energy-localized propagators chi(P) F_t(P) by Stone-formula
// quadrature against the spectral density, long-time decay fits and the
// model integral int chi(lambda) e^{i t lambda} lambda^s dlambda.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "conespec/radial_scattering.hpp"

namespace conespec {

enum class PropagatorKind {
  schrodinger,  // e^{i t lambda^2}
  wave_sin,     // sin(t lambda) / lambda
  wave_cos,     // cos(t lambda)
};

const char* to_string(PropagatorKind kind);
PropagatorKind propagator_kind_from_string(const std::string& name);

struct Cutoff {
  double lambda_c = 1.0;
};

// 1 on [0, lambda_c/2], 0 on [lambda_c, inf), and exp(1 - 1/(1 - h^2)) in
// between, where h is the flat smooth step f(x)/(f(x) + f(1-x)),
// f(x) = exp(-1/x), x = 2 lambda/lambda_c - 1. Infinitely differentiable;
// h(1/2) = 1/2.
double cutoff_chi(double lambda, double lambda_c);

// Fastest phase rate of F_t on [0, lambda_c].
double phase_rate(PropagatorKind kind, double lambda_c, double t);
// Uniform panels needed for panel width <= (2 pi / phase rate) / 10.
std::size_t required_panels(PropagatorKind kind, double lambda_c, double t);

// Gauss-Legendre(16) nodes over [0, lambda_c] with chi(lambda) folded into
// the weights and the spectral density cached; reused for every t.
struct DensityTable {
  double lambda_c = 0.0;
  std::size_t uniform_panels = 0;
  std::size_t modes = 0;  // fixed mode count used at every node
  ConePoint left, right;
  std::vector<double> lambda;
  std::vector<double> weight;
  std::vector<double> density;
};

// n_lambda is the number of uniform-grid nodes (16 per panel); a few graded
// panels are added near lambda = 0. Density evaluation is split across
// `threads` workers; the result does not depend on the thread count.
DensityTable density_table(const RadialModel& model, Cutoff cutoff, ConePoint left, ConePoint right,
                           std::size_t n_lambda, unsigned threads = 1);

// Throws ConfigError when the table undersamples the oscillation at t.
Complex stone_quadrature(const DensityTable& table, PropagatorKind kind, double t);
Complex stone_quadrature(const RadialModel& model, PropagatorKind kind, Cutoff cutoff, double t, ConePoint left,
                         ConePoint right, std::size_t n_lambda, unsigned threads = 1);

struct QuadratureCheck {
  Complex value;
  Complex refined;  // with n_lambda doubled
  double relative_change;
};
QuadratureCheck stone_quadrature_checked(const RadialModel& model, PropagatorKind kind, Cutoff cutoff, double t,
                                         ConePoint left, ConePoint right, std::size_t n_lambda,
                                         unsigned threads = 1);

struct ModelIntegral {
  Complex quadrature;
  Complex closed_form;  // Gamma(s+1) e^{i pi (s+1)/2} t^{-(s+1)}
  std::size_t nodes;
};

// Evaluated in quadruple precision: the result is smaller than the
// integrand by (lambda_c t)^{s+1}.
ModelIntegral model_integral(double s, double t, Cutoff cutoff);

struct TimeSample {
  double t;
  Complex value;
};

struct DecayFit {
  double exponent = 0.0;   // value ~ coefficient t^{-exponent}
  Complex coefficient;     // mean of value t^{reference exponent}
  double ci_exponent = 0.0;  // two standard errors; infinite when |value| is not monotone
  double predicted_exponent = 0.0;
  Complex predicted_coefficient;
  std::size_t points = 0;
  bool monotone = true;
  std::string warning;
};

// Regression of log|value| on log t over samples with t in [t_lo, t_hi].
// The coefficient uses reference_exponent when it is finite, else the
// fitted exponent. Needs at least 12 samples in the window.
DecayFit fit_decay(const std::vector<TimeSample>& series, double t_lo, double t_hi,
                   double reference_exponent = std::numeric_limits<double>::quiet_NaN());

struct PredictedDecay {
  double exponent;
  Complex coefficient;
};

PredictedDecay predicted_constants(const RadialModel& model, PropagatorKind kind, ConePoint z, ConePoint z_prime);

// Negative eigenvalues of P, counted per mode by the nodes of the zero-energy
// regular solution (Sturm oscillation) over the first `modes` modes.
std::size_t bound_state_count(const RadialModel& model, std::size_t modes = 4);

// Half-octave grid t0 2^{k/2}, k = 0..2 log2(t1/t0).
std::vector<double> dyadic_times(double t0, double t1);

}  // namespace conespec
