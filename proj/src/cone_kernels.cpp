#include "conespec/cone_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "conespec/detail/mode_sum.hpp"
#include "conespec/errors.hpp"
#include "conespec/summation.hpp"

namespace conespec {

using detail::pair_prefactor;
using detail::suffix_tails;
using detail::truncated_sum;

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

}  // namespace

Complex mode_green_exact(Order nu, double lambda, double r, double r_prime, Sign sign) {
  check_positive(lambda, "lambda");
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  const double rs = std::min(r, r_prime), rl = std::max(r, r_prime);
  const Complex jh = specfun::bessel_j_hankel1_product(nu, lambda * rs, lambda * rl);
  const Complex g = Complex(0.0, 0.5 * kPi) * std::sqrt(r * r_prime) * jh;
  return sign == Sign::outgoing ? g : std::conj(g);
}

double mode_green_imag(Order nu, double k, double r, double r_prime) {
  check_positive(k, "k");
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  const double rs = std::min(r, r_prime), rl = std::max(r, r_prime);
  const auto small = specfun::bessel_ik_scaled(nu, k * rs);
  const auto large = specfun::bessel_ik_scaled(nu, k * rl);
  // e^{-k rs} I(k rs) * e^{k rl} K(k rl) * e^{k (rs - rl)}
  return std::sqrt(r * r_prime) * small.i * large.k * std::exp(k * (rs - rl));
}

double zero_energy_inverse(Order nu, double r, double r_prime) {
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  if (nu.value() == 0.0) throw DomainError("zero_energy_inverse: nu = 0 is excluded by hyp2");
  const double rs = std::min(r, r_prime), rl = std::max(r, r_prime);
  return std::sqrt(r * r_prime) * std::pow(rs / rl, nu.value()) / (2.0 * nu.value());
}

double mode_density_exact(Order nu, double lambda, double r, double r_prime) {
  check_positive(lambda, "lambda");
  check_positive(r, "r");
  check_positive(r_prime, "r_prime");
  return lambda * std::sqrt(r * r_prime) * specfun::bessel_jj_product(nu, lambda * r, lambda * r_prime);
}

KernelSample resolvent_kernel(const ModeSpectrum& spectrum, double lambda, ConePoint left, ConePoint right,
                              Sign sign, const Truncation& trunc) {
  check_positive(lambda, "lambda");
  check_positive(left.r, "r");
  check_positive(right.r, "r_prime");
  if (left.r == right.r && same_point_on_y(left.phi, right.phi))
    throw DomainError("resolvent_kernel: coincident points (diagonal singularity)");
  const double rs = std::min(left.r, right.r), rl = std::max(left.r, right.r);
  const double a = lambda * rs, b = lambda * rl;
  const double pref = pair_prefactor(spectrum.dimension(), left.r, right.r);
  const std::size_t m = std::min(spectrum.size(), trunc.mode_cap);

  const auto bounds = detail::resolvent_bounds(spectrum, m, lambda, left.r, right.r);
  const auto tails = suffix_tails(bounds);
  const auto proj = spectrum.projectors(left.phi, right.phi, m);

  CompensatedComplexSum acc;
  double tail = 0.0;
  auto term = [&](std::size_t j) {
    const Complex jh = specfun::bessel_j_hankel1_product(Order(spectrum.mode(j).nu), a, b);
    return proj[j] * pref * Complex(0.0, 0.5 * kPi) * jh;
  };
  const std::size_t used = truncated_sum(tails, trunc, m, term, acc, tail, "resolvent_kernel");
  Complex value = acc.value();
  if (sign == Sign::incoming) value = std::conj(value);
  return {lambda, left, right, value, used, tail};
}

DensitySample spectral_measure_density(const ModeSpectrum& spectrum, double lambda, ConePoint left,
                                       ConePoint right, const Truncation& trunc) {
  check_positive(lambda, "lambda");
  check_positive(left.r, "r");
  check_positive(right.r, "r_prime");
  const double a = lambda * left.r, b = lambda * right.r;
  const double pref = pair_prefactor(spectrum.dimension(), left.r, right.r);
  const std::size_t m = std::min(spectrum.size(), trunc.mode_cap);

  const auto bounds = detail::density_bounds(spectrum, m, lambda, left.r, right.r);
  const auto tails = suffix_tails(bounds);
  const auto proj = spectrum.projectors(left.phi, right.phi, m);

  CompensatedSum acc;
  double tail = 0.0;
  auto term = [&](std::size_t j) {
    return proj[j] * lambda * pref * specfun::bessel_jj_product(Order(spectrum.mode(j).nu), a, b);
  };
  const std::size_t used = truncated_sum(tails, trunc, m, term, acc, tail, "spectral_measure_density");
  return {lambda, left, right, acc.value(), used, tail};
}

Complex euclid_free_resolvent(int n, double lambda, double d) {
  if (n < 2) throw DomainError("euclid_free_resolvent: n must be >= 2");
  check_positive(lambda, "lambda");
  check_positive(d, "d");
  const double nu = 0.5 * (n - 2);
  const double amp = std::pow(lambda / (2.0 * kPi * d), nu);
  return Complex(0.0, 0.25) * amp * specfun::hankel1(Order(nu), lambda * d);
}

double chordal_distance(ConePoint a, ConePoint b) {
  const double theta = std::abs(a.phi - b.phi);
  const double d2 = a.r * a.r + b.r * b.r - 2.0 * a.r * b.r * std::cos(theta);
  return std::sqrt(std::max(0.0, d2));
}

}  // namespace conespec
