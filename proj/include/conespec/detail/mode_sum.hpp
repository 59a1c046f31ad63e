#pragma once

// Shared mode-sum truncation machinery for the cone and perturbed kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "conespec/cone_kernels.hpp"
#include "conespec/errors.hpp"

namespace conespec::detail {

// tails[J] bounds sum_{j >= J} |term_j|; the part beyond the known
// spectrum is extrapolated geometrically from the last two bounds.
inline std::vector<double> suffix_tails(const std::vector<double>& bounds) {
  const std::size_t m = bounds.size();
  std::vector<double> tails(m + 1, 0.0);
  double beyond = std::numeric_limits<double>::infinity();
  if (m >= 2 && std::isfinite(bounds[m - 1]) && bounds[m - 2] > 0.0) {
    const double q = bounds[m - 1] / bounds[m - 2];
    if (q < 1.0) beyond = bounds[m - 1] * q / (1.0 - q);
  } else if (m >= 1 && bounds[m - 1] == 0.0) {
    beyond = 0.0;
  }
  tails[m] = beyond;
  for (std::size_t j = m; j-- > 0;) tails[j] = tails[j + 1] + bounds[j];
  return tails;
}

inline double pair_prefactor(int n, double r, double r_prime) { return std::pow(r * r_prime, -0.5 * (n - 2)); }

// |J_nu(z)| <= (z/2)^nu / Gamma(nu+1) for nu >= -1/2.
inline std::vector<double> density_bounds(const ModeSpectrum& spectrum, std::size_t m, double lambda, double r,
                                          double r_prime) {
  const double pref = pair_prefactor(spectrum.dimension(), r, r_prime);
  const double log_q = std::log(0.25 * lambda * lambda * r * r_prime);
  std::vector<double> bounds(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double nu = spectrum.mode(j).nu;
    bounds[j] = spectrum.mode(j).diagonal * lambda * pref * std::exp(nu * log_q - 2.0 * std::lgamma(nu + 1.0));
  }
  return bounds;
}

// Large-order estimate (pi/2)|J(a) H(b)| ~ (a/b)^nu / (2 nu), with a
// correction for the first subleading terms; only trusted once nu is well
// past the turning point b.
inline std::vector<double> resolvent_bounds(const ModeSpectrum& spectrum, std::size_t m, double lambda, double r,
                                            double r_prime) {
  const double rs = std::min(r, r_prime), rl = std::max(r, r_prime);
  const double b = lambda * rl;
  const double pref = pair_prefactor(spectrum.dimension(), r, r_prime);
  const double log_rho = std::log(rs / rl);
  std::vector<double> bounds(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double nu = spectrum.mode(j).nu;
    if (nu > 1.0 + b + 0.5 * b * b) {
      const double corr = std::exp(b * b / (4.0 * (nu - 1.0)));
      bounds[j] = 2.0 * spectrum.mode(j).diagonal * pref * std::exp(nu * log_rho) / (2.0 * nu) * corr;
    } else {
      bounds[j] = std::numeric_limits<double>::infinity();
    }
  }
  return bounds;
}

[[noreturn]] inline void truncation_failure(const char* what, double achieved) {
  std::ostringstream msg;
  msg << what << ": mode sum did not reach the requested tolerance (tail bound " << achieved << ")";
  throw ConvergenceError(msg.str(), achieved);
}

// Sums term(j) in ascending j until the tail bound drops below
// rel_tol * max(|partial sum|, largest term).
template <class Term, class Acc>
std::size_t truncated_sum(const std::vector<double>& tails, const Truncation& trunc, std::size_t available,
                          Term&& term, Acc& acc, double& tail_out, const char* what) {
  const std::size_t limit = std::min(available, trunc.mode_cap);
  if (trunc.fixed_modes > 0) {
    const std::size_t count = std::min(trunc.fixed_modes, limit);
    for (std::size_t j = 0; j < count; ++j) acc.add(term(j));
    tail_out = tails[count];
    return count;
  }
  double scale = 0.0;
  for (std::size_t j = 0; j < limit; ++j) {
    const auto t = term(j);
    acc.add(t);
    scale = std::max(scale, std::abs(t));
    const double ref = std::max(std::abs(acc.value()), scale);
    if (tails[j + 1] <= trunc.rel_tol * ref) {
      tail_out = tails[j + 1];
      return j + 1;
    }
  }
  truncation_failure(what, tails[limit]);
}

}  // namespace conespec::detail
