#pragma once

// Exact-cone kernels. Per-mode Green functions are in Schrodinger (1-D
// reduced) form; assembled kernels are scalar kernels against the
// Riemannian density r^{n-1} dr dh.

#include <cstddef>

#include "conespec/cross_section.hpp"
#include "conespec/specfun.hpp"

namespace conespec {

using specfun::Complex;
using specfun::Order;

struct ConePoint {
  double r;
  double phi = 0.0;  // position on Y, see cross_section.hpp
};

enum class Sign { outgoing, incoming };  // R(lambda + i0), R(lambda - i0)

// Mode-sum truncation. The sum stops once the tail bound falls below
// rel_tol times max(|partial sum|, scale of the leading term). A nonzero
// `fixed_modes` sums exactly that many modes (the bound is still reported).
struct Truncation {
  double rel_tol = 1e-12;
  std::size_t mode_cap = 5000;
  std::size_t fixed_modes = 0;
};

struct KernelSample {
  double lambda;
  ConePoint left, right;
  Complex value;
  std::size_t modes_used;
  double tail_bound;
};

struct DensitySample {
  double lambda;
  ConePoint left, right;
  double value;
  std::size_t modes_used;
  double tail_bound;
};

// (+-i pi/2) sqrt(r r') J_nu(lambda r_<) H^(+-)_nu(lambda r_>).
Complex mode_green_exact(Order nu, double lambda, double r, double r_prime, Sign sign);
// sqrt(r r') I_nu(k r_<) K_nu(k r_>).
double mode_green_imag(Order nu, double k, double r, double r_prime);
// sqrt(r r') (r_</r_>)^nu / (2 nu); nu = 0 is a DomainError.
double zero_energy_inverse(Order nu, double r, double r_prime);

// Per-mode spectral density in Schrodinger form: lambda sqrt(r r') J J.
double mode_density_exact(Order nu, double lambda, double r, double r_prime);

// Throws DomainError at the diagonal singularity (r = r', same point of Y)
// and ConvergenceError (carrying the achieved bound) when the mode cap or
// the known spectrum is exhausted first.
KernelSample resolvent_kernel(const ModeSpectrum& spectrum, double lambda, ConePoint left,
                              ConePoint right, Sign sign, const Truncation& trunc = {});

DensitySample spectral_measure_density(const ModeSpectrum& spectrum, double lambda, ConePoint left,
                                       ConePoint right, const Truncation& trunc = {});

// (i/4) (lambda/(2 pi d))^{(n-2)/2} H^(1)_{(n-2)/2}(lambda d).
Complex euclid_free_resolvent(int n, double lambda, double d);

// Euclidean distance between cone points of the round cone over S^{n-1}
// whose phi coordinates lie on one great circle.
double chordal_distance(ConePoint a, ConePoint b);

}  // namespace conespec
