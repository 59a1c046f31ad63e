#pragma once

// Bessel, Hankel and modified Bessel functions of real order nu >= 0 and
// positive real argument, plus Gamma.
//
// J and Y are computed together: continued fraction for J'/J at nu,
// downward recurrence to |mu| <= 1/2, Temme series (z < 2) or the Steed
// complex continued fraction (z >= 2) at mu, then upward recurrence for Y.
// J alone uses the ascending series when z^2/4 <= nu + 1, where the series
// terms decrease monotonically.

#include <complex>

namespace conespec::specfun {

using Complex = std::complex<double>;

// Bessel order. Nonnegative and finite.
class Order {
 public:
  explicit Order(double nu);
  double value() const noexcept { return nu_; }
  friend bool operator==(Order a, Order b) noexcept { return a.nu_ == b.nu_; }

 private:
  double nu_;
};

double gamma(double x);
double log_gamma(double x);

struct BesselJY {
  double j;
  double y;
  double jp;  // dJ/dz
  double yp;  // dY/dz
};

struct BesselIK {
  double i;
  double k;
  double ip;
  double kp;
};

double bessel_j(Order nu, double z);
double bessel_y(Order nu, double z);
BesselJY bessel_jy(Order nu, double z);

Complex hankel1(Order nu, double z);
// Exactly the complex conjugate of hankel1 for real arguments.
Complex hankel2(Order nu, double z);

double bessel_i(Order nu, double z);
double bessel_k(Order nu, double z);
BesselIK bessel_ik(Order nu, double z);
// e^{-z} I and e^{z} K (and derivatives scaled the same way); never
// overflow for large z.
BesselIK bessel_ik_scaled(Order nu, double z);

struct SmallArgLeading {
  double j_lead;   // (z/2)^nu / Gamma(nu+1)
  Complex h_lead;  // Gamma(nu) (z/2)^{-nu} / (i pi)
};

// Leading small-argument terms of J and H^(1). Throws DomainError
// ("log-leading-order") for nu == 0, where the Hankel term is logarithmic.
SmallArgLeading small_arg_leading(Order nu, double z);
// (z/2)^nu / Gamma(nu+1); valid for every nu >= 0.
double j_small_arg_leading(Order nu, double z);

// J_nu(a) H^(1)_nu(b) and J_nu(a) J_nu(b), formed in scaled arithmetic so
// that large orders (tiny J, huge Y) neither underflow nor overflow when the
// product itself is representable. Intended for a <= b.
Complex bessel_j_hankel1_product(Order nu, double a, double b);
double bessel_jj_product(Order nu, double a, double b);

}  // namespace conespec::specfun
