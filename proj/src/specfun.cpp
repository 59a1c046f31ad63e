#include "conespec/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conespec/errors.hpp"

namespace conespec::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr double kRescale = 1e200;
constexpr int kMaxIter = 2000000;

// Taylor coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k (A&S 6.1.34).
constexpr double kRecipGamma[] = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

// Quantities of the Temme series for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
// evaluated from the even/odd parts of the 1/Gamma series, so there is no
// cancellation at small mu.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  constexpr int n = sizeof(kRecipGamma) / sizeof(kRecipGamma[0]);
  // 1/Gamma(1+x) = sum_k c_k x^{k-1}; split into even (k odd) and odd
  // (k even) powers of x.
  const double mu2 = mu * mu;
  double even = 0.0, odd = 0.0;
  for (int k = (n % 2 == 1 ? n : n - 1); k >= 1; k -= 2) even = even * mu2 + kRecipGamma[k - 1];
  for (int k = (n % 2 == 0 ? n : n - 1); k >= 2; k -= 2) odd = odd * mu2 + kRecipGamma[k - 1];
  // 1/Gamma(1+mu) = even + mu*odd, 1/Gamma(1-mu) = even - mu*odd.
  TemmeGammas g;
  g.gam1 = -odd;
  g.gam2 = even;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

void check_argument(double nu, double z, const char* fn) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                      std::to_string(z));
  }
  (void)nu;
}

// (z/2)^nu / Gamma(nu+1), computed without intermediate overflow.
double leading_power(double nu, double z) {
  if (nu == 0.0) return 1.0;
  if (nu <= 150.0) {
    const double p = std::pow(0.5 * z, nu);
    if (p > 1e-290 && std::isfinite(p)) return p / std::tgamma(nu + 1.0);
  }
  return std::exp(nu * std::log(0.5 * z) - std::lgamma(nu + 1.0));
}

// Ascending series; used when z^2/4 <= nu + 1 so terms shrink from k = 0.
double bessel_j_series(double nu, double z) {
  const double lead = leading_power(nu, z);
  if (lead == 0.0) return 0.0;
  const double q = -0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return lead * sum;
}

double bessel_i_series(double nu, double z) {
  const double lead = leading_power(nu, z);
  if (lead == 0.0) return 0.0;
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term < kEps * sum) break;
  }
  return lead * sum;
}

// Hankel's large-argument expansion at order mu in [0, 2); accurate to
// rounding once x >= 25.
void hankel_asymptotic(double mu, double x, double& j, double& y) {
  const double m4 = 4.0 * mu * mu;
  double p = 1.0, q = 0.0, t = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = t * (m4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    if (std::abs(next) > std::abs(t) && k > 2) break;
    t = next;
    // a_k/x^k enters P (k even) or Q (k odd) with sign (-1)^{floor(k/2)}.
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sgn * t;
    } else {
      q += sgn * t;
    }
    if (std::abs(t) < 1e-18) break;
  }
  const double chi = x - (0.5 * mu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi), s = std::sin(chi);
  j = amp * (p * c - q * s);
  y = amp * (p * s + q * c);
}

// Large x: Hankel expansion at mu and mu+1, upward recurrence for Y (always
// stable) and for J while the order stays below x; above that, J comes
// from CF1 at nu (which converges quickly when nu > x) and a downward
// recurrence matched to the upward values.
BesselJY jy_large_x(double xnu, double x) {
  const int nfloor = static_cast<int>(xnu);
  const double mu = xnu - nfloor;
  double j0, y0, j1, y1;
  hankel_asymptotic(mu, x, j0, y0);
  hankel_asymptotic(mu + 1.0, x, j1, y1);
  const double xi = 1.0 / x;

  // Upward for Y to order nu+1.
  double ya = y0, yb = y1;
  for (int l = 1; l <= nfloor; ++l) {
    const double yn = 2.0 * (mu + l) * xi * yb - ya;
    ya = yb;
    yb = yn;
    if (!std::isfinite(yb)) break;
  }
  BesselJY out{};
  out.y = ya;
  out.yp = xnu * xi * ya - yb;
  if (!std::isfinite(out.y) || !std::isfinite(out.yp)) {
    throw RangeError("bessel_jy: Y_nu(z) overflows for nu=" + std::to_string(xnu) +
                     ", z=" + std::to_string(x));
  }

  const int up_to = std::min(nfloor, static_cast<int>(x));
  double ja = j0, jb = j1;
  for (int l = 1; l <= up_to; ++l) {
    const double jn = 2.0 * (mu + l) * xi * jb - ja;
    ja = jb;
    jb = jn;
  }
  if (up_to == nfloor) {
    out.j = ja;
    out.jp = xnu * xi * ja - jb;
    return out;
  }
  // CF1 at nu.
  double h = xnu * xi;
  double b = 2.0 * xi * xnu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIter; ++i) {
    b += 2.0 * xi;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i == kMaxIter) throw ConvergenceError("bessel_jy: CF1 did not converge", std::abs(h));
  double rjl = 1e-30;
  double rjpl = h * rjl;
  double fact = xnu * xi;
  int scale_steps = 0;
  for (int l = nfloor - 1; l >= up_to; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::abs(rjl) > kRescale) {
      rjl /= kRescale;
      rjpl /= kRescale;
      ++scale_steps;
    }
  }
  // rjl now sits at order mu + up_to, matching `ja`.
  double scale = ja / rjl;
  if (scale_steps > 0) {
    scale = std::copysign(std::exp(std::log(std::abs(scale)) - scale_steps * std::log(kRescale)),
                          scale);
  }
  out.j = 1e-30 * scale;
  out.jp = h * 1e-30 * scale;
  return out;
}

BesselJY jy_impl(double xnu, double x) {
  if (x >= 25.0) return jy_large_x(xnu, x);
  const int nl = (x < 2.0) ? static_cast<int>(xnu + 0.5)
                           : std::max(0, static_cast<int>(xnu - x + 1.5));
  const double xmu = xnu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  // CF1: J'_nu / J_nu by modified Lentz.
  int isign = 1;
  double h = xnu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * xnu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIter; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i == kMaxIter) throw ConvergenceError("bessel_jy: CF1 did not converge", std::abs(h));

  // Downward recurrence nu -> mu with rescaling; `scale_steps` counts how
  // many times values at mu were divided by kRescale.
  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  const double rjp1 = rjpl;
  double fact = xnu * xi;
  int scale_steps = 0;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::abs(rjl) > kRescale) {
      rjl /= kRescale;
      rjpl /= kRescale;
      ++scale_steps;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu, rymu, rymup, ry1;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    d = -std::log(x2);
    double e = xmu * d;
    const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(xmu);
    double ff = 2.0 / kPi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    e = std::exp(e);
    double p = e / (g.gampl * kPi);
    double q = 1.0 / (e * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fact3 * fact3;
    c = 1.0;
    d = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      ff = (k * ff + p + q) / (k * static_cast<double>(k) - xmu2);
      c *= d / k;
      p /= (k - xmu);
      q /= (k + xmu);
      const double del = c * (ff + r * q);
      sum += del;
      const double del1 = c * p - k * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
    }
    if (k == kMaxIter) throw ConvergenceError("bessel_jy: Temme series did not converge", 0.0);
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = xmu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // CF2 (Steed): p + iq = (J' + iY')/(J + iY) at mu.
    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      a += 2 * k;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
    }
    if (k == kMaxIter) throw ConvergenceError("bessel_jy: CF2 did not converge", 0.0);
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = xmu * xi * rymu - rymup;
  }

  // Undo the recurrence normalization. J_nu = rjl1 * rjmu / (rjl * R^s).
  double scale = rjmu / rjl;
  BesselJY out{};
  if (scale_steps > 0) {
    const double log_mag = std::log(std::abs(scale)) - scale_steps * std::log(kRescale);
    scale = std::copysign(std::exp(log_mag), scale);
  }
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;

  for (int l = 1; l <= nl; ++l) {
    const double rytemp = (xmu + l) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
    if (!std::isfinite(ry1) && l < nl) break;
  }
  out.y = rymu;
  out.yp = xnu * xi * rymu - ry1;
  if (!std::isfinite(out.y) || !std::isfinite(out.yp)) {
    throw RangeError("bessel_jy: Y_nu(z) overflows for nu=" + std::to_string(xnu) +
                     ", z=" + std::to_string(x));
  }
  return out;
}

BesselIK ik_scaled_impl(double xnu, double x) {
  const int nl = static_cast<int>(xnu + 0.5);
  const double xmu = xnu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  double h = xnu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * xnu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIter; ++i) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i == kMaxIter) throw ConvergenceError("bessel_ik: CF1 did not converge", h);

  double ril = 1e-30;
  double ripl = h * ril;
  const double ril1 = ril;
  const double rip1 = ripl;
  double fact = xnu * xi;
  int scale_steps = 0;
  for (int l = nl - 1; l >= 0; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
    if (std::abs(ril) > kRescale) {
      ril /= kRescale;
      ripl /= kRescale;
      ++scale_steps;
    }
  }
  const double f = ripl / ril;

  // K_mu and K_{mu+1}, scaled by e^{x}.
  double rkmu, rk1;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    d = -std::log(x2);
    double e = xmu * d;
    const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(xmu);
    double ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      ff = (k * ff + p + q) / (k * static_cast<double>(k) - xmu2);
      c *= d / k;
      p /= (k - xmu);
      q /= (k + xmu);
      const double del = c * ff;
      sum += del;
      const double del1 = c * (p - k * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (k == kMaxIter) throw ConvergenceError("bessel_ik: Temme series did not converge", 0.0);
    const double ex = std::exp(x);
    rkmu = sum * ex;
    rk1 = sum1 * xi2 * ex;
  } else {
    b = 2.0 * (1.0 + x);
    d = 1.0 / b;
    double hh = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1;
    c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      a -= 2 * k;
      c = -a * c / (k + 1.0);
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      hh += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (k == kMaxIter) throw ConvergenceError("bessel_ik: CF2 did not converge", 0.0);
    hh = a1 * hh;
    rkmu = std::sqrt(kPi / (2.0 * x)) / s;
    rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
  }
  const double rkmup = xmu * xi * rkmu - rk1;
  // Wronskian I K' - I' K = -1/x; with K scaled by e^x, I comes out scaled
  // by e^{-x}.
  const double rimu = xi / (f * rkmu - rkmup);
  double scale = rimu / ril;
  if (scale_steps > 0) {
    scale = std::exp(std::log(scale) - scale_steps * std::log(kRescale));
  }
  BesselIK out{};
  out.i = ril1 * scale;
  out.ip = rip1 * scale;
  for (int l = 1; l <= nl; ++l) {
    const double rktemp = (xmu + l) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
    if (!std::isfinite(rk1) && l < nl) break;
  }
  out.k = rkmu;
  out.kp = xnu * xi * rkmu - rk1;
  if (!std::isfinite(out.k) || !std::isfinite(out.kp)) {
    throw RangeError("bessel_ik: K_nu(z) overflows for nu=" + std::to_string(xnu) +
                     ", z=" + std::to_string(x));
  }
  return out;
}

// value = m * exp(log_scale); lets products of a tiny J and a huge Y be
// formed without intermediate underflow or overflow.
struct Scaled {
  double m;
  double log_scale;
};

Scaled j_scaled(double nu, double z) {
  if (0.25 * z * z <= nu + 1.0) {
    const double log_lead = nu == 0.0 ? 0.0 : nu * std::log(0.5 * z) - std::lgamma(nu + 1.0);
    const double q = -0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return {sum, log_lead};
  }
  return {jy_impl(nu, z).j, 0.0};
}

Scaled y_scaled(double nu, double z) {
  // Direct evaluation while |Y| ~ Gamma(nu) (z/2)^-nu / pi stays well inside range.
  if (nu < 2.0 || std::lgamma(nu) - nu * std::log(0.5 * z) < 600.0) return {jy_impl(nu, z).y, 0.0};
  const int nfloor = static_cast<int>(nu);
  const double mu = nu - nfloor;
  const BesselJY base = jy_impl(mu, z);
  const double xi = 1.0 / z;
  double ya = base.y;
  double yb = mu * xi * base.y - base.yp;  // Y_{mu+1}
  double log_scale = 0.0;
  for (int l = 1; l < nfloor; ++l) {
    const double yn = 2.0 * (mu + l) * xi * yb - ya;
    ya = yb;
    yb = yn;
    if (std::abs(yb) > kRescale) {
      ya /= kRescale;
      yb /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return {yb, log_scale};
}

double scaled_product(Scaled a, Scaled b) {
  if (a.m == 0.0 || b.m == 0.0) return 0.0;
  return a.m * b.m * std::exp(a.log_scale + b.log_scale);
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw DomainError("Bessel order must be nonnegative and finite, got " + std::to_string(nu));
  }
}

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw RangeError("gamma: overflow at x=" + std::to_string(x));
  return g;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  }
  return std::lgamma(x);
}

double bessel_j(Order nu, double z) {
  check_argument(nu.value(), z, "bessel_j");
  if (0.25 * z * z <= nu.value() + 1.0) return bessel_j_series(nu.value(), z);
  return jy_impl(nu.value(), z).j;
}

double bessel_y(Order nu, double z) {
  check_argument(nu.value(), z, "bessel_y");
  return jy_impl(nu.value(), z).y;
}

BesselJY bessel_jy(Order nu, double z) {
  check_argument(nu.value(), z, "bessel_jy");
  return jy_impl(nu.value(), z);
}

Complex hankel1(Order nu, double z) {
  check_argument(nu.value(), z, "hankel1");
  const BesselJY v = jy_impl(nu.value(), z);
  return {v.j, v.y};
}

Complex hankel2(Order nu, double z) { return std::conj(hankel1(nu, z)); }

BesselIK bessel_ik_scaled(Order nu, double z) {
  check_argument(nu.value(), z, "bessel_ik");
  return ik_scaled_impl(nu.value(), z);
}

BesselIK bessel_ik(Order nu, double z) {
  BesselIK s = bessel_ik_scaled(nu, z);
  const double ez = std::exp(z);
  const double emz = std::exp(-z);
  s.i *= ez;
  s.ip *= ez;
  s.k *= emz;
  s.kp *= emz;
  if (!std::isfinite(s.i) || !std::isfinite(s.ip)) {
    throw RangeError("bessel_ik: I_nu(z) overflows at z=" + std::to_string(z));
  }
  return s;
}

double bessel_i(Order nu, double z) {
  check_argument(nu.value(), z, "bessel_i");
  if (0.25 * z * z <= nu.value() + 1.0) return bessel_i_series(nu.value(), z);
  return bessel_ik(nu, z).i;
}

double bessel_k(Order nu, double z) { return bessel_ik(nu, z).k; }

double j_small_arg_leading(Order nu, double z) {
  check_argument(nu.value(), z, "small_arg_leading");
  return leading_power(nu.value(), z);
}

SmallArgLeading small_arg_leading(Order nu, double z) {
  check_argument(nu.value(), z, "small_arg_leading");
  if (nu.value() == 0.0) {
    throw DomainError("log-leading-order: Hankel leading term for nu = 0 is logarithmic");
  }
  const double n = nu.value();
  SmallArgLeading out{};
  out.j_lead = leading_power(n, z);
  const double mag = std::exp(std::lgamma(n) - n * std::log(0.5 * z)) / kPi;
  if (!std::isfinite(mag)) throw RangeError("small_arg_leading: Hankel term overflows");
  // 1/(i pi) = -i/pi
  out.h_lead = Complex(0.0, -mag);
  return out;
}

Complex bessel_j_hankel1_product(Order nu, double a, double b) {
  check_argument(nu.value(), a, "bessel_j_hankel1_product");
  check_argument(nu.value(), b, "bessel_j_hankel1_product");
  const Scaled ja = j_scaled(nu.value(), a);
  const Scaled jb = j_scaled(nu.value(), b);
  const Scaled yb = y_scaled(nu.value(), b);
  return {scaled_product(ja, jb), scaled_product(ja, yb)};
}

double bessel_jj_product(Order nu, double a, double b) {
  check_argument(nu.value(), a, "bessel_jj_product");
  check_argument(nu.value(), b, "bessel_jj_product");
  return scaled_product(j_scaled(nu.value(), a), j_scaled(nu.value(), b));
}

}  // namespace conespec::specfun
