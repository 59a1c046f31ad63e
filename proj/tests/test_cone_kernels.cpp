#include "doctest.h"

#include <cmath>
#include <numbers>

#include "conespec/cone_kernels.hpp"
#include "conespec/errors.hpp"
#include "conespec/quadrature.hpp"

using namespace conespec;
constexpr double pi = std::numbers::pi;

namespace {
double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("per-mode exact Green function") {
  const Complex g = mode_green_exact(Order(0.5), 1, 1, 2, Sign::outgoing);
  const Complex expect = std::sin(1.0) * std::exp(Complex(0, 2));
  CHECK(rel(g, expect) < 1e-12);
  CHECK(g.real() == doctest::Approx(-0.350175).epsilon(1e-5));
  CHECK(g.imag() == doctest::Approx(0.765147).epsilon(1e-5));
  for (double nu : {0.5, 1.0, 2.7, 30.0}) {
    for (auto [r, rp] : {std::pair{1.0, 2.0}, {0.3, 0.1}, {5.0, 5.0}}) {
      const Complex p = mode_green_exact(Order(nu), 1.3, r, rp, Sign::outgoing);
      CHECK(mode_green_exact(Order(nu), 1.3, r, rp, Sign::incoming) == std::conj(p));
      CHECK(mode_green_exact(Order(nu), 1.3, rp, r, Sign::outgoing) == p);
    }
  }
  CHECK_THROWS_AS((void)mode_green_exact(Order(1), 0.0, 1, 2, Sign::outgoing), DomainError);
}

TEST_CASE("imaginary-energy Green function and zero-energy inverse") {
  const double expect = std::sqrt(2.0) * std::sqrt(2 / pi) * std::sinh(1.0) * std::sqrt(pi / 4) * std::exp(-2.0);
  CHECK(mode_green_imag(Order(0.5), 1, 1, 2) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(mode_green_imag(Order(0.5), 1, 1, 2) == doctest::Approx(0.1590462).epsilon(1e-6));
  double prev = 1e300;
  for (double k = 0.01; k < 20; k *= 1.5) {
    const double v = mode_green_imag(Order(1.5), k, 1, 2);
    CHECK(v > 0);
    CHECK(v < prev);
    CHECK(v == mode_green_imag(Order(1.5), k, 2, 1));
    prev = v;
  }
  CHECK(zero_energy_inverse(Order(1), 1, 2) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
  CHECK(zero_energy_inverse(Order(1), 1, 2) == doctest::Approx(0.353553).epsilon(1e-6));
  CHECK(std::abs(mode_green_imag(Order(1), 1e-4, 1, 2) - zero_energy_inverse(Order(1), 1, 2)) < 1e-6);
  CHECK(zero_energy_inverse(Order(2.5), 3, 3) == doctest::Approx(3 / 5.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)zero_energy_inverse(Order(0), 1, 2), DomainError);
}

TEST_CASE("analytic continuation: k = -i lambda") {
  // (i pi/2) J_nu(lambda r) H_nu(lambda r') equals I_nu(k r) K_nu(k r') at k = -i lambda;
  // checked through the small-argument regime where both reduce to the zero-energy inverse.
  for (double nu : {0.5, 1.0, 2.0}) {
    const Complex g = mode_green_exact(Order(nu), 1e-5, 1, 2, Sign::outgoing);
    CHECK(std::abs(g.real() - zero_energy_inverse(Order(nu), 1, 2)) < 1e-6 * zero_energy_inverse(Order(nu), 1, 2));
  }
}

TEST_CASE("euclidean free resolvent closed forms") {
  CHECK(rel(euclid_free_resolvent(3, 1, 1), std::exp(Complex(0, 1)) / (4 * pi)) < 1e-13);
  CHECK(rel(euclid_free_resolvent(3, 2, 0.5), std::exp(Complex(0, 1)) / (4 * pi * 0.5)) < 1e-13);
  CHECK(euclid_free_resolvent(3, 1, 1).real() == doctest::Approx(0.0430).epsilon(2e-3));
  CHECK(euclid_free_resolvent(3, 1, 1).imag() == doctest::Approx(0.0670).epsilon(2e-3));
}

TEST_CASE("n = 4 free resolvent: plane-wave quadrature, Helmholtz ODE, Newtonian limit") {
  const double lambda = 1.0;
  for (double d : {0.5, 1.0, 3.0}) {
    // Im R = (pi/(2 lambda)) dE/dlambda, dE = lambda^3/(2pi)^4 int_{S^3} e^{i lambda d w1} dw
    //      = lambda^3/(2pi)^4 * 4 pi int_{-1}^{1} cos(lambda d t) sqrt(1 - t^2) dt.
    const auto rule = gauss_legendre(200);
    double integral = 0;
    for (int i = 0; i < 200; ++i) {
      // t = sin(u) removes the endpoint singularity of sqrt(1 - t^2)'s derivative
      const double u = 0.5 * pi * rule.x[i];
      const double t = std::sin(u);
      integral += 0.5 * pi * rule.w[i] * std::cos(lambda * d * t) * std::cos(u) * std::cos(u);
    }
    const double de = std::pow(lambda, 3) / std::pow(2 * pi, 4) * 4 * pi * integral;
    const Complex g = euclid_free_resolvent(4, lambda, d);
    CHECK(std::abs(g.imag() - pi / (2 * lambda) * de) < 1e-4 * std::abs(g));

    // G'' + (3/d) G' + lambda^2 G = 0
    const double h = 1e-3;
    const Complex gp = (euclid_free_resolvent(4, lambda, d + h) - euclid_free_resolvent(4, lambda, d - h)) / (2 * h);
    const Complex gpp = (euclid_free_resolvent(4, lambda, d + h) - 2.0 * g + euclid_free_resolvent(4, lambda, d - h)) / (h * h);
    CHECK(std::abs(gpp + 3.0 / d * gp + lambda * lambda * g) < 1e-4 * std::abs(g) / (d * d));
  }
  // Newtonian potential of R^4: 1/(4 pi^2 d^2)
  const double d = 1e-4;
  CHECK(rel(euclid_free_resolvent(4, 1, d).real(), 1 / (4 * pi * pi * d * d)) < 1e-6);
}

TEST_CASE("mode-sum resolvent reproduces free space, n = 3 and n = 4") {
  auto s3 = sphere_spectrum(3, 0, 3000);
  auto s4 = sphere_spectrum(4, 0, 3000);
  const auto ray = resolvent_kernel(s3, 1, {1, 0}, {2, 0}, Sign::outgoing);
  CHECK(rel(ray.value, std::exp(Complex(0, 1)) / (4 * pi)) < 1e-6);
  CHECK(ray.value.real() == doctest::Approx(0.0430).epsilon(2e-3));
  CHECK(ray.value.imag() == doctest::Approx(0.0670).epsilon(2e-3));
  CHECK(resolvent_kernel(s3, 1, {1, 0}, {2, 0}, Sign::incoming).value == std::conj(ray.value));

  for (double lambda : {0.5, 1.0, 2.0}) {
    for (double d : {0.5, 1.0, 3.0}) {
      // r = 2, r' = 1.5 at the angle giving chordal distance d (d = 0.5 lies on a ray)
      const double c = (6.25 - d * d) / 6.0;
      const ConePoint p{2.0, 0.0}, q{1.5, std::acos(std::min(1.0, c))};
      CHECK(chordal_distance(p, q) == doctest::Approx(d).epsilon(1e-12));
      for (auto* s : {&s3, &s4}) {
        const int n = s->dimension();
        const auto k = resolvent_kernel(*s, lambda, p, q, Sign::outgoing);
        CHECK(rel(k.value, euclid_free_resolvent(n, lambda, d)) < 1e-6);
        CHECK(k.tail_bound <= 1e-11 * std::abs(k.value));
      }
    }
  }
}

TEST_CASE("kernel symmetries are exact") {
  auto s = sphere_spectrum(3, 0.4, 800);
  const ConePoint p{1.2, 0.3}, q{2.5, 1.4};
  for (double lambda : {0.1, 1.0, 3.0}) {
    const auto a = resolvent_kernel(s, lambda, p, q, Sign::outgoing).value;
    CHECK(resolvent_kernel(s, lambda, q, p, Sign::outgoing).value == a);
    CHECK(resolvent_kernel(s, lambda, p, q, Sign::incoming).value == std::conj(a));
    CHECK(resolvent_kernel(s, lambda, q, p, Sign::incoming).value == std::conj(a));
  }
  CHECK_THROWS_AS((void)resolvent_kernel(s, 1, p, p, Sign::outgoing), DomainError);
}

TEST_CASE("Stone consistency and diagonal positivity") {
  auto s = sphere_spectrum(4, 0.3, 1000);
  const ConePoint p{1.0, 0.2}, q{1.7, 2.0};
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto plus = resolvent_kernel(s, lambda, p, q, Sign::outgoing, {1e-14});
    const auto minus = resolvent_kernel(s, lambda, p, q, Sign::incoming, {1e-14});
    const Complex stone = lambda / (pi * Complex(0, 1)) * (plus.value - minus.value);
    const auto dens = spectral_measure_density(s, lambda, p, q, {1e-14});
    CHECK(std::abs(stone.imag()) == 0.0);
    CHECK(rel(stone.real(), dens.value) < 1e-10);
  }
  for (double lambda : {0.01, 1.0, 4.0})
    for (std::size_t modes = 1; modes <= 60; ++modes) {
      Truncation t;
      t.fixed_modes = modes;
      CHECK(spectral_measure_density(s, lambda, p, p, t).value >= 0.0);
    }
}

TEST_CASE("free diagonal spectral density: lambda^{n-1} vol(S^{n-1}) / (2 pi)^n") {
  for (int n : {3, 4}) {
    auto s = sphere_spectrum(n, 0, 400);
    for (double lambda : {0.5, 1.0, 2.0}) {
      const double expect = std::pow(lambda, n - 1) * sphere_volume(n) / std::pow(2 * pi, n);
      for (double r : {0.5, 1.0, 3.0}) {
        const auto d = spectral_measure_density(s, lambda, {r, 0.7}, {r, 0.7});
        CHECK(rel(d.value, expect) < 1e-6);
      }
    }
  }
  auto s3 = sphere_spectrum(3, 0, 100);
  CHECK(spectral_measure_density(s3, 1, {1, 0}, {1, 0}).value == doctest::Approx(0.0506606).epsilon(1e-6));
}

TEST_CASE("low-energy slope is 2 nu0 + 1") {
  for (auto [n, v0] : {std::pair{3, 0.0}, {4, 0.0}, {3, 0.75}, {5, -1.0}}) {
    auto s = sphere_spectrum(n, v0, 50);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = 12;
    for (int i = 0; i < m; ++i) {
      const double lambda = std::pow(10.0, -3.0 + i / double(m - 1));
      const double v = spectral_measure_density(s, lambda, {1.0, 0.0}, {2.0, 0.5}).value;
      const double x = std::log(lambda), y = std::log(v);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(std::abs(slope - (2 * s.nu0() + 1)) < 0.01 * (2 * s.nu0() + 1));
  }
}

TEST_CASE("truncation failure reports the achieved bound") {
  auto s = sphere_spectrum(3, 0, 20);
  try {
    (void)resolvent_kernel(s, 1, {1, 0}, {1.01, 0.5}, Sign::outgoing);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.achieved() > 0);
  }
}
