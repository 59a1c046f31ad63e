#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "conespec/cross_section.hpp"
#include "conespec/errors.hpp"
#include "conespec/linalg.hpp"

using namespace conespec;
constexpr double pi = std::numbers::pi;

TEST_CASE("sphere spectra") {
  auto s3 = sphere_spectrum(3, 0.0, 2);
  REQUIRE(s3.size() == 3);
  CHECK(s3.mode(0).nu == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s3.mode(1).nu == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s3.mode(2).nu == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(s3.mode(0).multiplicity == 1);
  CHECK(s3.mode(1).multiplicity == 3);
  CHECK(s3.mode(2).multiplicity == 5);

  auto s4 = sphere_spectrum(4, 0.0, 1);
  CHECK(s4.nu0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s4.nu1() == doctest::Approx(2.0).epsilon(1e-15));

  CHECK(sphere_spectrum(3, 0.75, 0).nu0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(sphere_spectrum(3, 0.75, 0).nu1()));
}

TEST_CASE("sphere multiplicities and volumes") {
  for (int l = 0; l < 30; ++l) {
    CHECK(sphere_multiplicity(3, l) == 2 * l + 1);
    CHECK(sphere_multiplicity(4, l) == (l + 1) * (l + 1));
    CHECK(sphere_multiplicity(5, l) == (l + 1) * (l + 2) * (2 * l + 3) / 6);
    CHECK(sphere_multiplicity(2, l) == (l == 0 ? 1 : 2));
  }
  CHECK(sphere_volume(2) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(sphere_volume(4) == doctest::Approx(2 * pi * pi).epsilon(1e-14));
}

TEST_CASE("hyp2 enforcement") {
  CHECK(check_hyp2(SphereSpec{3, 0.0, 10}).nu0() == doctest::Approx(0.5));
  try {
    (void)check_hyp2(SphereSpec{3, -0.25, 10});
    FAIL("expected HypothesisError");
  } catch (const HypothesisError& e) {
    CHECK(e.value() == 0.0);
  }
  auto ok = check_hyp2(SphereSpec{4, -0.5, 10});
  CHECK(ok.nu0() * ok.nu0() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS((void)check_hyp2(SphereSpec{2, 0.0, 10}), HypothesisError);
  CHECK_THROWS_AS((void)check_hyp2(CircleSpec{2 * pi, 0.0, 10}), HypothesisError);
  CHECK_THROWS_AS((void)check_hyp2(DiscretizedCircleSpec{{0.0}, 64}), HypothesisError);
  CHECK_THROWS_AS((void)check_hyp2(CustomSpec{3, {{-0.1, 1}}, 1.0}), HypothesisError);
  CHECK_THROWS_AS((void)check_hyp2(DiscretizedCircleSpec{{1.0}, 4}), DomainError);
  CHECK_THROWS_AS((void)check_hyp2(CustomSpec{3, {{1.0, 0}}, 1.0}), DomainError);
}

TEST_CASE("n = 3 projectors follow the Legendre addition theorem") {
  auto s = sphere_spectrum(3, 0.0, 60);
  for (double theta : {0.0, 0.1, 0.7, 1.3, 2.2, 3.0, pi}) {
    auto pr = s.projectors(0.0, theta, 61);
    // Independent oracle: Bonnet recurrence in long double.
    long double x = std::cos((long double)theta), p0 = 1, p1 = x;
    for (int l = 0; l <= 60; ++l) {
      long double pl = l == 0 ? p0 : (l == 1 ? p1 : 0);
      if (l >= 2) {
        pl = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
        p0 = p1;
        p1 = pl;
      }
      const double expect = double((2 * l + 1) / (4 * std::numbers::pi_v<long double>) * pl);
      CHECK(pr[l] == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("n = 4 projectors match Chebyshev U") {
  auto s = sphere_spectrum(4, 0.0, 40);
  for (double theta : {0.2, 1.0, 2.5}) {
    for (int l = 0; l <= 40; ++l) {
      const double expect = (l + 1) / (2 * pi * pi) * std::sin((l + 1) * theta) / std::sin(theta);
      CHECK(s.projector(l, 0.0, theta) == doctest::Approx(expect).epsilon(1e-11).scale(1.0));
    }
  }
  for (int l = 0; l <= 40; ++l) CHECK(s.projector(l, 0.3, 0.3) == doctest::Approx(s.mode(l).diagonal));
}

TEST_CASE("sphere projectors are idempotent under integration (n = 3)") {
  // int_{S^2} Pi_l(x . y) Pi_l(y . z) dy = Pi_l(x . z); x = north pole.
  auto s = sphere_spectrum(3, 0.0, 6);
  const double gamma = 0.9;  // angle between x and z
  const int nt = 48, np = 64;
  // Gauss-Legendre nodes in cos(theta) via Newton on P_nt.
  std::vector<double> xs(nt), ws(nt);
  for (int i = 0; i < nt; ++i) {
    double x = std::cos(pi * (i + 0.75) / (nt + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= nt; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = nt * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        ws[i] = 2 / ((1 - x * x) * dp * dp);
        break;
      }
    }
    xs[i] = x;
  }
  for (int l = 0; l <= 6; ++l) {
    double sum = 0;
    for (int i = 0; i < nt; ++i) {
      const double ct = xs[i], st = std::sqrt(1 - ct * ct);
      for (int k = 0; k < np; ++k) {
        const double ph = 2 * pi * k / np;
        const double dotz = ct * std::cos(gamma) + st * std::sin(gamma) * std::cos(ph);
        sum += ws[i] * (2 * pi / np) * s.projector(l, 0, std::acos(ct)) *
               s.projector(l, 0, std::acos(std::clamp(dotz, -1.0, 1.0)));
      }
    }
    CHECK(sum == doctest::Approx(s.projector(l, 0, gamma)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("Weyl-type monotonicity and positive diagonal") {
  for (int n : {2, 3, 4, 6}) {
    auto s = sphere_spectrum(n, n == 2 ? 0.5 : 0.0, 100);
    double prev = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double d = s.projector(j, 1.0, 1.0);
      CHECK(d > 0);
      CHECK(d == doctest::Approx(s.mode(j).multiplicity / s.volume()).epsilon(1e-12));
      CHECK(prev + d > prev);
      prev += d;
    }
  }
}

TEST_CASE("circle and custom spectra") {
  auto c = circle_spectrum(2 * pi, 1.0, 5);
  for (int k = 0; k <= 5; ++k) CHECK(c.mode(k).nu == doctest::Approx(std::sqrt(k * k + 1.0)));
  CHECK(c.projector(2, 0.0, 0.4) == doctest::Approx(std::cos(0.8) / pi));
  auto c2 = sphere_spectrum(2, 1.0, 5);
  for (int k = 0; k <= 5; ++k) {
    CHECK(c2.mode(k).nu == doctest::Approx(c.mode(k).nu));
    CHECK(c2.projector(k, 0.1, 1.2) == doctest::Approx(c.projector(k, 0.1, 1.2)).epsilon(1e-13));
  }

  auto m = custom_spectrum(3, {{1.5, 1}, {0.5, 1}, {0.5 + 1e-12, 1}, {2.0, 3}}, 2.0);
  REQUIRE(m.size() == 3);
  CHECK(m.mode(0).multiplicity == 2);
  CHECK(m.projector(0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(m.mode(2).nu == 2.0);
  CHECK(m.mode(2).multiplicity == 3);
}

TEST_CASE("discretized circle, constant potential") {
  const int grid = 256;
  auto s = discretized_circle_spectrum({1.0}, grid);
  CHECK(s.isotropic());
  CHECK(s.mode(0).multiplicity == 1);
  CHECK(s.mode(0).nu * s.mode(0).nu == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.mode(1).multiplicity == 2);
  CHECK(std::abs(s.mode(1).nu * s.mode(1).nu - 2.0) < 1e-4);
  // exact discrete eigenvalues 1 + (4/h^2) sin^2(kh/2)
  const double h = 2 * pi / grid;
  for (int k = 1; k < 20; ++k) {
    const double exact = 1 + 4 / (h * h) * std::pow(std::sin(k * h / 2), 2);
    CHECK(s.mode(k).nu * s.mode(k).nu == doctest::Approx(exact).epsilon(1e-10));
    CHECK(s.mode(k).multiplicity == 2);
  }
  // projectors approximate the continuum (1 + 2 cos) / 2pi
  auto c = circle_spectrum(2 * pi, 1.0, 3);
  for (double d : {0.0, 0.5, 2.0})
    for (int k = 0; k <= 1; ++k) CHECK(std::abs(s.projector(k, 0.3, 0.3 + d) - c.projector(k, 0.3, 0.3 + d)) < 1e-4);
}

TEST_CASE("discretized circle converges at second order") {
  // nu_0 is exact for constant V0; the first excited level carries the error.
  double prev_err = 0;
  for (int grid : {32, 64, 128, 256}) {
    auto s = discretized_circle_spectrum({1.0}, grid);
    const double err = std::abs(s.mode(1).nu * s.mode(1).nu - 2.0);
    if (prev_err > 0) CHECK(prev_err / err >= 3.5);
    prev_err = err;
  }
}

TEST_CASE("discretized circle, variable potential against a dense oracle") {
  auto v0 = [](int grid) {
    std::vector<double> v(grid);
    for (int i = 0; i < grid; ++i) v[i] = 1 + 0.3 * std::cos(2 * pi * i / grid);
    return v;
  };
  const int grid = 512;
  auto s = discretized_circle_spectrum(v0(grid), grid);
  CHECK_FALSE(s.isotropic());
  for (std::size_t j = 0; j < 5; ++j) CHECK(s.mode(j).multiplicity == 1);

  const int fine = 2 * grid;
  const double h = 2 * pi / fine;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(fine, fine);
  auto v = v0(fine);
  for (int i = 0; i < fine; ++i) {
    a(i, i) = 2 / (h * h) + v[i];
    a(i, (i + 1) % fine) = a((i + 1) % fine, i) = -1 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  CHECK(std::abs(s.nu0() * s.nu0() - es.eigenvalues()(0)) < 1e-6);
}

TEST_CASE("QL eigensolvers") {
  // Tridiagonal: -1, 2, -1 Dirichlet, eigenvalues 2 - 2cos(k pi/(N+1)).
  const int n = 50;
  linalg::SymmetricTridiagonal t{std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0)};
  auto full = linalg::tridiagonal_eigen(t, true);
  auto part = linalg::tridiagonal_eigen(t, true, {3, 17});
  for (int k = 0; k < n; ++k) {
    CHECK(full.values[k] == doctest::Approx(2 - 2 * std::cos((k + 1) * pi / (n + 1))).epsilon(1e-13));
    const double norm = std::sqrt(2.0 / (n + 1));
    CHECK(std::abs(full.vectors[k][3]) == doctest::Approx(norm * std::abs(std::sin(4 * (k + 1) * pi / (n + 1)))).scale(1));
    CHECK(part.vectors[k][0] == doctest::Approx(full.vectors[k][3]).epsilon(1e-12).scale(1));
    CHECK(part.vectors[k][1] == doctest::Approx(full.vectors[k][17]).epsilon(1e-12).scale(1));
  }
  // Dense: random symmetric against Eigen.
  const int m = 40;
  linalg::DenseSymmetric d(m);
  Eigen::MatrixXd e(m, m);
  unsigned seed = 12345;
  auto rnd = [&] { seed = seed * 1103515245u + 12345u; return ((seed >> 8) & 0xffff) / 65536.0 - 0.5; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) d(i, j) = d(j, i) = e(i, j) = e(j, i) = rnd();
  auto ours = linalg::dense_symmetric_eigen(d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
  for (int k = 0; k < m; ++k) {
    CHECK(ours.values[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-12).scale(1));
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = ours.vectors[k][i];
    CHECK((e * v - ours.values[k] * v).norm() < 1e-12);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}
