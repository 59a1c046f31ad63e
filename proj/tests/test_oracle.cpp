#include "doctest.h"

#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"
#include "conespec/oracle.hpp"

using namespace conespec;
constexpr double pi = std::numbers::pi;

TEST_CASE("box spectrum: string and Weyl spacing") {
  BoxProblem string{0.5, {}, pi, pi / 2001};
  CHECK(box_points(string) == 2000);
  const auto e = box_eigen(string, {1.0});
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(e.lambda_sq[k - 1] - k * k) < 1e-3);
  CHECK(std::is_sorted(e.lambda_sq.begin(), e.lambda_sq.end()));

  // nu = 1/2 is the plain second difference.
  const auto t = box_matrix(string);
  for (double d : t.diag) CHECK(d == doctest::Approx(2 / (string.h * string.h)).epsilon(1e-14));

  BoxProblem p{1.5, {}, 20.0, 0.05};
  const auto f = box_eigen(p, {1.0});
  for (std::size_t k = 10; k < 40; ++k) {
    const double gap = std::sqrt(f.lambda_sq[k + 1]) - std::sqrt(f.lambda_sq[k]);
    CHECK(gap == doctest::Approx(pi / p.r_box).epsilon(0.03));
  }
}

TEST_CASE("box eigenpairs: residual and normalization") {
  BoxProblem p{1.5, BumpPerturbation{2.0, 1.0, -1.5}, 20.0, 0.05};
  const auto a = box_matrix(p);
  const auto es = linalg::tridiagonal_eigen(a, true);
  const std::size_t n = a.diag.size();
  double anorm = 0;
  for (std::size_t i = 0; i < n; ++i)
    anorm = std::max(anorm, std::abs(a.diag[i]) + (i ? std::abs(a.offdiag[i - 1]) : 0) +
                                (i + 1 < n ? std::abs(a.offdiag[i]) : 0));
  for (std::size_t k = 0; k < n; k += 37) {
    const auto& u = es.vectors[k];
    double res = 0, nrm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double au = a.diag[i] * u[i];
      if (i) au += a.offdiag[i - 1] * u[i - 1];
      if (i + 1 < n) au += a.offdiag[i] * u[i + 1];
      res += (au - es.values[k] * u[i]) * (au - es.values[k] * u[i]);
      nrm += u[i] * u[i];
    }
    CHECK(std::sqrt(res) <= 1e-8 * anorm);
    CHECK(nrm == doctest::Approx(1).epsilon(1e-12));
  }
  // Discrete L2 normalization of the sampled box eigenfunctions.
  const double h = p.h;
  std::vector<double> grid;
  for (std::size_t i = 1; i <= n; ++i) grid.push_back(i * h);
  const auto b = box_eigen(p, grid);
  for (std::size_t k : {0ul, 5ul, 100ul}) {
    double s = 0;
    for (double r : grid) s += b.value(k, r) * b.value(k, r) * h;
    CHECK(s == doctest::Approx(1).epsilon(1e-12));
  }
  CHECK_THROWS_AS(b.value(0, 0.123), DomainError);
  CHECK_THROWS_AS(box_points({0.5, {}, 5.0, 0.05}), ConfigError);
  CHECK_THROWS_AS(box_points({0.5, {}, 20.0, 0.07}), ConfigError);
}

TEST_CASE("mollified density: free mode") {
  const BoxProblem p{0.5, {}, 400.0, 0.05};
  const auto e = box_eigen(p, {1.0});
  const double box = mollified_density(e, 0.05, 1.0, 1.0, 1.0);
  const double exact = mode_density_exact(Order(0.5), 1.0, 1.0, 1.0);
  CHECK(exact == doctest::Approx(2 / pi * std::sin(1.0) * std::sin(1.0)).epsilon(1e-12));
  CHECK(std::abs(box - exact) < 0.05 * exact);
  const double smooth = mollified_mode_density(p, 0.05, 1.0, 1.0, 1.0);
  CHECK(std::abs(box - smooth) < 0.01 * smooth);
  CHECK_THROWS_AS(mollified_density(e, 0.01, 1.0, 1.0, 1.0), ConfigError);

  // Counting function: sum of u_k(r)^2 below Lambda against the integrated density.
  const double lmax = 1.5;
  double count = 0;
  for (std::size_t k = 0; k < e.lambda_sq.size() && e.lambda_sq[k] <= lmax * lmax; ++k)
    count += e.value(k, 1.0) * e.value(k, 1.0);
  const double integrated = (lmax - std::sin(2 * lmax) / 2) / pi;  // int (2/pi) sin^2
  CHECK(std::abs(count - integrated) < 0.1 * integrated);
}

TEST_CASE("oracle comparison: bump-perturbed modes") {
  const BoxProblem p{0.5, BumpPerturbation{1.0, 0.8, 3.0}, 400.0, 0.05};
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  const auto c = compare_with_modes(p, 0.05, grid, 1.0, 1.0);
  CHECK(c.max_deviation < 0.05);

  const BoxProblem q{1.5, BumpPerturbation{1.0, 0.8, -2.0}, 400.0, 0.05};
  CHECK(compare_with_modes(q, 0.05, grid, 1.3, 1.3).max_deviation < 0.05);

  // Doubling the box leaves the mollified comparison unchanged.
  const BoxProblem big{0.5, BumpPerturbation{1.0, 0.8, 3.0}, 800.0, 0.05};
  const auto d = compare_with_modes(big, 0.05, grid, 1.0, 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(std::abs(d.rows[i].box_density / c.rows[i].box_density - 1) < 0.02);
}

TEST_CASE("mollification width") {
  const BoxProblem p{0.5, {}, 400.0, 0.05};
  const std::vector<double> grid{0.7, 1.3};
  const double narrow = compare_with_modes(p, 3.2 * pi / 400, grid, 1.0, 1.0).max_deviation;
  const double mid = compare_with_modes(p, 0.05, grid, 1.0, 1.0).max_deviation;
  const double wide = compare_with_modes(p, 0.2, grid, 1.0, 1.0).max_deviation;
  CHECK(mid <= narrow);
  CHECK(wide < 0.01);
}
