#include "conespec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"
#include "conespec/quadrature.hpp"

namespace conespec {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const BoxProblem& p) {
  if (!(p.nu >= 0.0)) throw ConfigError("box: nu must be >= 0");
  if (!(p.h > 0.0) || !(p.r_box > 0.0)) throw ConfigError("box: R and h must be positive");
}

double gaussian(double x, double sigma) {
  return std::exp(-0.5 * (x / sigma) * (x / sigma)) / (sigma * std::sqrt(2.0 * kPi));
}

RadialModel continuum_model(const BoxProblem& p) { return {sphere_spectrum(3, 0.0, 0), p.w_pert}; }

}  // namespace

std::size_t box_points(const BoxProblem& p) {
  validate(p);
  const double cells = p.r_box / p.h;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * cells) throw ConfigError("box: R/h must be an integer");
  if (rounded - 1 < 200) throw ConfigError("box: need at least 200 grid points");
  return static_cast<std::size_t>(rounded) - 1;
}

linalg::SymmetricTridiagonal box_matrix(const BoxProblem& p) {
  const std::size_t n = box_points(p);
  const PerturbationFunction w(p.w_pert);
  const double ih2 = 1.0 / (p.h * p.h);
  const double c = p.nu * p.nu - 0.25;
  linalg::SymmetricTridiagonal t;
  t.diag.resize(n);
  t.offdiag.assign(n - 1, -ih2);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = double(i + 1) * p.h;
    t.diag[i] = 2.0 * ih2 + c / (r * r) + w(r);
  }
  // Row 1 annihilates r^{nu+1/2} at zero energy (u_0 = 0, u_2 / u_1 = 2^{nu+1/2});
  // this replaces the centrifugal term there.
  t.diag[0] = std::pow(2.0, p.nu + 0.5) * ih2 + w(p.h);
  return t;
}

BoxEigen box_eigen(const BoxProblem& p, const std::vector<double>& sample_r) {
  const std::size_t n = box_points(p);
  std::vector<std::size_t> rows;
  std::vector<std::pair<std::size_t, double>> interp;  // lower row, weight of upper
  for (double r : sample_r) {
    if (!(r > 0.0) || r >= p.r_box) throw DomainError("box_eigen: sample radius outside (0, R)");
    const double x = r / p.h;
    std::size_t lo = static_cast<std::size_t>(std::floor(x));
    double frac = x - double(lo);
    if (lo == 0) lo = 1, frac = 0.0;  // below r_1: use the first grid value scaled below
    if (lo >= n) lo = n - 1, frac = 1.0;
    interp.push_back({lo, frac});
    rows.push_back(lo - 1);
    rows.push_back(std::min(lo, n - 1));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (rows.empty()) rows.push_back(0);

  const auto es = linalg::tridiagonal_eigen(box_matrix(p), true, rows);
  BoxEigen out;
  out.r_box = p.r_box;
  out.h = p.h;
  out.lambda_sq = es.values;
  out.sample_r = sample_r;
  const double norm = 1.0 / std::sqrt(p.h);
  auto pos = [&](std::size_t row) { return std::lower_bound(rows.begin(), rows.end(), row) - rows.begin(); };
  out.values.resize(es.values.size());
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    out.values[k].resize(sample_r.size());
    for (std::size_t m = 0; m < sample_r.size(); ++m) {
      const auto [lo, frac] = interp[m];
      const double a = es.vectors[k][pos(lo - 1)], b = es.vectors[k][pos(std::min(lo, n - 1))];
      double v = (1.0 - frac) * a + frac * b;
      if (sample_r[m] < p.h) v = a * std::pow(sample_r[m] / p.h, p.nu + 0.5);
      out.values[k][m] = v * norm;
    }
  }
  return out;
}

double BoxEigen::value(std::size_t k, double r) const {
  const auto it = std::find(sample_r.begin(), sample_r.end(), r);
  if (it == sample_r.end()) throw DomainError("BoxEigen: radius was not sampled");
  return values.at(k)[static_cast<std::size_t>(it - sample_r.begin())];
}

double BoxEigen::level_spacing() const { return kPi / r_box; }

double mollified_density(const BoxEigen& e, double sigma, double lambda, double r, double r_prime) {
  if (!(sigma >= 3.0 * e.level_spacing()))
    throw ConfigError("mollified_density: sigma below 3 level spacings (box cannot resolve it)");
  double sum = 0.0;
  for (std::size_t k = 0; k < e.lambda_sq.size(); ++k) {
    if (e.lambda_sq[k] <= 0.0) continue;
    const double lk = std::sqrt(e.lambda_sq[k]);
    if (std::abs(lk - lambda) > 12.0 * sigma) {
      if (lk > lambda) break;
      continue;
    }
    sum += gaussian(lambda - lk, sigma) * e.value(k, r) * e.value(k, r_prime);
  }
  return sum;
}

double mollified_mode_density(const BoxProblem& p, double sigma, double lambda, double r, double r_prime) {
  validate(p);
  const RadialModel model = continuum_model(p);
  const GaussRule& g = gauss_legendre16();
  const double lo = std::max(0.0, lambda - 8.0 * sigma), hi = lambda + 8.0 * sigma;
  const int panels = 8;
  const double width = (hi - lo) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double mu = mid + 0.5 * width * g.x[i];
      sum += 0.5 * width * g.w[i] * gaussian(lambda - mu, sigma) *
             mode_density_perturbed(model, Order(p.nu), mu, r, r_prime);
    }
  }
  return sum;
}

OracleComparison compare_with_modes(const BoxProblem& p, double sigma, const std::vector<double>& lambda_grid,
                                    double r, double r_prime) {
  if (!(sigma > 0.0)) sigma = 5.0 * kPi / p.r_box;
  const BoxEigen e = box_eigen(p, {r, r_prime});
  OracleComparison out;
  for (double lambda : lambda_grid) {
    OracleRow row{lambda, mollified_mode_density(p, sigma, lambda, r, r_prime),
                  mollified_density(e, sigma, lambda, r, r_prime), 0.0};
    row.deviation = std::abs(row.box_density - row.mode_density) / std::abs(row.mode_density);
    out.max_deviation = std::max(out.max_deviation, row.deviation);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace conespec
