#include "conespec/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"

namespace conespec {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 1;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    const double w = double(2 / ((1 - x * x) * dp * dp));
    rule.x[i] = -double(x);
    rule.x[n - 1 - i] = double(x);
    rule.w[i] = rule.w[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss_legendre16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

}  // namespace conespec
