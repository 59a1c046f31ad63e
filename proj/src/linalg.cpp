#include "conespec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "conespec/errors.hpp"

namespace conespec::linalg {
namespace {

// Implicit-shift QL on (d, e) where e[i] couples i and i+1 and e[n-1] is
// scratch. z[t][col] holds tracked rows of the accumulated rotation matrix.
void tqli(std::vector<double>& d, std::vector<double>& e,
          std::vector<std::vector<double>>& z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw ConvergenceError("QL iteration did not converge", std::abs(e[l]));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (auto& row : z) {
            f = row[i + 1];
            row[i + 1] = s * row[i] + c * f;
            row[i] = c * row[i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

EigenSystem sorted(std::vector<double>& d, const std::vector<std::vector<double>>& z,
                   std::vector<std::size_t> rows, bool want_vectors) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  EigenSystem out;
  out.values.reserve(d.size());
  for (auto k : order) out.values.push_back(d[k]);
  if (want_vectors) {
    out.rows = std::move(rows);
    out.vectors.assign(d.size(), std::vector<double>(z.size()));
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t t = 0; t < z.size(); ++t) out.vectors[k][t] = z[t][order[k]];
  }
  return out;
}

}  // namespace

EigenSystem tridiagonal_eigen(const SymmetricTridiagonal& t, bool want_vectors,
                              const std::vector<std::size_t>& rows) {
  const std::size_t n = t.diag.size();
  if (n == 0) throw DomainError("tridiagonal_eigen: empty matrix");
  if (t.offdiag.size() + 1 != n) throw DomainError("tridiagonal_eigen: offdiag size must be N-1");
  std::vector<double> d = t.diag;
  std::vector<double> e = t.offdiag;
  std::vector<std::size_t> tracked = rows;
  if (want_vectors && tracked.empty()) {
    tracked.resize(n);
    std::iota(tracked.begin(), tracked.end(), 0);
  }
  std::vector<std::vector<double>> z;
  if (want_vectors) {
    z.assign(tracked.size(), std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < tracked.size(); ++i) {
      if (tracked[i] >= n) throw DomainError("tridiagonal_eigen: row out of range");
      z[i][tracked[i]] = 1.0;
    }
  }
  tqli(d, e, z);
  return sorted(d, z, tracked, want_vectors);
}

EigenSystem dense_symmetric_eigen(const DenseSymmetric& m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("dense_symmetric_eigen: empty matrix");
  // Householder tridiagonalization (tred2), rows of `a` end up holding Q.
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a[i][k]);
      if (scale == 0.0) {
        e[i] = a[i][l];
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          a[i][k] /= scale;
          h += a[i][k] * a[i][k];
        }
        double f = a[i][l];
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a[i][l] = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          a[j][i] = a[i][j] / h;
          double gg = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gg += a[j][k] * a[i][k];
          for (std::size_t k = j + 1; k <= l; ++k) gg += a[k][j] * a[i][k];
          e[j] = gg / h;
          f += e[j] * a[i][j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          const double ff = a[i][j];
          const double gg = e[j] - hh * ff;
          e[j] = gg;
          for (std::size_t k = 0; k <= j; ++k) a[j][k] -= ff * e[k] + gg * a[i][k];
        }
      }
    } else {
      e[i] = a[i][l];
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += a[i][k] * a[k][j];
        for (std::size_t k = 0; k < i; ++k) a[k][j] -= g * a[k][i];
      }
    }
    d[i] = a[i][i];
    a[i][i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) a[j][i] = a[i][j] = 0.0;
  }
  // tred2 leaves e[i] coupling i-1 and i; shift to our convention.
  std::vector<double> off(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) off[i - 1] = e[i];
  tqli(d, off, a);
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return sorted(d, a, rows, true);
}

}  // namespace conespec::linalg
