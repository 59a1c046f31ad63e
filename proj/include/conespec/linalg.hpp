#pragma once

// Small in-house symmetric eigensolvers: implicit-shift QL on tridiagonal
// matrices (optionally tracking only selected rows of the eigenvector
// matrix) and Householder reduction for dense symmetric matrices.

#include <cstddef>
#include <vector>

namespace conespec::linalg {

struct SymmetricTridiagonal {
  std::vector<double> diag;     // size N
  std::vector<double> offdiag;  // size N-1; offdiag[i] couples i and i+1
};

struct EigenSystem {
  std::vector<double> values;  // ascending
  // vectors[k][r]: component `rows[r]` of the k-th unit-norm eigenvector.
  std::vector<std::vector<double>> vectors;
  std::vector<std::size_t> rows;
};

// All eigenvalues of T. When `rows` is empty every component of every
// eigenvector is returned; otherwise only those components (which costs
// O(N) memory per row instead of O(N^2)).
EigenSystem tridiagonal_eigen(const SymmetricTridiagonal& t, bool want_vectors,
                              const std::vector<std::size_t>& rows = {});

// Dense symmetric matrix in row-major order, n x n.
class DenseSymmetric {
 public:
  explicit DenseSymmetric(std::size_t n) : n_(n), a_(n * n, 0.0) {}
  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// Full eigendecomposition (all components of all vectors).
EigenSystem dense_symmetric_eigen(const DenseSymmetric& a);

}  // namespace conespec::linalg
