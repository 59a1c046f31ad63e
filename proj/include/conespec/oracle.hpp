#pragma once

// Finite-box check of the per-mode spectral density: -u'' + Q u on
// r_i = i h, i = 1..N, Dirichlet at R = (N + 1) h, with the first row fixed
// so that r^{nu+1/2} is annihilated at zero energy (the recessive condition).
// Eigenvectors are mollified in lambda and compared with the continuum
// density lambda u_reg(r) u_reg(r') / (A^2 + B^2).

#include <cstddef>
#include <vector>

#include "conespec/linalg.hpp"
#include "conespec/radial_scattering.hpp"

namespace conespec {

struct BoxProblem {
  double nu = 0.5;
  Perturbation w_pert;
  double r_box = 400.0;  // R
  double h = 0.05;
};

// N = R/h - 1 interior points; ConfigError when N < 200 or R/h is not an integer.
std::size_t box_points(const BoxProblem& problem);
linalg::SymmetricTridiagonal box_matrix(const BoxProblem& problem);

struct BoxEigen {
  double r_box = 0.0;
  double h = 0.0;
  std::vector<double> lambda_sq;  // ascending
  std::vector<double> sample_r;
  // values[k][m]: k-th eigenfunction at sample_r[m] (linear interpolation
  // between grid points), normalized so that sum_i u(r_i)^2 h = 1.
  std::vector<std::vector<double>> values;
  double value(std::size_t k, double r) const;  // r must be one of sample_r
  double level_spacing() const;                 // pi / R
};

BoxEigen box_eigen(const BoxProblem& problem, const std::vector<double>& sample_r);

// sum_k g_sigma(lambda - lambda_k) u_k(r) u_k(r') over the positive part of the
// spectrum, g_sigma the unit-mass Gaussian. Already a density in lambda, so
// comparable with mode_density_perturbed. ConfigError when sigma < 3 pi / R.
double mollified_density(const BoxEigen& eigen, double sigma, double lambda, double r, double r_prime);

// The continuum mode density convolved with the same Gaussian (adaptive-free
// Gauss-Legendre over lambda +- 8 sigma, truncated at 0).
double mollified_mode_density(const BoxProblem& problem, double sigma, double lambda, double r, double r_prime);

struct OracleRow {
  double lambda;
  double mode_density;  // mollified continuum value
  double box_density;
  double deviation;     // |box - mode| / |mode|
};

struct OracleComparison {
  std::vector<OracleRow> rows;
  double max_deviation = 0.0;
};

// sigma <= 0 selects the default 5 pi / R.
OracleComparison compare_with_modes(const BoxProblem& problem, double sigma, const std::vector<double>& lambda_grid,
                                    double r, double r_prime);

}  // namespace conespec
