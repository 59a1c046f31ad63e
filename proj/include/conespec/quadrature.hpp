#pragma once

#include <vector>

namespace conespec {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int n);

// The 16-point rule, computed once.
const GaussRule& gauss_legendre16();

}  // namespace conespec
