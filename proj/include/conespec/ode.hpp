#pragma once

// Adaptive Dormand-Prince 5(4) integration of u'' = (Q(r) - lambda^2) u,
// with the state rescaled whenever it grows large; the true solution is
// state * exp(log_scale).

#include <algorithm>
#include <cmath>
#include <complex>

#include "conespec/errors.hpp"

namespace conespec::ode {

template <class T>
struct State {
  T u;
  T up;
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

struct StepControl {
  double tol = 1e-12;
  double h = 0.0;  // carried between calls; 0 picks an initial guess
  long steps = 0;
};

// Integrates from r0 to r1 (either direction). `shifted_q(r)` returns
// Q(r) - lambda^2.
template <class T, class F>
void integrate(const F& shifted_q, State<T>& y, double& log_scale, double r0, double r1, StepControl& ctl) {
  if (r0 == r1) return;
  const double dir = r1 > r0 ? 1.0 : -1.0;
  auto rhs = [&](double r, const State<T>& s) { return State<T>{s.up, shifted_q(r) * s.u}; };
  auto wavenumber = [&](double r) { return std::sqrt(std::abs(shifted_q(r)) + 1.0 / (r * r)); };

  double r = r0;
  double h = ctl.h > 0.0 ? ctl.h : 0.01 / wavenumber(r0);
  h = std::min(h, std::abs(r1 - r0));
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  while (dir * (r1 - r) > 0.0) {
    bool last = false;
    if (h >= std::abs(r1 - r)) {
      h = std::abs(r1 - r);
      last = true;
    }
    const double hs = dir * h;
    auto comb = [&](std::initializer_list<std::pair<double, const State<T>*>> terms) {
      State<T> out = y;
      for (const auto& [c, k] : terms) {
        out.u += hs * c * k->u;
        out.up += hs * c * k->up;
      }
      return out;
    };
    const State<T> k1 = rhs(r, y);
    const State<T> k2 = rhs(r + c2 * hs, comb({{a21, &k1}}));
    const State<T> k3 = rhs(r + c3 * hs, comb({{a31, &k1}, {a32, &k2}}));
    const State<T> k4 = rhs(r + c4 * hs, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<T> k5 = rhs(r + c5 * hs, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<T> k6 = rhs(r + hs, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<T> yn = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State<T> k7 = rhs(r + hs, yn);
    const T eu = hs * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
    const T eup = hs * (e1 * k1.up + e3 * k3.up + e4 * k4.up + e5 * k5.up + e6 * k6.up + e7 * k7.up);

    // Error measured in the energy-like norm |u| k + |u'|.
    const double k = wavenumber(r + hs);
    const double size = std::max(magnitude(y.u) * k + magnitude(y.up), magnitude(yn.u) * k + magnitude(yn.up));
    const double err = (magnitude(eu) * k + magnitude(eup)) / (ctl.tol * size + 1e-300);
    if (err <= 1.0) {
      r = last ? r1 : r + hs;
      y = yn;
      ++ctl.steps;
      const double big = std::max(magnitude(y.u), magnitude(y.up));
      if (big > 1e100) {
        y.u /= big;
        y.up /= big;
        log_scale += std::log(big);
      }
      if (last) break;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14 * std::max(std::abs(r), 1e-300)) {
      throw ConvergenceError("ode: step-size collapse", h);
    }
  }
  ctl.h = h;
}

}  // namespace conespec::ode
