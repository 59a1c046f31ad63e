#pragma once

// Leaves of the propagating Legendrian on an exact cone C(Y): each geodesic
// (y(s), eta(s)) of length pi on Y gives the two-parameter leaf
//   y = y(s), y' = y(s'), mu = eta(s) sin s, mu' = -eta(s') sin s',
//   nu = -cos s, nu' = cos s', sigma = sin s' / sin s,
// which is annihilated by mu.dy - dnu + sigma (mu'.dy' - dnu').

#include <vector>

namespace conespec {

using Vec = std::vector<double>;

// Unit-speed geodesic on Y, parametrized by arc length s.
//   sphere: Y = S^{n-1} in R^n, great circle through y0 with direction eta0
//           (eta0 is orthogonalized against y0 and normalized);
//   torus:  Y = R^{n-1}/(2 pi Z)^{n-1}, straight line; coordinates are not
//           reduced mod 2 pi.
class YGeodesic {
 public:
  enum class Kind { sphere, torus };
  static YGeodesic great_circle(Vec y0, Vec eta0);
  static YGeodesic torus_line(Vec y0, Vec eta0);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return y0_.size(); }
  Vec point(double s) const;
  Vec direction(double s) const;  // unit tangent (= covector via h)
  // Pairing of a covector and a tangent vector at the same point.
  double pair(const Vec& covector, const Vec& tangent) const;

 private:
  YGeodesic(Kind k, Vec y0, Vec eta0) : kind_(k), y0_(std::move(y0)), eta0_(std::move(eta0)) {}
  Kind kind_;
  Vec y0_, eta0_;
};

struct LeafPoint {
  double s = 0.0, s_prime = 0.0;
  Vec y, y_prime;
  Vec mu, mu_prime;
  double nu = 0.0, nu_prime = 0.0;
  double sigma = 0.0;
};

// s, s' in (0, pi); DomainError at or beyond the endpoints.
LeafPoint leaf_sample(const YGeodesic& geodesic, double s, double s_prime);

// Contact form evaluated on (ds, ds') at (s, s'), with the derivatives of
// y, nu, y', nu' taken by central differences of width `step`.
double contact_form(const YGeodesic& geodesic, double s, double s_prime, double ds, double ds_prime, double step);

// max(|alpha(d_s)|, |alpha(d_s')|).
double contact_check(const YGeodesic& geodesic, double s, double s_prime, double step);

// The cone geodesic with minimal distance r0 to the tip: r = r0 csc s,
// arc length -r0 cot s, angular part y(s).
struct ConeGeodesicPoint {
  double r;
  double arc_length;
  Vec y;
};
ConeGeodesicPoint cone_geodesic(const YGeodesic& geodesic, double r0, double s);

}  // namespace conespec
