#include "conespec/legendrian_geom.hpp"

#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec axpby(double a, const Vec& x, double b, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

void require_open(double s, const char* name) {
  if (!(s > 0.0 && s < std::numbers::pi))
    throw DomainError(std::string("leaf parameter ") + name + " must lie in (0, pi)");
}

}  // namespace

YGeodesic YGeodesic::great_circle(Vec y0, Vec eta0) {
  if (y0.size() < 2 || y0.size() != eta0.size()) throw DomainError("great_circle: need matching vectors in R^n, n >= 2");
  const double ny = std::sqrt(dot(y0, y0));
  if (ny == 0.0) throw DomainError("great_circle: zero base point");
  for (double& v : y0) v /= ny;
  eta0 = axpby(1.0, eta0, -dot(eta0, y0), y0);
  const double ne = std::sqrt(dot(eta0, eta0));
  if (ne < 1e-12) throw DomainError("great_circle: direction parallel to base point");
  for (double& v : eta0) v /= ne;
  return YGeodesic(Kind::sphere, std::move(y0), std::move(eta0));
}

YGeodesic YGeodesic::torus_line(Vec y0, Vec eta0) {
  if (y0.empty() || y0.size() != eta0.size()) throw DomainError("torus_line: need matching vectors");
  const double ne = std::sqrt(dot(eta0, eta0));
  if (ne == 0.0) throw DomainError("torus_line: zero direction");
  for (double& v : eta0) v /= ne;
  return YGeodesic(Kind::torus, std::move(y0), std::move(eta0));
}

Vec YGeodesic::point(double s) const {
  if (kind_ == Kind::torus) return axpby(1.0, y0_, s, eta0_);
  return axpby(std::cos(s), y0_, std::sin(s), eta0_);
}

Vec YGeodesic::direction(double s) const {
  if (kind_ == Kind::torus) return eta0_;
  return axpby(-std::sin(s), y0_, std::cos(s), eta0_);
}

double YGeodesic::pair(const Vec& covector, const Vec& tangent) const { return dot(covector, tangent); }

LeafPoint leaf_sample(const YGeodesic& g, double s, double sp) {
  require_open(s, "s");
  require_open(sp, "s'");
  LeafPoint p;
  p.s = s;
  p.s_prime = sp;
  p.y = g.point(s);
  p.y_prime = g.point(sp);
  p.mu = g.direction(s);
  for (double& v : p.mu) v *= std::sin(s);
  p.mu_prime = g.direction(sp);
  for (double& v : p.mu_prime) v *= -std::sin(sp);
  p.nu = -std::cos(s);
  p.nu_prime = std::cos(sp);
  p.sigma = std::sin(sp) / std::sin(s);
  return p;
}

double contact_form(const YGeodesic& g, double s, double sp, double ds, double dsp, double step) {
  if (!(step > 0.0)) throw DomainError("contact_form: step must be positive");
  const LeafPoint c = leaf_sample(g, s, sp);
  const LeafPoint a = leaf_sample(g, s + step * ds, sp + step * dsp);
  const LeafPoint b = leaf_sample(g, s - step * ds, sp - step * dsp);
  const double inv = 1.0 / (2.0 * step);
  const Vec dy = axpby(inv, a.y, -inv, b.y), dyp = axpby(inv, a.y_prime, -inv, b.y_prime);
  const double dnu = (a.nu - b.nu) * inv, dnup = (a.nu_prime - b.nu_prime) * inv;
  return g.pair(c.mu, dy) - dnu + c.sigma * (g.pair(c.mu_prime, dyp) - dnup);
}

double contact_check(const YGeodesic& g, double s, double sp, double step) {
  return std::max(std::abs(contact_form(g, s, sp, 1.0, 0.0, step)), std::abs(contact_form(g, s, sp, 0.0, 1.0, step)));
}

ConeGeodesicPoint cone_geodesic(const YGeodesic& g, double r0, double s) {
  require_open(s, "s");
  if (!(r0 > 0.0)) throw DomainError("cone_geodesic: r0 must be positive");
  return {r0 / std::sin(s), -r0 / std::tan(s), g.point(s)};
}

}  // namespace conespec
