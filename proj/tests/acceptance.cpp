// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conespec/cone_kernels.hpp"
#include "conespec/cross_section.hpp"
#include "conespec/errors.hpp"
#include "conespec/index_sets.hpp"
#include "conespec/legendrian_geom.hpp"
#include "conespec/oracle.hpp"
#include "conespec/propagators.hpp"
#include "conespec/radial_scattering.hpp"

using namespace conespec;
using std::numbers::pi;

namespace {

// Tolerances.
constexpr double kTol1 = 1e-6;
constexpr double kTol2 = 1e-6;
constexpr double kSlopeTol3 = 0.01, kCoefTol3 = 0.02;
constexpr double kTol4 = 0.02;
constexpr double kTol5 = 1e-6;
constexpr double kTol6 = 0.05, kCancel6 = 1e-3;
constexpr double kExpTol7 = 0.05, kModTol7 = 0.10, kPhaseTol7 = 0.1;
constexpr double kCont8 = 1e-5, kBox8 = 0.05;
constexpr double kWronskian10 = 1e-8, kSelfConv10 = 1e-3, kContact10 = 1e-7;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
  return g;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s  %2d  %s: %s [%.1f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

Outcome free_resolvent_identity() {
  const auto spec = sphere_spectrum(3, 0.0, 400);
  const double lambda = 1.0;
  // r != r' throughout: at equal radii the mode sum only converges conditionally.
  const double cfg[12][3] = {{1, 0.5, 2},     {1, 1, 1.4},     {0.5, 2, 1.5}, {2, 0.3, 3},
                             {1, pi, 0.6},    {0.7, 1.5, 0.35}, {3, 0.8, 1},   {1.2, 2.5, 0.4},
                             {0.3, 1, 0.6},   {2, 1.2, 2.8},   {4, 0.5, 3},   {1.5, 3.0, 2.5}};
  double worst = 0.0;
  for (const auto& c : cfg) {
    const double d = std::sqrt(c[0] * c[0] + c[2] * c[2] - 2 * c[0] * c[2] * std::cos(c[1]));
    const Complex exact = std::exp(Complex(0, lambda * d)) / (4 * pi * d);
    const auto k = resolvent_kernel(spec, lambda, {c[0], 0.0}, {c[2], c[1]}, Sign::outgoing);
    worst = std::max(worst, rel(k.value, exact));
  }
  return {worst <= kTol1, fmt("max rel err %.2e (tol %.0e) over 12 configs", worst, kTol1)};
}

Outcome free_diagonal_density() {
  double worst = 0.0;
  for (int n : {3, 4}) {
    const auto spec = sphere_spectrum(n, 0.0, 200);
    const double vol = n == 3 ? 4 * pi : 2 * pi * pi;
    for (double lambda : {0.5, 1.0, 2.0}) {
      const double exact = std::pow(lambda, n - 1) * vol / std::pow(2 * pi, n);
      const ConePoint z{1.0, 0.3};
      worst = std::max(worst, std::abs(spectral_measure_density(spec, lambda, z, z).value - exact) / exact);
    }
  }
  return {worst <= kTol2, fmt("max rel err %.2e (tol %.0e), n = 3, 4", worst, kTol2)};
}

Outcome low_energy_law() {
  struct Case {
    const char* name;
    RadialModel model;
    ConePoint z, zp;
  };
  const std::vector<Case> cases{
      {"n=3 free", {sphere_spectrum(3, 0.0, 60), {}}, {1.0, 0.0}, {1.5, 0.4}},
      {"n=4 free", {sphere_spectrum(4, 0.0, 60), {}}, {0.8, 0.0}, {1.3, 0.4}},
      {"n=3 V0=0.75", {sphere_spectrum(3, 0.75, 60), {}}, {1.0, 0.0}, {1.2, 0.5}},
      {"n=3 bump", {sphere_spectrum(3, 0.0, 60), BumpPerturbation{1.0, 0.8, 1.5}}, {0.7, 0.0}, {1.6, 0.3}},
  };
  const auto grid = log_grid(1e-3, 1e-2, 10);
  bool ok = true;
  std::ostringstream d;
  for (const auto& c : cases) {
    const auto fit = low_energy_fit(c.model, c.z, c.zp, grid);
    const double expect = 2 * zero_mode(c.model).nu0 + 1;
    const double ww = zero_mode(c.model).pair(c.model.spectrum, c.z, c.zp);
    const double es = std::abs(fit.slope - expect) / expect, ec = std::abs(fit.coefficient - ww) / std::abs(ww);
    ok = ok && es <= kSlopeTol3 && ec <= kCoefTol3;
    d << c.name << " slope " << fmt("%.4f/%.0f", fit.slope, expect) << " coef err " << fmt("%.1e", ec) << "; ";
  }
  d << fmt("tol %.0f%%/%.0f%%", 100 * kSlopeTol3, 100 * kCoefTol3);
  return {ok, d.str()};
}

Outcome rank_one() {
  const RadialModel m{sphere_spectrum(3, 0.0, 60), BumpPerturbation{1.0, 0.8, 1.5}};
  const ConePoint z1{0.6, 0.0}, z2{1.1, 0.7}, z3{1.8, 1.5}, z4{0.9, 2.4};
  const auto grid = log_grid(1e-3, 1e-2, 10);
  auto c = [&](ConePoint a, ConePoint b) { return low_energy_fit(m, a, b, grid).coefficient; };
  const double lhs = c(z1, z2) * c(z3, z4), rhs = c(z1, z4) * c(z3, z2);
  const double e = std::abs(lhs - rhs) / std::abs(rhs);
  return {e <= kTol4, fmt("cross-ratio mismatch %.2e (tol %.0e)", e, kTol4)};
}

Outcome model_integrals() {
  double worst = 0.0;
  for (double s : {1.0, 2.0, 3.0})
    for (double t : {1e2, 1e3, 1e4}) {
      const auto m = model_integral(s, t, {5000.0 / t});
      // Gamma(s+1) e^{i pi (s+1)/2} t^{-(s+1)}
      const Complex exact = std::tgamma(s + 1) * std::polar(1.0, pi * (s + 1) / 2) * std::pow(t, -(s + 1));
      worst = std::max(worst, rel(m.quadrature, exact));
    }
  return {worst <= kTol5, fmt("max rel err %.2e (tol %.0e)", worst, kTol5)};
}

std::vector<TimeSample> series(const RadialModel& m, PropagatorKind kind, double lc, ConePoint z,
                               const std::vector<double>& times) {
  const auto table = density_table(m, {lc}, z, z, 16 * required_panels(kind, lc, times.back()));
  std::vector<TimeSample> out;
  for (double t : times) out.push_back({t, stone_quadrature(table, kind, t)});
  return out;
}

Outcome wave_decay() {
  const auto times = dyadic_times(200, 12800);
  const ConePoint z{1.0, 0.0};
  const double scale4 = 1 / (4 * pi * pi);
  const auto f4 = fit_decay(series({sphere_spectrum(4, 0.0, 60), {}}, PropagatorKind::wave_sin, 4.0, z, times), 200,
                            12800, 3.0);
  const double e4 = std::abs(f4.exponent - 3) / 3, c4 = rel(f4.coefficient, Complex(-scale4));
  const auto f3 = fit_decay(series({sphere_spectrum(3, 0.0, 60), {}}, PropagatorKind::wave_sin, 4.0, z, times), 200,
                            12800, 3.0);
  const double e3 = std::abs(f3.exponent - 3) / 3, c3 = std::abs(f3.coefficient) / scale4;
  const bool ok = e4 <= kTol6 && c4 <= kTol6 && e3 <= kTol6 && c3 <= kCancel6;
  return {ok, fmt("n=4 exponent %.4f coef err %.1e; n=3 exponent %.3f, |coef|/scale %.1e (tol %.0f%%, %.0e)",
                  f4.exponent, c4, f3.exponent, c3, 100 * kTol6, kCancel6)};
}

Outcome schrodinger_decay() {
  const auto times = dyadic_times(200, 12800);
  const ConePoint z{1.0, 0.0};
  const auto f = fit_decay(series({sphere_spectrum(3, 0.0, 60), {}}, PropagatorKind::schrodinger, 2.0, z, times), 200,
                           12800, 1.5);
  const double w2 = 1 / (2 * pi * pi);  // w(z)^2 for the free n = 3 cone
  const Complex expect = 0.5 * std::tgamma(1.5) * std::polar(1.0, 0.75 * pi) * w2;
  const double ee = std::abs(f.exponent - 1.5) / 1.5;
  const double em = std::abs(std::abs(f.coefficient) - std::abs(expect)) / std::abs(expect);
  const double ep = std::abs(std::arg(f.coefficient / expect));
  return {ee <= kExpTol7 && em <= kModTol7 && ep <= kPhaseTol7,
          fmt("exponent %.4f, modulus err %.1e, phase err %.1e rad (tol %.0f%%, %.0f%%, %.1f rad)", f.exponent, em, ep,
              100 * kExpTol7, 100 * kModTol7, kPhaseTol7)};
}

Outcome perturbation_consistency() {
  const RadialModel tiny{sphere_spectrum(3, 0.0, 20), BumpPerturbation{1.0, 0.8, 1e-6}};
  double cont = 0.0;
  for (double nu : {0.5, 1.5, 2.5})
    for (double lambda : {0.5, 1.0, 2.0})
      for (auto [r, rp] : {std::pair{0.6, 1.7}, {1.0, 1.0}, {2.5, 0.9}})
        cont = std::max(cont, rel(mode_green_perturbed(tiny, Order(nu), lambda, r, rp, Sign::outgoing),
                                  mode_green_exact(Order(nu), lambda, r, rp, Sign::outgoing)));
  BoxProblem box;
  box.w_pert = BumpPerturbation{1.0, 0.8, 3.0};
  std::vector<double> grid;
  for (int i = 0; i <= 6; ++i) grid.push_back(0.5 + 0.25 * i);
  const auto cmp = compare_with_modes(box, 0.0, grid, 1.0, 1.0);
  return {cont < kCont8 && cmp.max_deviation <= kBox8,
          fmt("amplitude 1e-6 deviation %.1e (tol %.0e); box vs modes %.1e (tol %.0f%%)", cont, kCont8,
              cmp.max_deviation, 100 * kBox8)};
}

// Brute-force key: beta scaled by 6.
using Key = std::pair<long, int>;
long key6(Rational b) { return b.num() * 6 / b.den(); }

std::set<Key> brute(const std::vector<IndexPair>& raw, long bound) {
  std::set<Key> out;
  for (const auto& g : raw)
    for (long b = key6(g.beta); b <= bound; b += 6)
      for (int j = 0; j <= g.j; ++j) out.insert({b, j});
  return out;
}

std::set<Key> keys(const std::vector<IndexPair>& pairs) {
  std::set<Key> out;
  for (const auto& p : pairs) out.insert({key6(p.beta), p.j});
  return out;
}

Outcome index_calculus() {
  int bad_induction = 0, bad_brute = 0, bad_ledger = 0;
  for (const char* text : {"3/10", "1/2", "1", "3/2"}) {
    const Rational nu = Rational::parse(text);
    IndexFamily base;
    base[Face::zf] = IndexSet::shorthand(Rational(1));
    base[Face::bf0] = IndexSet::shorthand(Rational(1));
    base[Face::lb0] = IndexSet::shorthand(nu + Rational(2));
    base[Face::rb0] = IndexSet::shorthand(nu);
    base[Face::rb] = IndexSet::shorthand(Rational(1));
    IndexFamily cur = base;
    for (int j = 1; j <= 10; ++j) {
      cur = compose_step(cur, base);
      bad_induction += !(*min_e(cur[Face::lb0]) >= nu + Rational(2 + j));
      bad_induction += !(*min_e(cur[Face::bf0]) >= Rational(1 + j));
      bad_induction += !(*min_e(cur[Face::rb0]) >= nu + Rational(j));
      bad_induction += !geq(cur[Face::zf], Rational(j));
      bad_induction += !(cur[Face::bf].is_empty() && cur[Face::lb].is_empty());
    }
  }

  std::mt19937_64 rng(7);
  auto raw = [&] {
    std::uniform_int_distribution<int> count(1, 4), den(1, 3), log(0, 2);
    std::vector<IndexPair> r(count(rng));
    for (auto& p : r) {
      const int d = den(rng);
      p = {Rational(std::uniform_int_distribution<int>(-4 * d, 6 * d)(rng), d), log(rng)};
    }
    return r;
  };
  const long bound = 36;
  for (int trial = 0; trial < 200; ++trial) {
    const auto r1 = raw(), r2 = raw();
    const auto s1 = brute(r1, 2 * bound), s2 = brute(r2, 2 * bound);
    const IndexSet e1 = closure_reduce(r1), e2 = closure_reduce(r2);
    std::set<Key> sum, ext;
    for (auto [b1, j1] : s1)
      for (auto [b2, j2] : s2) {
        if (b1 + b2 <= bound) sum.insert({b1 + b2, j1 + j2});
        if (b1 == b2 && b1 <= bound) ext.insert({b1, j1 + j2 + 1});
      }
    for (const auto* s : {&s1, &s2})
      for (auto k : *s)
        if (k.first <= bound) ext.insert(k);
    bad_brute += keys(enumerate(add(e1, e2), 6)) != sum;
    bad_brute += keys(enumerate(ext_union(e1, e2), 6)) != ext;
  }

  for (const char* text : {"3/10", "1/2", "1", "3/2"})
    for (int n : {3, 4, 5}) {
      const Rational nu = Rational::parse(text);
      const IndexFamily f = mainres_ledger(nu, n);
      bad_ledger += !(*min_e(f[Face::zf]) == Rational(0));
      bad_ledger += !(*min_e(f[Face::bf0]) == Rational(-2));
      bad_ledger += !(*min_e(f[Face::lb0]) == nu - Rational(1));
      bad_ledger += !(*min_e(f[Face::rb0]) == nu - Rational(1));
      bad_ledger += !(*min_e(f[Face::lb]) == Rational(n - 1, 2));
      bad_ledger += !(*min_e(f[Face::rb]) == Rational(n - 1, 2));
    }
  return {bad_induction + bad_brute + bad_ledger == 0,
          fmt("induction violations %d, brute-force mismatches %d/400, ledger mismatches %d", bad_induction, bad_brute,
              bad_ledger)};
}

Outcome invariants() {
  const RadialModel bump{sphere_spectrum(3, 0.0, 60), BumpPerturbation{1.0, 0.8, 3.0}};
  const RadialModel free3{sphere_spectrum(3, 0.0, 60), {}};
  double wr = 0.0;
  for (const auto* m : {&free3, &bump})
    for (double nu : {0.5, 1.5, 3.5})
      for (double lambda : {0.05, 0.7, 4.0})
        wr = std::max(wr, solve_mode(*m, Order(nu), lambda, log_grid(0.01, 20.0, 40)).wronskian_variation);

  int sym_bad = 0, pos_bad = 0;
  const ConePoint a{0.8, 0.0}, b{1.7, 0.9};
  for (double lambda : {0.3, 1.0, 2.5}) {
    const Complex out = perturbed_resolvent(bump, lambda, a, b, Sign::outgoing).value;
    sym_bad += perturbed_resolvent(bump, lambda, a, b, Sign::incoming).value != std::conj(out);
    sym_bad += perturbed_resolvent(bump, lambda, b, a, Sign::outgoing).value != out;
    sym_bad += resolvent_kernel(free3.spectrum, lambda, a, b, Sign::incoming).value !=
               std::conj(resolvent_kernel(free3.spectrum, lambda, a, b, Sign::outgoing).value);
    for (double r : {0.2, 1.0, 3.0}) {
      pos_bad += !(perturbed_density(bump, lambda, {r, 0.0}, {r, 0.0}).value >= 0.0);
      pos_bad += !(spectral_measure_density(free3.spectrum, lambda, {r, 0.0}, {r, 0.0}).value >= 0.0);
    }
  }

  const ConePoint z{1.0, 0.0};
  const std::size_t n = 16 * required_panels(PropagatorKind::schrodinger, 2.0, 500);
  const double sc = stone_quadrature_checked(free3, PropagatorKind::schrodinger, {2.0}, 500, z, z, n).relative_change;

  double contact = 0.0;
  const auto g = YGeodesic::great_circle({1, 0, 0}, {0, 1, 1});
  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < 20; ++j) contact = std::max(contact, std::abs(contact_check(g, pi * i / 20, pi * j / 20, 1e-4)));

  const bool ok = wr <= kWronskian10 && sym_bad == 0 && pos_bad == 0 && sc <= kSelfConv10 && contact <= kContact10;
  return {ok, fmt("Wronskian %.1e, symmetry violations %d, negative diagonals %d, self-convergence %.1e, contact %.1e",
                  wr, sym_bad, pos_bad, sc, contact)};
}

}  // namespace

int main() {
  criterion(1, "free-space resolvent identity (n=3)", 5, free_resolvent_identity);
  criterion(2, "free-space diagonal spectral density", 5, free_diagonal_density);
  criterion(3, "low-energy vanishing order and coefficient", 30, low_energy_law);
  criterion(4, "rank-one low-energy factorization", 10, rank_one);
  criterion(5, "model integral vs closed form", 10, model_integrals);
  criterion(6, "wave decay (n=4 rate and constant, n=3 cancellation)", 600, wave_decay);
  criterion(7, "Schrodinger decay (n=3)", 600, schrodinger_decay);
  criterion(8, "perturbation continuity and box oracle", 300, perturbation_consistency);
  criterion(9, "index-set calculus", 5, index_calculus);
  criterion(10, "invariant suites", 120, invariants);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
