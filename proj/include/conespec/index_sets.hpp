#pragma once

// Polyhomogeneous index sets with exact rational exponents. An index set is
// held as a reduced antichain of generators (beta, j); the represented set
// is the closure under (beta, j) -> (beta + 1, j) and (beta, j) -> (beta, j - 1).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace conespec {

class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);
  // Exact for decimal literals such as "0.3" or "-2", and for "p/q".
  static Rational parse(const std::string& text);
  // Best approximation with denominator <= 10^6; throws unless within 1e-12.
  static Rational from_double(double x);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return double(num_) / double(den_); }
  bool is_integer() const noexcept { return den_ == 1; }
  std::string str() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator-(Rational a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(Rational a, Rational b) noexcept { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(Rational a, Rational b);
  friend bool operator<=(Rational a, Rational b) { return !(b < a); }
  friend bool operator>(Rational a, Rational b) { return b < a; }
  friend bool operator>=(Rational a, Rational b) { return !(a < b); }

 private:
  std::int64_t num_, den_;
};

struct IndexPair {
  Rational beta;
  int j = 0;
  friend bool operator==(const IndexPair& a, const IndexPair& b) { return a.beta == b.beta && a.j == b.j; }
};

class IndexSet {
 public:
  IndexSet() = default;  // EMPTY
  static IndexSet empty() { return {}; }
  // Shorthand q = {(q + n, 0) | n >= 0}.
  static IndexSet shorthand(Rational q);

  const std::vector<IndexPair>& generators() const noexcept { return gens_; }
  bool is_empty() const noexcept { return gens_.empty(); }
  bool contains(IndexPair p) const;
  std::string str() const;

  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.gens_ == b.gens_; }
  friend IndexSet closure_reduce(const std::vector<IndexPair>& raw);

 private:
  std::vector<IndexPair> gens_;  // sorted by (beta, j), antichain
};

// True when h lies in the closure of g.
bool implies(const IndexPair& g, const IndexPair& h);

IndexSet closure_reduce(const std::vector<IndexPair>& raw);
// nullopt for EMPTY (min = +infinity).
std::optional<Rational> min_e(const IndexSet& e);
double min_e_value(const IndexSet& e);
bool geq(const IndexSet& e, Rational q);
bool gt(const IndexSet& e, Rational q);
bool is_integral(const IndexSet& e);
bool is_one_step(const IndexSet& e);
bool is_log_extension(const IndexSet& extended, const IndexSet& e);

IndexSet add(const IndexSet& a, const IndexSet& b);
IndexSet ext_union(const IndexSet& a, const IndexSet& b);
// Every represented pair with beta <= bound.
std::vector<IndexPair> enumerate(const IndexSet& e, Rational bound);

enum class Face { zf, bf0, lb0, rb0, bf, lb, rb };
constexpr std::array<Face, 7> kAllFaces{Face::zf, Face::bf0, Face::lb0, Face::rb0, Face::bf, Face::lb, Face::rb};
const char* face_name(Face f);
Face face_from_string(const std::string& name);

struct IndexFamily {
  std::array<IndexSet, 7> sets;
  IndexSet& operator[](Face f) { return sets[static_cast<int>(f)]; }
  const IndexSet& operator[](Face f) const { return sets[static_cast<int>(f)]; }
  friend bool operator==(const IndexFamily& a, const IndexFamily& b) { return a.sets == b.sets; }
  std::string str() const;
};

// One step of the error-composition recursion on zf, bf0, lb0, rb0:
//   lb0 <- (lb0 + zf') extu (bf0 + lb0'),  rb0 <- (rb0 + bf0') extu (zf + rb0'),
//   bf0 <- (bf0 + bf0') extu (lb0 + rb0'), zf  <- (zf + zf') extu (rb0 + lb0'),
// unprimed from `current`, primed from `base`. The other faces of `current`
// are carried over.
IndexFamily compose_step(const IndexFamily& current, const IndexFamily& base);

// Resolvent orders: zf 0, bf0 -2, lb0 = rb0 = nu0 - 1, lb = rb = (n-1)/2, bf EMPTY.
IndexFamily mainres_ledger(Rational nu0, int n);
IndexFamily mainres_ledger(double nu0, int n);
// Spectral-measure orders: resolvent ledger + (1, 0) on the four lambda = 0
// faces with zf raised to 2 nu0 + 1.
IndexFamily spectral_ledger(Rational nu0, int n);

// Expressions for the CLI:
//   [ (b, j), ... ]   literal;  empty;  (short q)
//   (add E E)  (extu E E)  (step F)  (step F G)  (mainres nu0 n)  (spectral nu0 n)
//   { zf: E, bf0: E, ... }   family literal (missing faces EMPTY)
using IndexValue = std::variant<IndexSet, IndexFamily>;
IndexValue evaluate_index_expression(const std::string& text);
std::string to_string(const IndexValue& v);

}  // namespace conespec
