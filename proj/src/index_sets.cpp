#include "conespec/index_sets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw RangeError("index exponent overflows 64-bit rational arithmetic");
  return static_cast<std::int64_t>(v);
}

bool pair_less(const IndexPair& a, const IndexPair& b) {
  if (!(a.beta == b.beta)) return a.beta < b.beta;
  return a.j < b.j;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) num = -num, den = -den;
  const std::int64_t g = std::gcd(num, den);
  num_ = num / (g ? g : 1);
  den_ = den / (g ? g : 1);
}

Rational Rational::parse(const std::string& text) {
  auto bad = [&] { return ConfigError("bad rational '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t p1 = 0, p2 = 0;
      const long long a = std::stoll(text.substr(0, slash), &p1);
      const long long b = std::stoll(text.substr(slash + 1), &p2);
      if (p1 != slash || p2 != text.size() - slash - 1 || b == 0) throw bad();
      return Rational(a, b);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t p = 0;
      const long long a = std::stoll(text, &p);
      if (p != text.size()) throw bad();
      return Rational(a, 1);
    }
    const std::string frac = text.substr(dot + 1);
    if (frac.size() > 15 || !std::all_of(frac.begin(), frac.end(), ::isdigit)) throw bad();
    const std::string whole = text.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t w = 0;
    if (!whole.empty() && whole != "-" && whole != "+") {
      std::size_t p = 0;
      w = std::llabs(std::stoll(whole, &p));
      if (p != whole.size()) throw bad();
    }
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    const std::int64_t num = checked(__int128(w) * den + f);
    return Rational(neg ? -num : num, den);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("rational from non-finite value");
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const std::int64_t ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = checked(__int128(ai) * h1 + h0), k2 = checked(__int128(ai) * k1 + k0);
    if (k2 > 1000000) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(double(h1) / double(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x))) return Rational(h1, k1);
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  if (k1 > 0 && std::abs(double(h1) / double(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x))) return Rational(h1, k1);
  std::ostringstream msg;
  msg << "exponent " << x << " has no rational form with denominator <= 10^6";
  throw ConfigError(msg.str());
}

std::string Rational::str() const {
  std::ostringstream s;
  s << num_;
  if (den_ != 1) s << '/' << den_;
  return s.str();
}

Rational operator+(Rational a, Rational b) {
  const __int128 num = __int128(a.num_) * b.den_ + __int128(b.num_) * a.den_;
  const __int128 den = __int128(a.den_) * b.den_;
  const __int128 g = std::gcd(num < 0 ? -num : num, den);
  return Rational(checked(num / (g ? g : 1)), checked(den / (g ? g : 1)));
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

bool operator<(Rational a, Rational b) { return __int128(a.num_) * b.den_ < __int128(b.num_) * a.den_; }

bool implies(const IndexPair& g, const IndexPair& h) {
  const Rational d = h.beta - g.beta;
  return d.is_integer() && d.num() >= 0 && h.j <= g.j;
}

IndexSet closure_reduce(const std::vector<IndexPair>& raw) {
  for (const auto& p : raw)
    if (p.j < 0) throw DomainError("index pair with negative log order");
  std::vector<IndexPair> sorted = raw;
  std::sort(sorted.begin(), sorted.end(), pair_less);
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  IndexSet out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    bool redundant = false;
    for (std::size_t k = 0; k < sorted.size() && !redundant; ++k)
      if (k != i && implies(sorted[k], sorted[i])) redundant = true;
    if (!redundant) out.gens_.push_back(sorted[i]);
  }
  return out;
}

IndexSet IndexSet::shorthand(Rational q) { return closure_reduce({{q, 0}}); }

bool IndexSet::contains(IndexPair p) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const IndexPair& g) { return implies(g, p); });
}

std::string IndexSet::str() const {
  if (gens_.empty()) return "empty";
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i < gens_.size(); ++i) s << (i ? ", " : "") << '(' << gens_[i].beta.str() << ", " << gens_[i].j << ')';
  s << ']';
  return s.str();
}

std::optional<Rational> min_e(const IndexSet& e) {
  if (e.is_empty()) return std::nullopt;
  return e.generators().front().beta;
}

double min_e_value(const IndexSet& e) {
  const auto m = min_e(e);
  return m ? m->value() : std::numeric_limits<double>::infinity();
}

bool geq(const IndexSet& e, Rational q) {
  return std::all_of(e.generators().begin(), e.generators().end(),
                     [&](const IndexPair& g) { return g.beta > q || (g.beta == q && g.j == 0); });
}

bool gt(const IndexSet& e, Rational q) {
  return std::all_of(e.generators().begin(), e.generators().end(), [&](const IndexPair& g) { return g.beta > q; });
}

bool is_integral(const IndexSet& e) {
  return std::all_of(e.generators().begin(), e.generators().end(),
                     [](const IndexPair& g) { return g.beta.is_integer(); });
}

bool is_one_step(const IndexSet& e) {
  const auto& g = e.generators();
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i].beta - g[0].beta).is_integer()) return false;
  return true;
}

bool is_log_extension(const IndexSet& extended, const IndexSet& e) {
  for (const auto& g : e.generators())
    if (!extended.contains(g)) return false;
  for (const auto& g : extended.generators())
    if (!e.contains({g.beta, 0})) return false;
  return true;
}

IndexSet add(const IndexSet& a, const IndexSet& b) {
  std::vector<IndexPair> raw;
  for (const auto& x : a.generators())
    for (const auto& y : b.generators()) raw.push_back({x.beta + y.beta, x.j + y.j});
  return closure_reduce(raw);
}

IndexSet ext_union(const IndexSet& a, const IndexSet& b) {
  std::vector<IndexPair> raw = a.generators();
  raw.insert(raw.end(), b.generators().begin(), b.generators().end());
  // (beta, j1) in a and (beta, j2) in b share beta iff the generator
  // exponents differ by an integer; the highest combined order sits at the larger one.
  for (const auto& x : a.generators())
    for (const auto& y : b.generators())
      if ((x.beta - y.beta).is_integer()) raw.push_back({std::max(x.beta, y.beta), x.j + y.j + 1});
  return closure_reduce(raw);
}

std::vector<IndexPair> enumerate(const IndexSet& e, Rational bound) {
  std::vector<IndexPair> out;
  for (const auto& g : e.generators()) {
    for (Rational b = g.beta; b <= bound; b = b + Rational(1))
      for (int j = 0; j <= g.j; ++j) out.push_back({b, j});
  }
  std::sort(out.begin(), out.end(), pair_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const char* face_name(Face f) {
  switch (f) {
    case Face::zf: return "zf";
    case Face::bf0: return "bf0";
    case Face::lb0: return "lb0";
    case Face::rb0: return "rb0";
    case Face::bf: return "bf";
    case Face::lb: return "lb";
    case Face::rb: return "rb";
  }
  return "?";
}

Face face_from_string(const std::string& name) {
  for (Face f : kAllFaces)
    if (name == face_name(f)) return f;
  throw ConfigError("unknown face '" + name + "' (zf, bf0, lb0, rb0, bf, lb, rb)");
}

std::string IndexFamily::str() const {
  std::ostringstream s;
  s << '{';
  for (std::size_t i = 0; i < kAllFaces.size(); ++i)
    s << (i ? ", " : "") << face_name(kAllFaces[i]) << ": " << sets[i].str();
  s << '}';
  return s.str();
}

IndexFamily compose_step(const IndexFamily& cur, const IndexFamily& base) {
  IndexFamily next = cur;
  next[Face::lb0] = ext_union(add(cur[Face::lb0], base[Face::zf]), add(cur[Face::bf0], base[Face::lb0]));
  next[Face::rb0] = ext_union(add(cur[Face::rb0], base[Face::bf0]), add(cur[Face::zf], base[Face::rb0]));
  next[Face::bf0] = ext_union(add(cur[Face::bf0], base[Face::bf0]), add(cur[Face::lb0], base[Face::rb0]));
  next[Face::zf] = ext_union(add(cur[Face::zf], base[Face::zf]), add(cur[Face::rb0], base[Face::lb0]));
  return next;
}

IndexFamily mainres_ledger(Rational nu0, int n) {
  if (!(nu0 > Rational(0))) throw DomainError("mainres_ledger: nu0 must be positive");
  IndexFamily f;
  f[Face::zf] = IndexSet::shorthand(Rational(0));
  f[Face::bf0] = IndexSet::shorthand(Rational(-2));
  f[Face::lb0] = IndexSet::shorthand(nu0 - Rational(1));
  f[Face::rb0] = IndexSet::shorthand(nu0 - Rational(1));
  f[Face::lb] = IndexSet::shorthand(Rational(n - 1, 2));
  f[Face::rb] = IndexSet::shorthand(Rational(n - 1, 2));
  f[Face::bf] = IndexSet::empty();
  return f;
}

IndexFamily mainres_ledger(double nu0, int n) { return mainres_ledger(Rational::from_double(nu0), n); }

IndexFamily spectral_ledger(Rational nu0, int n) {
  IndexFamily f = mainres_ledger(nu0, n);
  const IndexSet one = IndexSet::shorthand(Rational(1));
  for (Face face : {Face::bf0, Face::lb0, Face::rb0}) f[face] = add(f[face], one);
  f[Face::zf] = IndexSet::shorthand(nu0 + nu0 + Rational(1));
  return f;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  IndexValue parse_all() {
    IndexValue v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream m;
    m << "index expression: " << what << " at offset " << pos_;
    throw ConfigError(m.str());
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string token() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/' ||
                                s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a token");
    return s_.substr(start, pos_ - start);
  }
  IndexSet as_set(IndexValue v) {
    if (auto* s = std::get_if<IndexSet>(&v)) return *s;
    fail("expected an index set, got a family");
  }
  IndexFamily as_family(IndexValue v) {
    if (auto* f = std::get_if<IndexFamily>(&v)) return *f;
    fail("expected an index family, got a set");
  }

  IndexValue expr() {
    skip();
    if (peek('[')) return set_literal();
    if (peek('{')) return family_literal();
    if (peek('(')) {
      ++pos_;
      const std::string op = token();
      IndexValue out;
      if (op == "add" || op == "extu") {
        const IndexSet a = as_set(expr()), b = as_set(expr());
        out = op == "add" ? add(a, b) : ext_union(a, b);
      } else if (op == "step") {
        const IndexFamily f = as_family(expr());
        out = peek(')') ? compose_step(f, f) : compose_step(f, as_family(expr()));
      } else if (op == "short") {
        out = IndexSet::shorthand(Rational::parse(token()));
      } else if (op == "mainres" || op == "spectral") {
        const Rational nu0 = Rational::parse(token());
        const std::string n = token();
        int dim = 0;
        try {
          dim = std::stoi(n);
        } catch (const std::logic_error&) {
          fail("bad dimension '" + n + "'");
        }
        out = op == "mainres" ? mainres_ledger(nu0, dim) : spectral_ledger(nu0, dim);
      } else {
        fail("unknown operator '" + op + "'");
      }
      expect(')');
      return out;
    }
    const std::string t = token();
    if (t == "empty") return IndexSet::empty();
    fail("unexpected '" + t + "'");
  }

  IndexValue set_literal() {
    expect('[');
    std::vector<IndexPair> raw;
    while (!peek(']')) {
      expect('(');
      const Rational b = Rational::parse(token());
      expect(',');
      const std::string j = token();
      int jj = 0;
      try {
        jj = std::stoi(j);
      } catch (const std::logic_error&) {
        fail("bad log order '" + j + "'");
      }
      if (jj < 0) fail("negative log order");
      expect(')');
      raw.push_back({b, jj});
      if (!peek(']')) expect(',');
    }
    expect(']');
    return closure_reduce(raw);
  }

  IndexValue family_literal() {
    expect('{');
    IndexFamily f;
    while (!peek('}')) {
      const Face face = face_from_string(token());
      expect(':');
      f[face] = as_set(expr());
      if (!peek('}')) expect(',');
    }
    expect('}');
    return f;
  }
};

}  // namespace

IndexValue evaluate_index_expression(const std::string& text) { return Parser(text).parse_all(); }

std::string to_string(const IndexValue& v) {
  return std::visit([](const auto& x) { return x.str(); }, v);
}

}  // namespace conespec
