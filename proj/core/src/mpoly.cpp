#include "pld/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace pld {

// ---------------------------------------------------------------- rationals

Rat parse_rat(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  // allow Julia-style "//"
  auto pos = t.find("//");
  if (pos != std::string::npos) t = t.substr(0, pos) + "/" + t.substr(pos + 2);
  if (t.empty()) throw Error("parse: empty rational literal");
  try {
    Rat q(t);
    if (q.get_den() == 0) throw Error("parse: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw Error("parse: bad rational literal '" + s + "'");
  }
}

std::string rat_str(const Rat& q, bool julia_style) {
  std::string s = q.get_str();
  if (julia_style) {
    auto pos = s.find('/');
    if (pos != std::string::npos) s = s.substr(0, pos) + "//" + s.substr(pos + 1);
  }
  return s;
}

Rat rationalize(double x, double tol) {
  if (!std::isfinite(x)) throw Error("rationalize: non-finite input");
  bool neg = x < 0;
  double a = neg ? -x : x;
  // continued fraction expansion, stopping at the first convergent within tol
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = a;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(r);
    // mpz_class(double) truncates toward zero, exact for a floored value.
    mpz_class ai = fl > 9e18 ? mpz_class(fl) : mpz_class(static_cast<long>(fl));
    mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rat conv(p1, q1);
    conv.canonicalize();
    if (std::abs(conv.get_d() - a) <= tol) break;
    double frac = r - fl;
    if (frac < 1e-18) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) throw Error("rationalize: input too large");
  Rat out(p1, q1);
  out.canonicalize();
  if (neg) out = -out;
  return out;
}

// --------------------------------------------------------------- term order

bool GrlexLess::operator()(const std::vector<int>& a, const std::vector<int>& b) const {
  long da = 0, db = 0;
  for (int e : a) da += e;
  for (int e : b) db += e;
  if (da != db) return da < db;
  // same length is guaranteed within one polynomial; compare lexicographically
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ------------------------------------------------------------- construction

MPoly::MPoly(const Rat& c) {
  if (c != 0) terms_.emplace(std::vector<int>{}, c);
}

MPoly::MPoly(long c) : MPoly(Rat(c)) {}

MPoly MPoly::var(const std::string& name, int exp) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0]))))
    throw Error("parse: bad symbol name '" + name + "'");
  for (char ch : name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
      throw Error("parse: bad symbol name '" + name + "'");
  MPoly p;
  if (exp == 0) return MPoly(Rat(1));
  p.vars_ = {name};
  p.terms_.emplace(std::vector<int>{exp}, Rat(1));
  return p;
}

MPoly MPoly::from_terms(std::vector<std::string> vars, Terms terms) {
  MPoly p;
  p.vars_ = std::move(vars);
  p.terms_ = std::move(terms);
  for (const auto& [e, c] : p.terms_)
    if (e.size() != p.vars_.size()) throw Error("mpoly: exponent length mismatch");
  p.prune_and_trim();
  return p;
}

void MPoly::prune_and_trim() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (it->second == 0) ? terms_.erase(it) : std::next(it);
  if (terms_.empty()) {
    vars_.clear();
    return;
  }
  std::vector<char> used(vars_.size(), 0);
  for (const auto& [e, c] : terms_)
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) used[i] = 1;
  if (std::all_of(used.begin(), used.end(), [](char u) { return u == 1; })) return;
  std::vector<std::string> nv;
  for (size_t i = 0; i < vars_.size(); ++i)
    if (used[i]) nv.push_back(vars_[i]);
  Terms nt;
  for (const auto& [e, c] : terms_) {
    std::vector<int> ne;
    ne.reserve(nv.size());
    for (size_t i = 0; i < e.size(); ++i)
      if (used[i]) ne.push_back(e[i]);
    nt.emplace(std::move(ne), c);
  }
  vars_ = std::move(nv);
  terms_ = std::move(nt);
}

std::pair<MPoly, MPoly> aligned(const MPoly& a, const MPoly& b) {
  if (a.vars_ == b.vars_) return {a, b};
  std::vector<std::string> u;
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(u));
  auto remap = [&u](const MPoly& p) {
    std::vector<size_t> pos(p.vars_.size());
    for (size_t i = 0; i < p.vars_.size(); ++i)
      pos[i] = std::lower_bound(u.begin(), u.end(), p.vars_[i]) - u.begin();
    MPoly q;
    q.vars_ = u;
    for (const auto& [e, c] : p.terms_) {
      std::vector<int> ne(u.size(), 0);
      for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
      q.terms_.emplace(std::move(ne), c);
    }
    return q;
  };
  return {remap(a), remap(b)};
}

// ----------------------------------------------------------------- queries

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && vars_.empty());
}

Rat MPoly::constant_value() const {
  if (terms_.empty()) return Rat(0);
  if (!is_constant()) throw Error("mpoly: constant_value of a non-constant");
  return terms_.begin()->second;
}

bool MPoly::is_laurent() const {
  for (const auto& [e, c] : terms_)
    for (int x : e)
      if (x < 0) return true;
  return false;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  long best = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    long d = 0;
    for (int x : e) d += x;
    if (first || d > best) best = d, first = false;
  }
  return static_cast<int>(best);
}

int MPoly::degree_in(const std::string& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) return 0;
  size_t i = it - vars_.begin();
  int best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, e[i]);
  return best;
}

int MPoly::min_degree_in(const std::string& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) return 0;
  size_t i = it - vars_.begin();
  int best = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (first || e[i] < best) best = e[i], first = false;
  }
  return best;
}

bool MPoly::depends_on(const std::string& v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool MPoly::operator==(const MPoly& o) const {
  return vars_ == o.vars_ && terms_ == o.terms_;
}

// -------------------------------------------------------------- arithmetic

MPoly MPoly::operator-() const {
  MPoly p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

MPoly MPoly::operator+(const MPoly& o) const {
  auto [a, b] = aligned(*this, o);
  for (const auto& [e, c] : b.terms_) {
    auto [it, fresh] = a.terms_.emplace(e, c);
    if (!fresh) it->second += c;
  }
  a.prune_and_trim();
  return a;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
  if (is_zero() || o.is_zero()) return MPoly();
  auto [a, b] = aligned(*this, o);
  MPoly r;
  r.vars_ = a.vars_;
  std::vector<int> e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto [it, fresh] = r.terms_.emplace(e, ca * cb);
      if (!fresh) it->second += ca * cb;
    }
  r.prune_and_trim();
  return r;
}

MPoly MPoly::operator*(const Rat& c) const {
  if (c == 0) return MPoly();
  MPoly p = *this;
  for (auto& [e, co] : p.terms_) co *= c;
  return p;
}

MPoly& MPoly::operator+=(const MPoly& o) { return *this = *this + o; }
MPoly& MPoly::operator-=(const MPoly& o) { return *this = *this - o; }
MPoly& MPoly::operator*=(const MPoly& o) { return *this = *this * o; }

MPoly MPoly::pow(long e) const {
  if (e == 0) return MPoly(Rat(1));
  if (e < 0) {
    if (terms_.size() != 1) throw Error("mpoly: negative power of a non-monomial");
    const auto& [ex, c] = *terms_.begin();
    MPoly r;
    r.vars_ = vars_;
    std::vector<int> ne(ex.size());
    for (size_t i = 0; i < ex.size(); ++i) {
      long v = static_cast<long>(ex[i]) * e;
      ne[i] = static_cast<int>(v);
    }
    Rat cc = 1;
    Rat base = c;
    for (long k = 0; k < -e; ++k) cc /= base;
    r.terms_.emplace(std::move(ne), cc);
    r.prune_and_trim();
    return r;
  }
  MPoly base = *this, acc(Rat(1));
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return acc;
}

MPoly MPoly::derivative(const std::string& v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) return MPoly();
  size_t i = it - vars_.begin();
  MPoly r;
  r.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    std::vector<int> ne = e;
    Rat nc = c * e[i];
    ne[i] -= 1;
    r.terms_.emplace(std::move(ne), nc);
  }
  r.prune_and_trim();
  return r;
}

MPoly MPoly::subst(const std::map<std::string, MPoly>& repl) const {
  for (const auto& [name, rep] : repl)
    if (rep.depends_on(name))
      throw Error("cycle: substitution of '" + name + "' by a polynomial containing it");
  MPoly out;
  for (const auto& [e, c] : terms_) {
    MPoly term(c);
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = repl.find(vars_[i]);
      if (it == repl.end())
        term *= MPoly::var(vars_[i], e[i]);
      else
        term *= it->second.pow(e[i]);
    }
    out += term;
  }
  return out;
}

// --------------------------------------------------------------- evaluation

namespace {
cdouble ipow(cdouble z, int e) {
  if (e < 0) {
    if (z == cdouble(0.0, 0.0)) throw Error("eval: zero raised to a negative exponent");
    return 1.0 / ipow(z, -e);
  }
  cdouble acc(1.0, 0.0), base = z;
  while (e > 0) {
    if (e & 1) acc *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return acc;
}
}  // namespace

cdouble MPoly::eval(const std::map<std::string, cdouble>& point) const {
  std::vector<cdouble> coords(vars_.size());
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = point.find(vars_[i]);
    if (it == point.end()) throw Error("eval: unassigned variable '" + vars_[i] + "'");
    coords[i] = it->second;
  }
  return eval(coords);
}

cdouble MPoly::eval(const std::vector<cdouble>& point) const {
  if (point.size() != vars_.size()) throw Error("eval: point length mismatch");
  cdouble acc(0.0, 0.0);
  for (const auto& [e, c] : terms_) {
    cdouble t(c.get_d(), 0.0);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) t *= ipow(point[i], e[i]);
    acc += t;
  }
  return acc;
}

Rat MPoly::eval_rat(const std::map<std::string, Rat>& point) const {
  Rat acc = 0;
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto it = point.find(vars_[i]);
      if (it == point.end()) throw Error("eval: unassigned variable '" + vars_[i] + "'");
      if (e[i] < 0) {
        if (it->second == 0) throw Error("eval: zero raised to a negative exponent");
        for (int k = 0; k < -e[i]; ++k) t /= it->second;
      } else {
        for (int k = 0; k < e[i]; ++k) t *= it->second;
      }
    }
    acc += t;
  }
  return acc;
}

// ------------------------------------------------------------ normalization

std::pair<std::vector<int>, Rat> MPoly::leading_term() const {
  if (terms_.empty()) throw Error("mpoly: leading term of zero");
  auto it = std::prev(terms_.end());
  return {it->first, it->second};
}

MPoly MPoly::coeff_in(const std::string& v, int k) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) {
    if (k == 0) return *this;
    return MPoly();
  }
  size_t i = it - vars_.begin();
  MPoly r;
  r.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    if (e[i] != k) continue;
    std::vector<int> ne = e;
    ne[i] = 0;
    r.terms_.emplace(std::move(ne), c);
  }
  r.prune_and_trim();
  return r;
}

Rat MPoly::content() const {
  if (terms_.empty()) throw Error("mpoly: content of zero");
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& [e, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  if (content < 0) content = -content;
  return content;
}

MPoly MPoly::normalized() const {
  if (terms_.empty()) return MPoly();
  Rat c = content();
  if (std::prev(terms_.end())->second < 0) c = -c;
  MPoly p = *this;
  for (auto& [e, co] : p.terms_) co /= c;
  return p;
}

MPoly MPoly::laurent_cleared() const {
  if (!is_laurent()) return *this;
  std::vector<int> shift(vars_.size(), 0);
  for (const auto& [e, c] : terms_)
    for (size_t i = 0; i < e.size(); ++i) shift[i] = std::min(shift[i], e[i]);
  MPoly r;
  r.vars_ = vars_;
  for (const auto& [e, c] : terms_) {
    std::vector<int> ne = e;
    for (size_t i = 0; i < ne.size(); ++i) ne[i] -= shift[i];
    r.terms_.emplace(std::move(ne), c);
  }
  r.prune_and_trim();
  return r;
}

// ----------------------------------------------------------------- printing

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // descending graded lex: largest term first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rat a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool any_var = std::any_of(e.begin(), e.end(), [](int x) { return x != 0; });
    if (!any_var) {
      out << rat_str(a);
      continue;
    }
    bool printed = false;
    if (a != 1) {
      out << rat_str(a);
      printed = true;
    }
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (printed) out << "*";
      out << vars_[i];
      if (e[i] != 1) out << "^" << e[i];
      printed = true;
    }
  }
  return out.str();
}

// ------------------------------------------------------------------ parsing

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("parse: " + msg + " at position " + std::to_string(i) + " in '" + s + "'");
  }

  MPoly expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    MPoly acc = term();
    if (neg) acc = -acc;
    while (true) {
      char c = peek();
      if (c == '+') {
        ++i;
        acc += term();
      } else if (c == '-') {
        ++i;
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly term() {
    MPoly acc = factor();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++i;
        acc *= factor();
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly factor() {
    if (eat('-')) return -factor();
    MPoly base = atom();
    if (eat('^')) {
      bool neg = eat('-');
      skip();
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected exponent");
      long e = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e = e * 10 + (s[i++] - '0');
      return base.pow(neg ? -e : e);
    }
    return base;
  }

  MPoly atom() {
    skip();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i];
    if (c == '(') {
      ++i;
      MPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      // rational literal p/q or p//q: only when followed by digits
      size_t save = i;
      skip();
      if (i < s.size() && s[i] == '/') {
        size_t slash = i;
        ++i;
        if (i < s.size() && s[i] == '/') ++i;
        skip();
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
          return MPoly(parse_rat(s.substr(start, i - start)));
        }
        i = slash;  // '/' was not a rational literal; we do not support division
        fail("'/' outside a rational literal");
      }
      i = save;
      return MPoly(parse_rat(s.substr(start, i - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = i;
      ++i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      return MPoly::var(s.substr(start, i - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

MPoly MPoly::parse(const std::string& text) {
  Parser p(text);
  MPoly out = p.expr();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return out;
}

// ---------------------------------------------------------- exact division

bool try_divide(const MPoly& num, const MPoly& den, MPoly* quot) {
  if (den.is_zero()) throw Error("mpoly: division by zero");
  if (num.is_laurent() || den.is_laurent()) throw Error("mpoly: division of Laurent input");
  if (num.is_zero()) {
    *quot = MPoly();
    return true;
  }
  auto [a, b] = aligned(num, den);
  auto [eb, cb] = b.leading_term();
  MPoly::Terms qterms;
  MPoly rem = a;
  const size_t nv = a.vars().size();
  while (!rem.is_zero()) {
    auto [er, cr] = rem.leading_term();
    // rem is aligned with b throughout (same var set as the union)
    std::vector<int> q(nv);
    bool divisible = true;
    for (size_t i = 0; i < nv; ++i) {
      q[i] = er[i] - eb[i];
      if (q[i] < 0) {
        divisible = false;
        break;
      }
    }
    if (!divisible) return false;
    Rat qc = cr / cb;
    MPoly qmono = MPoly::from_terms(rem.vars(), {{q, qc}});
    qterms.emplace(std::move(q), qc);
    rem = rem - qmono * b;
    if (!rem.is_zero()) {
      // keep rem on the full variable set so exponent vectors stay comparable
      rem = aligned(rem, b).first;
    }
  }
  *quot = MPoly::from_terms(a.vars(), std::move(qterms));
  return true;
}

MPoly divexact(const MPoly& num, const MPoly& den) {
  MPoly q;
  if (!try_divide(num, den, &q)) throw Error("mpoly: inexact division");
  return q;
}

namespace {

// pseudo-remainder of a by b with respect to v: lc_v(b)^(da-db+1) * a mod b
MPoly prem(const MPoly& a, const MPoly& b, const std::string& v) {
  int db = b.degree_in(v);
  MPoly lb = b.coeff_in(v, db);
  MPoly r = a;
  int dr = r.degree_in(v);
  while (!r.is_zero() && dr >= db) {
    MPoly lr = r.coeff_in(v, dr);
    r = r * lb - lr * MPoly::var(v, dr - db) * b;
    int ndr = r.degree_in(v);
    if (!r.is_zero() && ndr >= dr && r.coeff_in(v, dr) != MPoly())
      throw Error("mpoly: prem failed to reduce degree");
    dr = r.degree_in(v);
  }
  return r;
}

MPoly pgcd(const MPoly& a, const MPoly& b);

// gcd of the v-coefficients of p (the content of p as a polynomial in v)
MPoly content_in(const MPoly& p, const std::string& v) {
  MPoly c;
  int d = p.degree_in(v);
  for (int k = 0; k <= d; ++k) {
    MPoly ck = p.coeff_in(v, k);
    if (ck.is_zero()) continue;
    c = c.is_zero() ? ck.normalized() : pgcd(c, ck);
    if (c.is_constant()) return MPoly(Rat(1));
  }
  return c;
}

MPoly pgcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  if (a.is_constant() || b.is_constant()) return MPoly(Rat(1));
  std::vector<std::string> u;
  std::set_union(a.vars().begin(), a.vars().end(), b.vars().begin(), b.vars().end(),
                 std::back_inserter(u));
  std::string v = u.back();
  int da = a.degree_in(v), db = b.degree_in(v);
  if (da == 0) return pgcd(a, content_in(b, v));
  if (db == 0) return pgcd(content_in(a, v), b);
  MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly c = pgcd(ca, cb);
  MPoly A = divexact(a, ca), B = divexact(b, cb);
  if (da < db) std::swap(A, B);
  while (true) {
    MPoly r = prem(A, B, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) return c;  // gcd is v-free: the contents' gcd
    A = B;
    B = divexact(r, content_in(r, v)).normalized();
  }
  MPoly g = divexact(B, content_in(B, v));
  return (c * g).normalized();
}

MPoly sqfree_rec(const MPoly& p) {
  if (p.is_constant()) return MPoly(Rat(1));
  std::string v = p.vars().back();
  if (p.degree_in(v) == 0) {
    // last variable unused can't happen for trimmed polynomials
    throw Error("mpoly: untrimmed polynomial in sqfree");
  }
  MPoly c = content_in(p, v);
  MPoly q = divexact(p, c);
  MPoly d = q.derivative(v);
  MPoly g = pgcd(q, d);
  MPoly part = divexact(q, g);
  return (sqfree_rec(c) * part).normalized();
}

}  // namespace

MPoly gcd_poly(const MPoly& a, const MPoly& b) {
  if (a.is_laurent() || b.is_laurent()) throw Error("mpoly: gcd of Laurent input");
  return pgcd(a.is_zero() ? a : a.normalized(), b.is_zero() ? b : b.normalized());
}

MPoly sqfree_part(const MPoly& p) {
  if (p.is_zero()) throw Error("mpoly: square-free part of zero");
  MPoly q = p.laurent_cleared().normalized();
  return sqfree_rec(q).normalized();
}

}  // namespace pld
