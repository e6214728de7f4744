#pragma once

// Exact rational functions over Q in interned atoms.
//
// An atom is either a coordinate (parameter, independent variable, dependent
// variable or one of its jets, internal helper symbol) or an applied opaque
// function f_;J(a1, ..., an) whose arguments are themselves expressions.
// Every Expression is kept in canonical form num/den with gcd(num, den) = 1
// and den monic under the graded-lexicographic monomial order, so structural
// equality is semantic equality.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jetsym/error.hpp"

namespace jetsym {

using Rational = mpq_class;

class Expression;

enum class AtomKind : std::uint8_t { Parameter = 0, Independent = 1, Dependent = 2, Internal = 3, Function = 4 };

struct AtomNode {
  AtomKind kind = AtomKind::Internal;
  std::string name;
  // Jet multi-index as independent-variable names, canonically sorted by the
  // declaring space. Empty for the order-0 dependent variable.
  std::vector<std::string> index;
  // Derivative slots of an applied function, 1-based, sorted ascending.
  std::vector<int> slots;
  std::vector<Expression> args;
};

/// Handle to an interned, immutable atom. Cheap to copy; identity is pointer identity.
class Atom {
 public:
  Atom() = default;
  explicit Atom(const AtomNode* node) : node_(node) {}

  const AtomNode& node() const { return *node_; }
  const AtomNode* get() const { return node_; }
  AtomKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }

  bool is_function() const { return node_->kind == AtomKind::Function; }
  bool is_dependent() const { return node_->kind == AtomKind::Dependent; }
  bool is_independent() const { return node_->kind == AtomKind::Independent; }
  bool is_parameter() const { return node_->kind == AtomKind::Parameter; }
  /// Jet order; 0 for everything that is not a dependent coordinate.
  int order() const { return static_cast<int>(node_->index.size()); }

  friend bool operator==(Atom a, Atom b) { return a.node_ == b.node_; }
  friend bool operator!=(Atom a, Atom b) { return a.node_ != b.node_; }

 private:
  const AtomNode* node_ = nullptr;
};

int compare(const Expression& a, const Expression& b);
int compare_atoms(Atom a, Atom b);

struct AtomLess {
  bool operator()(Atom a, Atom b) const { return compare_atoms(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Monomials

class Monomial {
 public:
  using Factor = std::pair<Atom, unsigned>;

  Monomial() = default;
  explicit Monomial(Atom a, unsigned e = 1) {
    if (e > 0) {
      factors_.emplace_back(a, e);
      degree_ = e;
    }
  }

  const std::vector<Factor>& factors() const { return factors_; }
  unsigned degree() const { return degree_; }
  bool is_one() const { return factors_.empty(); }

  unsigned exponent(Atom a) const {
    for (const auto& [atom, e] : factors_)
      if (atom == a) return e;
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      if (i->first == j->first) {
        r.factors_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      } else if (compare_atoms(i->first, j->first) < 0) {
        r.factors_.push_back(*i++);
      } else {
        r.factors_.push_back(*j++);
      }
    }
    r.factors_.insert(r.factors_.end(), i, a.factors_.end());
    r.factors_.insert(r.factors_.end(), j, b.factors_.end());
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  bool divisible_by(const Monomial& d) const {
    for (const auto& [atom, e] : d.factors_)
      if (exponent(atom) < e) return false;
    return true;
  }

  /// Requires divisible_by(d).
  Monomial divided_by(const Monomial& d) const {
    Monomial r;
    for (const auto& [atom, e] : factors_) {
      unsigned k = e - d.exponent(atom);
      if (k > 0) r.factors_.emplace_back(atom, k);
    }
    r.degree_ = degree_ - d.degree_;
    return r;
  }

  /// Copy with the given atom removed.
  Monomial without(Atom a) const {
    Monomial r;
    for (const auto& f : factors_) {
      if (f.first == a) continue;
      r.factors_.push_back(f);
      r.degree_ += f.second;
    }
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (const auto& [atom, e] : a.factors_) {
      unsigned k = std::min(e, b.exponent(atom));
      if (k > 0) {
        r.factors_.emplace_back(atom, k);
        r.degree_ += k;
      }
    }
    return r;
  }

  /// Graded lexicographic order; the highest-ranked atom is most significant.
  friend int compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    auto i = a.factors_.rbegin();
    auto j = b.factors_.rbegin();
    while (i != a.factors_.rend() && j != b.factors_.rend()) {
      if (i->first == j->first) {
        if (i->second != j->second) return i->second < j->second ? -1 : 1;
        ++i;
        ++j;
        continue;
      }
      return compare_atoms(i->first, j->first) > 0 ? 1 : -1;
    }
    if (i != a.factors_.rend()) return 1;
    if (j != b.factors_.rend()) return -1;
    return 0;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<Factor> factors_;  // ascending atom order, positive exponents
  unsigned degree_ = 0;
};

// ---------------------------------------------------------------------------
// Sparse multivariate polynomials over Q

struct Term {
  Monomial mono;
  Rational coef;
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Rational c) {
    if (c != 0) terms_.push_back({Monomial{}, std::move(c)});
  }
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial from_atom(Atom a) {
    Polynomial p;
    p.terms_.push_back({Monomial(a), Rational(1)});
    return p;
  }
  static Polynomial from_term(Monomial m, Rational c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
    return p;
  }
  static Polynomial from_terms(std::vector<Term> terms) {
    Polynomial p;
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1; }
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const { return terms_.empty() ? Rational(0) : terms_.back().mono.is_one() ? terms_.back().coef : Rational(0); }
  const Term& lead() const { return terms_.front(); }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  unsigned degree_in(Atom a) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(a));
    return d;
  }

  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    for (const auto& t : terms_)
      for (const auto& f : t.mono.factors()) out.push_back(f.first);
    std::sort(out.begin(), out.end(), AtomLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool contains(Atom a) const {
    for (const auto& t : terms_)
      if (t.mono.exponent(a) > 0) return true;
    return false;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, Rational(1)); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, Rational(-1)); }
  Polynomial operator-() const { return scaled(Rational(-1)); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coef);
    if (b.is_constant()) return a.scaled(b.terms_[0].coef);
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.push_back({s.mono * t.mono, s.coef * t.coef});
    return from_terms(std::move(out));
  }

  Polynomial scaled(const Rational& c) const {
    if (c == 0) return {};
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  Polynomial times(const Monomial& m, const Rational& c) const {
    Polynomial r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;  // multiplying by a monomial preserves the order
  }

  Polynomial pow(unsigned n) const {
    Polynomial result(1L);
    Polynomial base = *this;
    while (n > 0) {
      if (n & 1U) result = result * base;
      n >>= 1U;
      if (n > 0) base = base * base;
    }
    return result;
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    return scaled(Rational(1) / lead().coef);
  }

  Polynomial derivative(Atom a) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      unsigned e = t.mono.exponent(a);
      if (e == 0) continue;
      Monomial m = t.mono.divided_by(Monomial(a));
      out.push_back({std::move(m), t.coef * e});
    }
    return from_terms(std::move(out));
  }

  /// Coefficients of this polynomial viewed as univariate in `v`; index = degree.
  std::vector<Polynomial> coefficients_in(Atom v) const {
    std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
    for (const auto& t : terms_) {
      unsigned e = t.mono.exponent(v);
      buckets[e].push_back({t.mono.without(v), t.coef});
    }
    std::vector<Polynomial> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
  }

  static Polynomial from_coefficients(Atom v, const std::vector<Polynomial>& coefs) {
    std::vector<Term> out;
    for (std::size_t e = 0; e < coefs.size(); ++e) {
      Monomial m = e == 0 ? Monomial{} : Monomial(v, static_cast<unsigned>(e));
      for (const auto& t : coefs[e].terms_) out.push_back({t.mono * m, t.coef});
    }
    return from_terms(std::move(out));
  }

  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.front().mono;
    for (const auto& t : terms_) {
      if (g.is_one()) break;
      g = Monomial::gcd(g, t.mono);
    }
    return g;
  }

  Polynomial divided_by(const Monomial& m) const {
    Polynomial r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono.divided_by(m), t.coef});
    return r;
  }

  /// Exact quotient a / b. Throws std::logic_error when b does not divide a.
  static Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (b.is_constant()) return a.scaled(Rational(1) / b.terms_[0].coef);
    if (b.is_monomial()) {
      const Term& lb = b.lead();
      Polynomial r;
      for (const auto& t : a.terms_) {
        if (!t.mono.divisible_by(lb.mono)) throw std::logic_error("inexact polynomial division");
        r.terms_.push_back({t.mono.divided_by(lb.mono), t.coef / lb.coef});
      }
      return r;
    }
    std::vector<Term> quotient;
    Polynomial rem = a;
    const Term& lb = b.lead();
    while (!rem.is_zero()) {
      const Term& lr = rem.lead();
      if (!lr.mono.divisible_by(lb.mono)) throw std::logic_error("inexact polynomial division");
      Monomial qm = lr.mono.divided_by(lb.mono);
      Rational qc = lr.coef / lb.coef;
      rem = rem - b.times(qm, qc);
      quotient.push_back({std::move(qm), std::move(qc)});
    }
    return from_terms(std::move(quotient));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].coef != b.terms_[i].coef) return false;
      if (!(a.terms_[i].mono == b.terms_[i].mono)) return false;
    }
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  friend int compare(const Polynomial& a, const Polynomial& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = compare(a.terms_[i].mono, b.terms_[i].mono);
      if (c != 0) return c;
      int k = cmp(a.terms_[i].coef, b.terms_[i].coef);
      if (k != 0) return k < 0 ? -1 : 1;
    }
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
    return 0;
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return compare(x.mono, y.mono) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coef += t.coef;
      } else {
        if (!out.empty() && out.back().coef == 0) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && out.back().coef == 0) out.pop_back();
    terms_ = std::move(out);
  }

  static Polynomial merge(const Polynomial& a, const Polynomial& b, const Rational& sign) {
    Polynomial r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    while (i != a.terms_.end() && j != b.terms_.end()) {
      int c = compare(i->mono, j->mono);
      if (c > 0) {
        r.terms_.push_back(*i++);
      } else if (c < 0) {
        r.terms_.push_back({j->mono, j->coef * sign});
        ++j;
      } else {
        Rational s = i->coef + sign * j->coef;
        if (s != 0) r.terms_.push_back({i->mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i != a.terms_.end(); ++i) r.terms_.push_back(*i);
    for (; j != b.terms_.end(); ++j) r.terms_.push_back({j->mono, j->coef * sign});
    return r;
  }

  std::vector<Term> terms_;  // descending monomial order, nonzero coefficients
};

// ---------------------------------------------------------------------------
// Multivariate gcd (recursive primitive remainder sequences)

namespace detail {

inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

inline Polynomial content_in(const std::vector<Polynomial>& coefs) {
  Polynomial g;
  for (const auto& c : coefs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : poly_gcd(g, c);
    if (g.is_constant()) return Polynomial(1L);
  }
  return g;
}

inline void trim(std::vector<Polynomial>& v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
}

inline std::vector<Polynomial> primitive_part(std::vector<Polynomial> v) {
  Polynomial c = content_in(v);
  if (!c.is_one())
    for (auto& p : v) p = Polynomial::divide_exact(p, c);
  return v;
}

inline std::vector<Polynomial> pseudo_remainder(std::vector<Polynomial> r, const std::vector<Polynomial>& b) {
  const std::size_t db = b.size() - 1;
  const Polynomial& lb = b.back();
  trim(r);
  while (!r.empty() && r.size() - 1 >= db) {
    std::size_t dr = r.size() - 1;
    Polynomial lr = r.back();
    for (auto& p : r) p = p * lb;
    for (std::size_t j = 0; j <= db; ++j) r[j + dr - db] = r[j + dr - db] - lr * b[j];
    trim(r);
  }
  return r;
}

inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1L);

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Polynomial gm = Polynomial::from_term(Monomial::gcd(ma, mb), Rational(1));
  Polynomial a1 = ma.is_one() ? a : a.divided_by(ma);
  Polynomial b1 = mb.is_one() ? b : b.divided_by(mb);
  if (a1.is_constant() || b1.is_constant()) return gm;

  std::vector<Atom> va = a1.atoms();
  std::vector<Atom> vb = b1.atoms();
  for (Atom v : va) {
    if (!std::binary_search(vb.begin(), vb.end(), v, AtomLess{}))
      return (gm * poly_gcd(content_in(a1.coefficients_in(v)), b1)).monic();
  }
  for (Atom v : vb) {
    if (!std::binary_search(va.begin(), va.end(), v, AtomLess{}))
      return (gm * poly_gcd(a1, content_in(b1.coefficients_in(v)))).monic();
  }

  // Same variable set: choose the main variable of smallest combined degree.
  Atom main = va.front();
  unsigned best = ~0U;
  for (Atom v : va) {
    unsigned d = a1.degree_in(v) + b1.degree_in(v);
    if (d < best) {
      best = d;
      main = v;
    }
  }
  std::vector<Polynomial> ca = a1.coefficients_in(main);
  std::vector<Polynomial> cb = b1.coefficients_in(main);
  Polynomial conta = content_in(ca);
  Polynomial contb = content_in(cb);
  Polynomial gc = poly_gcd(conta, contb);
  std::vector<Polynomial> pa = primitive_part(ca);
  std::vector<Polynomial> pb = primitive_part(cb);
  if (pa.size() < pb.size()) std::swap(pa, pb);
  while (true) {
    std::vector<Polynomial> r = pseudo_remainder(pa, pb);
    if (r.empty()) break;
    if (r.size() == 1) {
      pb = {Polynomial(1L)};
      break;
    }
    pa = std::move(pb);
    pb = primitive_part(std::move(r));
  }
  Polynomial g = Polynomial::from_coefficients(main, pb);
  return (gm * gc * g).monic();
}

}  // namespace detail

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Polynomial gcd(const Polynomial& a, const Polynomial& b) { return detail::poly_gcd(a, b); }

// ---------------------------------------------------------------------------
// Expressions

class Expression {
 public:
  Expression() : den_(1L) {}
  Expression(long c) : num_(c), den_(1L) {}  // NOLINT(google-explicit-constructor)
  Expression(int c) : Expression(static_cast<long>(c)) {}  // NOLINT(google-explicit-constructor)
  Expression(const Rational& c) : num_(c), den_(1L) {}  // NOLINT(google-explicit-constructor)
  explicit Expression(Atom a) : num_(Polynomial::from_atom(a)), den_(1L) {}
  explicit Expression(Polynomial p) : num_(std::move(p)), den_(1L) {}

  /// Builds num/den in canonical form. Throws DomainError when den is zero.
  static Expression fraction(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) throw DomainError("division by zero");
    Expression e;
    if (num.is_zero()) return e;
    if (den.is_constant()) {
      e.num_ = num.scaled(Rational(1) / den.constant_value());
      return e;
    }
    Polynomial g = gcd(num, den);
    Polynomial n = g.is_one() ? num : Polynomial::divide_exact(num, g);
    Polynomial d = g.is_one() ? den : Polynomial::divide_exact(den, g);
    Rational lc = d.lead().coef;
    e.num_ = n.scaled(Rational(1) / lc);
    e.den_ = d.scaled(Rational(1) / lc);
    return e;
  }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  Rational constant_value() const { return num_.constant_value(); }

  /// Atoms appearing at top level (not inside function arguments).
  std::vector<Atom> atoms() const {
    std::vector<Atom> a = num_.atoms();
    std::vector<Atom> b = den_.atoms();
    std::vector<Atom> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), AtomLess{});
    return out;
  }

  friend Expression operator+(const Expression& a, const Expression& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return Expression(a.num_ + b.num_);
    if (a.den_ == b.den_) return fraction(a.num_ + b.num_, a.den_);
    Polynomial g = gcd(a.den_, b.den_);
    if (g.is_one()) {
      // Henrici: the sum of coprime-denominator fractions in lowest terms is already reduced.
      Expression e;
      Polynomial n = a.num_ * b.den_ + b.num_ * a.den_;
      if (n.is_zero()) return e;
      Polynomial d = a.den_ * b.den_;
      Rational lc = d.lead().coef;
      e.num_ = n.scaled(Rational(1) / lc);
      e.den_ = d.scaled(Rational(1) / lc);
      return e;
    }
    Polynomial ad = Polynomial::divide_exact(a.den_, g);
    Polynomial bd = Polynomial::divide_exact(b.den_, g);
    Polynomial n = a.num_ * bd + b.num_ * ad;
    if (n.is_zero()) return Expression();
    Polynomial h = gcd(n, g);
    Polynomial gh = h.is_one() ? g : Polynomial::divide_exact(g, h);
    Polynomial nn = h.is_one() ? n : Polynomial::divide_exact(n, h);
    Polynomial d = ad * bd * gh;
    Expression e;
    Rational lc = d.lead().coef;
    e.num_ = nn.scaled(Rational(1) / lc);
    e.den_ = d.scaled(Rational(1) / lc);
    return e;
  }

  Expression operator-() const {
    Expression e = *this;
    e.num_ = -e.num_;
    return e;
  }
  friend Expression operator-(const Expression& a, const Expression& b) { return a + (-b); }

  friend Expression operator*(const Expression& a, const Expression& b) {
    if (a.is_zero() || b.is_zero()) return Expression();
    if (a.den_.is_one() && b.den_.is_one()) return Expression(a.num_ * b.num_);
    Polynomial g1 = gcd(a.num_, b.den_);
    Polynomial g2 = gcd(b.num_, a.den_);
    Polynomial an = g1.is_one() ? a.num_ : Polynomial::divide_exact(a.num_, g1);
    Polynomial bd = g1.is_one() ? b.den_ : Polynomial::divide_exact(b.den_, g1);
    Polynomial bn = g2.is_one() ? b.num_ : Polynomial::divide_exact(b.num_, g2);
    Polynomial ad = g2.is_one() ? a.den_ : Polynomial::divide_exact(a.den_, g2);
    Polynomial d = ad * bd;
    Rational lc = d.lead().coef;
    Expression e;
    e.num_ = (an * bn).scaled(Rational(1) / lc);
    e.den_ = d.scaled(Rational(1) / lc);
    return e;
  }

  Expression inverse() const {
    if (num_.is_zero()) throw DomainError("division by zero");
    Expression e;
    Rational lc = num_.lead().coef;
    e.num_ = den_.scaled(Rational(1) / lc);
    e.den_ = num_.scaled(Rational(1) / lc);
    return e;
  }

  friend Expression operator/(const Expression& a, const Expression& b) { return a * b.inverse(); }

  Expression& operator+=(const Expression& b) { return *this = *this + b; }
  Expression& operator-=(const Expression& b) { return *this = *this - b; }
  Expression& operator*=(const Expression& b) { return *this = *this * b; }
  Expression& operator/=(const Expression& b) { return *this = *this / b; }

  Expression pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    Expression e;
    if (n == 0) return Expression(1L);
    e.num_ = num_.pow(static_cast<unsigned>(n));
    e.den_ = den_.pow(static_cast<unsigned>(n));
    return e;
  }

  friend bool operator==(const Expression& a, const Expression& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Expression& a, const Expression& b) { return !(a == b); }

 private:
  Polynomial num_;
  Polynomial den_;
};

inline Expression pow(const Expression& e, int n) { return e.pow(n); }

inline int compare(const Expression& a, const Expression& b) {
  int c = compare(a.numerator(), b.numerator());
  if (c != 0) return c;
  return compare(a.denominator(), b.denominator());
}

/// True iff the canonical numerator is the zero polynomial.
inline bool equals_zero(const Expression& e) { return e.is_zero(); }

// ---------------------------------------------------------------------------
// Atom ordering and interning

namespace detail {

inline int compare_nodes(const AtomNode& a, const AtomNode& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.kind == AtomKind::Dependent && a.index.size() != b.index.size())
    return a.index.size() < b.index.size() ? -1 : 1;
  if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  if (a.slots != b.slots) return a.slots < b.slots ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
  return 0;
}

struct NodePtrLess {
  bool operator()(const AtomNode* a, const AtomNode* b) const { return compare_nodes(*a, *b) < 0; }
};

// Process-wide atom table. Atoms are never released.
class Interner {
 public:
  static Interner& instance() {
    static Interner table;
    return table;
  }

  Atom intern(AtomNode probe) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = index_.find(&probe);
    if (it != index_.end()) return Atom(*it);
    storage_.push_back(std::make_unique<AtomNode>(std::move(probe)));
    const AtomNode* node = storage_.back().get();
    index_.insert(node);
    return Atom(node);
  }

 private:
  std::mutex mutex_;
  std::vector<std::unique_ptr<AtomNode>> storage_;
  std::set<const AtomNode*, NodePtrLess> index_;
};

}  // namespace detail

inline int compare_atoms(Atom a, Atom b) {
  if (a == b) return 0;
  return detail::compare_nodes(a.node(), b.node());
}

inline Atom make_parameter(const std::string& name) {
  AtomNode n;
  n.kind = AtomKind::Parameter;
  n.name = name;
  return detail::Interner::instance().intern(std::move(n));
}

inline Atom make_independent(const std::string& name) {
  AtomNode n;
  n.kind = AtomKind::Independent;
  n.name = name;
  return detail::Interner::instance().intern(std::move(n));
}

/// Jet coordinate of dependent `name`; `index` must already be canonically sorted.
inline Atom make_jet(const std::string& name, std::vector<std::string> index = {}) {
  AtomNode n;
  n.kind = AtomKind::Dependent;
  n.name = name;
  n.index = std::move(index);
  return detail::Interner::instance().intern(std::move(n));
}

/// Helper symbol that cannot be written in the DSL (section variables, basis placeholders).
inline Atom make_internal(const std::string& name) {
  AtomNode n;
  n.kind = AtomKind::Internal;
  n.name = name;
  return detail::Interner::instance().intern(std::move(n));
}

inline Atom make_function(const std::string& name, std::vector<Expression> args, std::vector<int> slots = {}) {
  std::sort(slots.begin(), slots.end());
  AtomNode n;
  n.kind = AtomKind::Function;
  n.name = name;
  n.slots = std::move(slots);
  n.args = std::move(args);
  return detail::Interner::instance().intern(std::move(n));
}

inline Expression atom_expr(Atom a) { return Expression(a); }

/// f(args) as an expression.
inline Expression apply_function(const std::string& name, std::vector<Expression> args, std::vector<int> slots = {}) {
  return Expression(make_function(name, std::move(args), std::move(slots)));
}

}  // namespace jetsym
