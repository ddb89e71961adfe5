#pragma once
// Exact symbolic expressions: multivariate rational functions over an
// extensible atom set (variables, jet variables, opaque-function partial
// derivatives, algebraic constants with a quadratic rewrite relation, square
// roots, exponentials, powers with symbolic integer exponents).
//
// Canonical-form invariants, maintained by every public operation:
//  - an Expr is num/den with den a nonzero polynomial, monic w.r.t. the
//    monomial order, sharing no atom factor with the numerator;
//  - a single-monomial denominator holds only variable/jet/function atoms
//    (sqrt, exp, pow and algebraic atoms are rationalized away);
//  - within a monomial, atoms are sorted and exponents positive; sqrt, exp,
//    pow and algebraic atoms always carry exponent 1 (higher powers rewrite:
//    sqrt(u)^2 -> u, exp(u)*exp(v) -> exp(u+v), c^2 -> p*c + q for an
//    algebraic constant with relation c^2 = p*c + q, b^e * b^f -> b^(e+f));
//  - zero iff the numerator is empty; equality of canonical forms is
//    structural.

#include <liejet/rational.hpp>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace liejet {

class ExprError : public std::runtime_error {
 public:
  explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

enum class AtomKind : int {
  Var = 0,
  Jet = 1,
  Fn = 2,
  AlgConst = 3,
  Sqrt = 4,
  Exp = 5,
  Pow = 6,
};

// Exponent of a symbolic power: coeff * sym + offset, coeff != 0.
struct SymExp {
  std::string sym;
  long long coeff = 1;
  long long offset = 0;
};

struct ExprData;
using ExprDataPtr = std::shared_ptr<const ExprData>;

int data_cmp(const ExprData& a, const ExprData& b);

struct AlgRelation {
  ExprDataPtr p;  // c^2 = p*c + q; p, q polynomial over prior atoms
  ExprDataPtr q;
};

struct Atom {
  AtomKind kind = AtomKind::Var;
  std::string name;                // Var, Jet (dependent name), Fn, AlgConst
  int order = 0;                   // Jet derivative order, >= 1
  std::vector<std::string> args;   // Fn formal arguments
  std::vector<int> derivs;         // Fn per-argument derivative counts
  ExprDataPtr arg;                 // Sqrt/Exp argument, Pow base
  SymExp pexp;                     // Pow exponent
  std::shared_ptr<const AlgRelation> rel;  // AlgConst rewrite relation
};

inline int atom_rank(AtomKind k) {
  switch (k) {
    case AtomKind::Var:
    case AtomKind::Jet:
    case AtomKind::Fn:
    case AtomKind::AlgConst:
      return 0;
    case AtomKind::Sqrt:
      return 1;
    case AtomKind::Exp:
      return 2;
    case AtomKind::Pow:
      return 3;
  }
  return 4;
}

int atom_cmp(const Atom& a, const Atom& b);

struct AtomLess {
  bool operator()(const Atom& a, const Atom& b) const {
    return atom_cmp(a, b) < 0;
  }
};

// Monomial: sorted (atom, exponent) pairs, exponents positive.
using Monomial = std::vector<std::pair<Atom, int>>;

inline long long mono_degree(const Monomial& m) {
  long long d = 0;
  for (const auto& [a, k] : m) d += k;
  return d;
}

inline int mono_lex_cmp(const Monomial& a, const Monomial& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    int c = atom_cmp(a[i].first, b[i].first);
    if (c != 0) return c;
    if (a[i].second != b[i].second) return a[i].second > b[i].second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Total order used everywhere: higher total degree first, then lexicographic.
inline int mono_cmp(const Monomial& a, const Monomial& b) {
  long long da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da > db ? -1 : 1;
  return mono_lex_cmp(a, b);
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return mono_cmp(a, b) < 0;
  }
};

using Poly = std::map<Monomial, Rational, MonoLess>;

struct ExprData {
  Poly num;
  Poly den;
};

inline int poly_cmp(const Poly& a, const Poly& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    int c = mono_cmp(ia->first, ib->first);
    if (c != 0) return c;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

inline int data_cmp(const ExprData& a, const ExprData& b) {
  int c = poly_cmp(a.num, b.num);
  if (c != 0) return c;
  return poly_cmp(a.den, b.den);
}

inline int atom_cmp(const Atom& a, const Atom& b) {
  int ra = atom_rank(a.kind), rb = atom_rank(b.kind);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) {
    if (a.name != b.name) return a.name < b.name ? -1 : 1;
    if (a.kind != b.kind)
      return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
    switch (a.kind) {
      case AtomKind::Var:
        return 0;
      case AtomKind::Jet:
        if (a.order != b.order) return a.order < b.order ? -1 : 1;
        return 0;
      case AtomKind::Fn: {
        if (a.args != b.args) return a.args < b.args ? -1 : 1;
        if (a.derivs != b.derivs) return a.derivs < b.derivs ? -1 : 1;
        return 0;
      }
      case AtomKind::AlgConst: {
        if (!a.rel || !b.rel) return a.rel ? 1 : (b.rel ? -1 : 0);
        int c = data_cmp(*a.rel->p, *b.rel->p);
        if (c != 0) return c;
        return data_cmp(*a.rel->q, *b.rel->q);
      }
      default:
        return 0;
    }
  }
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  int c = data_cmp(*a.arg, *b.arg);
  if (c != 0) return c;
  if (a.kind == AtomKind::Pow) {
    if (a.pexp.sym != b.pexp.sym) return a.pexp.sym < b.pexp.sym ? -1 : 1;
    if (a.pexp.coeff != b.pexp.coeff)
      return a.pexp.coeff < b.pexp.coeff ? -1 : 1;
    if (a.pexp.offset != b.pexp.offset)
      return a.pexp.offset < b.pexp.offset ? -1 : 1;
  }
  return 0;
}

inline bool atom_eq(const Atom& a, const Atom& b) { return atom_cmp(a, b) == 0; }

class Expr {
 public:
  Expr() : d_(zero_data()) {}
  explicit Expr(ExprDataPtr d) : d_(std::move(d)) {}

  const ExprData& data() const { return *d_; }
  const ExprDataPtr& ptr() const { return d_; }
  const Poly& num() const { return d_->num; }
  const Poly& den() const { return d_->den; }

  bool is_zero() const { return d_->num.empty(); }
  bool is_polynomial() const {
    return d_->den.size() == 1 && d_->den.begin()->first.empty();
  }
  bool is_rational() const {
    return is_polynomial() &&
           (d_->num.empty() ||
            (d_->num.size() == 1 && d_->num.begin()->first.empty()));
  }
  Rational as_rational() const {
    if (!is_rational()) throw ExprError("expression is not a rational constant");
    return d_->num.empty() ? Rational(0) : d_->num.begin()->second;
  }
  bool is_one() const { return is_rational() && as_rational() == 1; }

  static Expr from_rational(const Rational& r);
  static Expr from_int(long long v) { return from_rational(Rational(v)); }
  static Expr var(const std::string& name);
  static Expr jet(const std::string& dep, int order);
  static Expr fn(const std::string& name, std::vector<std::string> args);
  static Expr fn_partial(const std::string& name, std::vector<std::string> args,
                         std::vector<int> derivs);
  static Expr from_atom(const Atom& a);
  // Normalizing constructor from a raw fraction of polynomials.
  static Expr make(Poly num, Poly den);

  static ExprDataPtr zero_data() {
    static const ExprDataPtr z = [] {
      auto d = std::make_shared<ExprData>();
      d->den[Monomial{}] = 1;
      return d;
    }();
    return z;
  }

 private:
  ExprDataPtr d_;
};

inline bool operator==(const Expr& a, const Expr& b) {
  return data_cmp(a.data(), b.data()) == 0;
}
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
inline int expr_cmp(const Expr& a, const Expr& b) {
  return data_cmp(a.data(), b.data());
}

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }
inline Expr& operator/=(Expr& a, const Expr& b) { return a = a / b; }
inline Expr operator*(const Expr& a, long long v) {
  return a * Expr::from_int(v);
}
inline Expr operator*(long long v, const Expr& a) {
  return Expr::from_int(v) * a;
}
inline Expr operator/(const Expr& a, long long v) {
  return a / Expr::from_int(v);
}

Expr pow_int(const Expr& base, long long k);
Expr sqrt_of(const Expr& u);
Expr exp_of(const Expr& u);
Expr pow_sym(const Expr& base, const SymExp& e);
Expr algebraic_const(const std::string& name, const Expr& p, const Expr& q);

// ---------------------------------------------------------------------------
// Atom factories.

inline Atom make_var_atom(const std::string& name) {
  Atom a;
  a.kind = AtomKind::Var;
  a.name = name;
  return a;
}

inline Atom make_jet_atom(const std::string& dep, int order) {
  if (order < 1) throw ExprError("jet atom requires order >= 1");
  Atom a;
  a.kind = AtomKind::Jet;
  a.name = dep;
  a.order = order;
  return a;
}

inline Atom make_fn_atom(const std::string& name, std::vector<std::string> args,
                         std::vector<int> derivs) {
  if (derivs.empty()) derivs.assign(args.size(), 0);
  if (args.empty() || args.size() != derivs.size())
    throw ExprError("function atom requires matching argument/derivative lists");
  Atom a;
  a.kind = AtomKind::Fn;
  a.name = name;
  a.args = std::move(args);
  a.derivs = std::move(derivs);
  return a;
}

inline Atom make_sqrt_atom(ExprDataPtr arg) {
  Atom a;
  a.kind = AtomKind::Sqrt;
  a.arg = std::move(arg);
  return a;
}

inline Atom make_exp_atom(ExprDataPtr arg) {
  Atom a;
  a.kind = AtomKind::Exp;
  a.arg = std::move(arg);
  return a;
}

inline Atom make_pow_atom(ExprDataPtr base, SymExp e) {
  if (e.coeff == 0) throw ExprError("pow atom requires a symbolic exponent");
  Atom a;
  a.kind = AtomKind::Pow;
  a.arg = std::move(base);
  a.pexp = std::move(e);
  return a;
}

inline Atom make_alg_atom(const std::string& name,
                          std::shared_ptr<const AlgRelation> rel) {
  Atom a;
  a.kind = AtomKind::AlgConst;
  a.name = name;
  a.rel = std::move(rel);
  return a;
}

// ---------------------------------------------------------------------------
// Polynomial helpers.

inline bool atom_is_composite(const Atom& a) {
  return atom_rank(a.kind) > 0 || a.kind == AtomKind::AlgConst;
}

// True when the monomial violates the exponent-1 invariant for composite
// atoms or contains mergeable exp/pow pairs, i.e. needs the rewrite path.
inline bool mono_needs_rewrite(const Monomial& m) {
  int exp_atoms = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    const auto& [a, k] = m[i];
    if (k <= 0) throw ExprError("monomial with nonpositive exponent");
    if (atom_is_composite(a) && k >= 2) return true;
    if (a.kind == AtomKind::Exp && ++exp_atoms >= 2) return true;
    if (a.kind == AtomKind::Pow) {
      for (size_t j = i + 1; j < m.size(); ++j) {
        const Atom& b = m[j].first;
        if (b.kind == AtomKind::Pow && b.pexp.sym == a.pexp.sym &&
            data_cmp(*a.arg, *b.arg) == 0)
          return true;
      }
    }
  }
  return false;
}

inline void poly_add_term(Poly& p, Monomial m, const Rational& c) {
  if (c == 0) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) poly_add_term(r, m, c);
  return r;
}

inline Poly poly_neg(const Poly& a) {
  Poly r;
  for (const auto& [m, c] : a) r.emplace(m, -c);
  return r;
}

inline Poly poly_scale(const Poly& a, const Rational& c) {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m, k] : a) r.emplace(m, k * c);
  return r;
}

inline Monomial mono_merge(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = atom_cmp(a[i].first, b[j].first);
    if (c < 0) {
      r.push_back(a[i++]);
    } else if (c > 0) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) r.push_back(a[i]);
  for (; j < b.size(); ++j) r.push_back(b[j]);
  return r;
}

Expr reduce_monomial(const Monomial& m, const Rational& c);

// Product of polynomials. Returns an Expr because rewrites triggered by
// composite atoms may introduce denominators or expand into sums.
inline Expr poly_mul(const Poly& a, const Poly& b) {
  Poly plain;
  Expr slow;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = mono_merge(ma, mb);
      if (mono_needs_rewrite(m)) {
        slow += reduce_monomial(m, ca * cb);
      } else {
        poly_add_term(plain, std::move(m), ca * cb);
      }
    }
  }
  Poly one;
  one[Monomial{}] = 1;
  Expr fast = Expr::make(std::move(plain), std::move(one));
  return slow.is_zero() ? fast : fast + slow;
}

// c^k for an algebraic constant with relation c^2 = p*c + q, linearized as
// A*c + B by iterating the relation.
inline Expr alg_const_pow(const Atom& a, int k) {
  Expr c = Expr::from_atom(make_alg_atom(a.name, a.rel));
  if (k <= 0) throw ExprError("algebraic power must be positive");
  if (k == 1) return c;
  Expr p(a.rel->p), q(a.rel->q);
  Expr A = Expr::from_int(1), B;
  for (int j = 1; j < k; ++j) {
    Expr A2 = A * p + B;
    B = A * q;
    A = A2;
  }
  return A * c + B;
}

// Rewrites a raw merged monomial into canonical form; may expand.
inline Expr reduce_monomial(const Monomial& m, const Rational& c) {
  Expr acc = Expr::from_rational(c);
  Monomial tail;
  Expr exp_arg;
  bool any_exp = false;
  struct PowGroup {
    ExprDataPtr base;
    std::string sym;
    long long coeff = 0;
    long long offset = 0;
  };
  std::vector<PowGroup> pows;
  for (const auto& [a, k] : m) {
    switch (a.kind) {
      case AtomKind::Var:
      case AtomKind::Jet:
      case AtomKind::Fn:
        tail.emplace_back(a, k);
        break;
      case AtomKind::Sqrt: {
        if (k >= 2) acc *= pow_int(Expr(a.arg), k / 2);
        if (k % 2) tail.emplace_back(a, 1);
        break;
      }
      case AtomKind::Exp: {
        any_exp = true;
        exp_arg += Expr(a.arg) * k;
        break;
      }
      case AtomKind::AlgConst: {
        if (k == 1) {
          tail.emplace_back(a, 1);
        } else {
          acc *= alg_const_pow(a, k);
        }
        break;
      }
      case AtomKind::Pow: {
        bool merged = false;
        for (auto& g : pows) {
          if (g.sym == a.pexp.sym && data_cmp(*g.base, *a.arg) == 0) {
            g.coeff += a.pexp.coeff * k;
            g.offset += a.pexp.offset * k;
            merged = true;
            break;
          }
        }
        if (!merged)
          pows.push_back({a.arg, a.pexp.sym, a.pexp.coeff * k,
                          a.pexp.offset * k});
        break;
      }
    }
  }
  for (const auto& g : pows) {
    if (g.coeff == 0) {
      acc *= pow_int(Expr(g.base), g.offset);
    } else {
      tail.emplace_back(
          make_pow_atom(g.base, SymExp{g.sym, g.coeff, g.offset}), 1);
    }
  }
  if (any_exp && !exp_arg.is_zero())
    tail.emplace_back(make_exp_atom(exp_arg.ptr()), 1);
  std::sort(tail.begin(), tail.end(), [](const auto& x, const auto& y) {
    return atom_cmp(x.first, y.first) < 0;
  });
  if (!tail.empty()) {
    Poly p;
    p.emplace(std::move(tail), Rational(1));
    Poly one;
    one[Monomial{}] = 1;
    acc *= Expr::make(std::move(p), std::move(one));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Normalizing constructor.

namespace detail {

// Multiplicative inverse of a composite atom, used to rationalize single
// monomial denominators.
inline Expr atom_inverse(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Sqrt:
      return Expr::from_atom(a) / Expr(a.arg);
    case AtomKind::Exp:
      return exp_of(-Expr(a.arg));
    case AtomKind::Pow:
      return pow_sym(Expr(a.arg),
                     SymExp{a.pexp.sym, -a.pexp.coeff, -a.pexp.offset});
    case AtomKind::AlgConst: {
      Expr q(a.rel->q);
      if (q.is_zero())
        throw ExprError("algebraic constant with q = 0 is not invertible");
      return (Expr::from_atom(a) - Expr(a.rel->p)) / q;
    }
    default:
      throw ExprError("atom_inverse on a plain atom");
  }
}

inline Expr make_canonical(Poly num, Poly den) {
  if (den.empty()) throw ExprError("division by zero");
  if (num.empty()) return Expr();

  // Rationalize a single-monomial denominator containing composite atoms.
  if (den.size() == 1) {
    const Monomial& dm = den.begin()->first;
    bool has_composite = false;
    for (const auto& [a, k] : dm)
      if (atom_is_composite(a)) has_composite = true;
    if (has_composite) {
      Monomial plain_part;
      Expr inv = Expr::from_int(1);
      for (const auto& [a, k] : dm) {
        if (atom_is_composite(a)) {
          for (int i = 0; i < k; ++i) inv *= atom_inverse(a);
        } else {
          plain_part.emplace_back(a, k);
        }
      }
      Rational dc = den.begin()->second;
      Poly rest;
      rest.emplace(std::move(plain_part), dc);
      Poly one1, one2;
      one1[Monomial{}] = 1;
      one2[Monomial{}] = 1;
      return Expr::make(std::move(num), std::move(one1)) * inv /
             Expr::make(std::move(rest), std::move(one2));
    }
  }

  // Scale so the denominator is monic w.r.t. the monomial order.
  Rational lead = den.begin()->second;
  if (lead != 1) {
    for (auto& [m, c] : den) c /= lead;
    for (auto& [m, c] : num) c /= lead;
  }

  // Cancel atom content shared by every monomial on both sides.
  if (!den.begin()->first.empty()) {
    std::vector<std::pair<Atom, int>> shared;
    for (const auto& [a, k] : den.begin()->first) {
      int mn = k;
      for (const auto& [m, c] : den) {
        int e = 0;
        for (const auto& [b, j] : m)
          if (atom_eq(a, b)) e = j;
        mn = std::min(mn, e);
        if (mn == 0) break;
      }
      if (mn == 0) continue;
      for (const auto& [m, c] : num) {
        int e = 0;
        for (const auto& [b, j] : m)
          if (atom_eq(a, b)) e = j;
        mn = std::min(mn, e);
        if (mn == 0) break;
      }
      if (mn > 0) shared.emplace_back(a, mn);
    }
    if (!shared.empty()) {
      auto strip = [&](const Poly& p) {
        Poly r;
        for (const auto& [m, c] : p) {
          Monomial nm;
          nm.reserve(m.size());
          for (const auto& [a, k] : m) {
            int drop = 0;
            for (const auto& [sa, sk] : shared)
              if (atom_eq(a, sa)) drop = sk;
            if (k - drop > 0) nm.emplace_back(a, k - drop);
          }
          r.emplace(std::move(nm), c);
        }
        return r;
      };
      num = strip(num);
      den = strip(den);
    }
  }

  // Proportional num/den collapses to a constant.
  if (num.size() == den.size()) {
    bool proportional = true;
    Rational ratio;
    auto in = num.begin();
    auto id = den.begin();
    bool first = true;
    for (; in != num.end(); ++in, ++id) {
      if (mono_cmp(in->first, id->first) != 0) {
        proportional = false;
        break;
      }
      Rational r = in->second / id->second;
      if (first) {
        ratio = r;
        first = false;
      } else if (r != ratio) {
        proportional = false;
        break;
      }
    }
    if (proportional) {
      auto d = std::make_shared<ExprData>();
      d->num[Monomial{}] = ratio;
      d->den[Monomial{}] = 1;
      return Expr(ExprDataPtr(std::move(d)));
    }
  }

  auto d = std::make_shared<ExprData>();
  d->num = std::move(num);
  d->den = std::move(den);
  return Expr(ExprDataPtr(std::move(d)));
}

}  // namespace detail

inline Expr Expr::make(Poly num, Poly den) {
  bool rewrite = false;
  for (const auto& [m, c] : num)
    if (mono_needs_rewrite(m)) rewrite = true;
  for (const auto& [m, c] : den)
    if (mono_needs_rewrite(m)) rewrite = true;
  if (!rewrite) return detail::make_canonical(std::move(num), std::move(den));
  auto rebuild = [](const Poly& p) {
    Poly plain;
    Expr slow;
    for (const auto& [m, c] : p) {
      if (mono_needs_rewrite(m)) {
        slow += reduce_monomial(m, c);
      } else {
        poly_add_term(plain, m, c);
      }
    }
    Poly one;
    one[Monomial{}] = 1;
    return detail::make_canonical(std::move(plain), std::move(one)) + slow;
  };
  Expr n = rebuild(num);
  Expr d = rebuild(den);
  return n / d;
}

// ---------------------------------------------------------------------------
// Expression factories.

inline Expr Expr::from_rational(const Rational& r) {
  Poly num, den;
  if (r != 0) num[Monomial{}] = r;
  den[Monomial{}] = 1;
  return detail::make_canonical(std::move(num), std::move(den));
}

inline Expr Expr::from_atom(const Atom& a) {
  Poly num, den;
  num[Monomial{{a, 1}}] = 1;
  den[Monomial{}] = 1;
  return Expr::make(std::move(num), std::move(den));
}

inline Expr Expr::var(const std::string& name) {
  return from_atom(make_var_atom(name));
}

inline Expr Expr::jet(const std::string& dep, int order) {
  if (order == 0) return var(dep);
  return from_atom(make_jet_atom(dep, order));
}

inline Expr Expr::fn(const std::string& name, std::vector<std::string> args) {
  return from_atom(make_fn_atom(name, std::move(args), {}));
}

inline Expr Expr::fn_partial(const std::string& name,
                             std::vector<std::string> args,
                             std::vector<int> derivs) {
  return from_atom(make_fn_atom(name, std::move(args), std::move(derivs)));
}

// ---------------------------------------------------------------------------
// Arithmetic.

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (poly_cmp(a.den(), b.den()) == 0)
    return detail::make_canonical(poly_add(a.num(), b.num()), a.den());
  Expr n1 = poly_mul(a.num(), b.den());
  Expr n2 = poly_mul(b.num(), a.den());
  Expr d = poly_mul(a.den(), b.den());
  if (n1.is_polynomial() && n2.is_polynomial() && d.is_polynomial())
    return detail::make_canonical(poly_add(n1.num(), n2.num()), d.num());
  return (n1 + n2) / d;
}

inline Expr operator-(const Expr& a) {
  if (a.is_zero()) return a;
  return detail::make_canonical(poly_neg(a.num()), a.den());
}

inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  Expr n = poly_mul(a.num(), b.num());
  Expr d = poly_mul(a.den(), b.den());
  if (n.is_polynomial() && d.is_polynomial())
    return detail::make_canonical(n.num(), d.num());
  return n / d;
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw ExprError("division by zero");
  if (a.is_zero()) return Expr();
  Expr binv = Expr::make(b.den(), b.num());
  return a * binv;
}

inline Expr pow_int(const Expr& base, long long k) {
  if (k == 0) return Expr::from_int(1);
  if (k < 0) return pow_int(Expr::from_int(1) / base, -k);
  Expr r = Expr::from_int(1);
  Expr b = base;
  long long e = k;
  while (e > 0) {
    if (e & 1) r *= b;
    b = (e >>= 1) > 0 ? b * b : b;
  }
  return r;
}

inline Expr sqrt_of(const Expr& u) {
  if (u.is_zero()) return Expr();
  if (u.is_rational()) {
    auto [s, f] = square_part(u.as_rational());
    Expr root = Expr::from_rational(s);
    if (f == 1) return root;
    return root * Expr::from_atom(make_sqrt_atom(Expr::from_rational(f).ptr()));
  }
  // Pull the square part of the rational content out of the radical.
  Rational content = 0;
  for (const auto& [m, c] : u.num()) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (content == 0) {
      content = a;
    } else {
      content = Rational(boost::multiprecision::gcd(rat_num(content) * rat_den(a),
                                                    rat_num(a) * rat_den(content)),
                         rat_den(content) * rat_den(a));
    }
  }
  Expr inner = u;
  Expr outer = Expr::from_int(1);
  if (content != 0 && content != 1) {
    auto [s, f] = square_part(content);
    if (s != 1) {
      inner = u / Expr::from_rational(s * s);
      outer = Expr::from_rational(s);
    }
  }
  return outer * Expr::from_atom(make_sqrt_atom(inner.ptr()));
}

inline Expr exp_of(const Expr& u) {
  if (u.is_zero()) return Expr::from_int(1);
  return Expr::from_atom(make_exp_atom(u.ptr()));
}

inline Expr pow_sym(const Expr& base, const SymExp& e) {
  if (e.coeff == 0) return pow_int(base, e.offset);
  if (base.is_zero()) return Expr();
  if (base.is_one()) return Expr::from_int(1);
  return Expr::from_atom(make_pow_atom(base.ptr(), e));
}

inline Expr algebraic_const(const std::string& name, const Expr& p,
                            const Expr& q) {
  if (!p.is_polynomial() || !q.is_polynomial())
    throw ExprError("algebraic relation coefficients must be polynomial");
  auto rel = std::make_shared<AlgRelation>(AlgRelation{p.ptr(), q.ptr()});
  return Expr::from_atom(make_alg_atom(name, std::move(rel)));
}

// Dispatch on an exponent expression: either an exact integer or a linear
// polynomial coeff*sym + offset in a single variable.
inline Expr pow_expr(const Expr& base, const Expr& exponent) {
  if (exponent.is_rational()) {
    Rational r = exponent.as_rational();
    if (!is_integral(r)) throw ExprError("fractional exponents are not supported");
    Integer n = rat_num(r);
    return pow_int(base, static_cast<long long>(n));
  }
  if (!exponent.is_polynomial())
    throw ExprError("exponent must be an integer or linear in one symbol");
  SymExp se;
  se.coeff = 0;
  se.offset = 0;
  for (const auto& [m, c] : exponent.num()) {
    if (m.empty()) {
      if (!is_integral(c)) throw ExprError("exponent offset must be an integer");
      se.offset = static_cast<long long>(rat_num(c));
    } else if (m.size() == 1 && m[0].first.kind == AtomKind::Var &&
               m[0].second == 1 && se.coeff == 0) {
      if (!is_integral(c))
        throw ExprError("exponent coefficient must be an integer");
      se.sym = m[0].first.name;
      se.coeff = static_cast<long long>(rat_num(c));
    } else {
      throw ExprError("exponent must be an integer or linear in one symbol");
    }
  }
  if (se.coeff == 0) return pow_int(base, se.offset);
  return pow_sym(base, se);
}

// ---------------------------------------------------------------------------
// Structure queries.

inline void for_each_atom(const ExprData& d,
                          const std::function<void(const Atom&)>& fn,
                          bool deep = true) {
  auto scan_poly = [&](const Poly& p, auto&& self) -> void {
    for (const auto& [m, c] : p) {
      for (const auto& [a, k] : m) {
        fn(a);
        if (!deep) continue;
        if (a.arg) {
          self(a.arg->num, self);
          self(a.arg->den, self);
        }
        if (a.rel) {
          self(a.rel->p->num, self);
          self(a.rel->p->den, self);
          self(a.rel->q->num, self);
          self(a.rel->q->den, self);
        }
      }
    }
  };
  scan_poly(d.num, scan_poly);
  scan_poly(d.den, scan_poly);
}

inline bool any_atom(const Expr& e, const std::function<bool(const Atom&)>& pred,
                     bool deep = true) {
  bool found = false;
  for_each_atom(e.data(), [&](const Atom& a) { found = found || pred(a); }, deep);
  return found;
}

// True when the atom is a coordinate of the base space spanned by `names`:
// a variable or jet named there, or an opaque function with an argument there.
inline bool atom_touches(const Atom& a, const std::set<std::string>& names) {
  switch (a.kind) {
    case AtomKind::Var:
    case AtomKind::Jet:
      return names.count(a.name) > 0;
    case AtomKind::Fn:
      for (const auto& arg : a.args)
        if (names.count(arg)) return true;
      return false;
    default:
      return false;
  }
}

inline bool depends_on(const Expr& e, const std::set<std::string>& names) {
  return any_atom(e, [&](const Atom& a) { return atom_touches(a, names); });
}

inline int max_jet_order(const Expr& e, const std::string& dep) {
  int mx = -1;
  for_each_atom(e.data(), [&](const Atom& a) {
    if (a.kind == AtomKind::Jet && a.name == dep) mx = std::max(mx, a.order);
    if (a.kind == AtomKind::Var && a.name == dep) mx = std::max(mx, 0);
  });
  return mx;
}

// ---------------------------------------------------------------------------
// Differentiation. `v` must be a Var or Jet atom.

Expr diff(const Expr& e, const Atom& v);

inline Expr atom_diff(const Atom& a, const Atom& v) {
  switch (a.kind) {
    case AtomKind::Var:
    case AtomKind::Jet:
      return atom_eq(a, v) ? Expr::from_int(1) : Expr();
    case AtomKind::Fn: {
      if (v.kind != AtomKind::Var) return Expr();
      for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i] == v.name) {
          Atom d = a;
          d.derivs[i] += 1;
          return Expr::from_atom(d);
        }
      }
      return Expr();
    }
    case AtomKind::AlgConst:
      return Expr();
    case AtomKind::Sqrt: {
      Expr du = diff(Expr(a.arg), v);
      if (du.is_zero()) return du;
      return du * Expr::from_atom(a) / (Expr(a.arg) * 2);
    }
    case AtomKind::Exp: {
      Expr du = diff(Expr(a.arg), v);
      if (du.is_zero()) return du;
      return du * Expr::from_atom(a);
    }
    case AtomKind::Pow: {
      Expr db = diff(Expr(a.arg), v);
      if (db.is_zero()) return db;
      Expr e = Expr::var(a.pexp.sym) * a.pexp.coeff +
               Expr::from_int(a.pexp.offset);
      Expr lower = pow_sym(Expr(a.arg),
                           SymExp{a.pexp.sym, a.pexp.coeff, a.pexp.offset - 1});
      return e * lower * db;
    }
  }
  return Expr();
}

inline Expr poly_diff(const Poly& p, const Atom& v) {
  Expr acc;
  for (const auto& [m, c] : p) {
    for (size_t i = 0; i < m.size(); ++i) {
      Expr da = atom_diff(m[i].first, v);
      if (da.is_zero()) continue;
      Monomial rest;
      rest.reserve(m.size());
      for (size_t j = 0; j < m.size(); ++j) {
        int k = m[j].second - (j == i ? 1 : 0);
        if (k > 0) rest.emplace_back(m[j].first, k);
      }
      Poly rp;
      rp.emplace(std::move(rest), c * m[i].second);
      Poly one;
      one[Monomial{}] = 1;
      acc += Expr::make(std::move(rp), std::move(one)) * da;
    }
  }
  return acc;
}

inline Expr diff(const Expr& e, const Atom& v) {
  if (v.kind != AtomKind::Var && v.kind != AtomKind::Jet)
    throw ExprError("can only differentiate by a variable or jet atom");
  Expr dn = poly_diff(e.num(), v);
  if (e.is_polynomial()) return dn;
  Expr dd = poly_diff(e.den(), v);
  Poly one;
  one[Monomial{}] = 1;
  Expr num(std::make_shared<ExprData>(ExprData{e.num(), one}));
  Expr den(std::make_shared<ExprData>(ExprData{e.den(), one}));
  return (dn * den - num * dd) / (den * den);
}

inline Expr diff_var(const Expr& e, const std::string& name) {
  return diff(e, make_var_atom(name));
}

inline Expr diff_jet(const Expr& e, const std::string& dep, int order) {
  if (order == 0) return diff_var(e, dep);
  return diff(e, make_jet_atom(dep, order));
}

// ---------------------------------------------------------------------------
// Substitution.

struct Bindings {
  std::map<std::string, Expr> var;
  std::map<std::pair<std::string, int>, Expr> jet;
  std::map<std::string, Expr> fn;

  Bindings& bind_var(const std::string& n, Expr v) {
    var.emplace(n, std::move(v));
    return *this;
  }
  Bindings& bind_jet(const std::string& dep, int order, Expr v) {
    jet.emplace(std::make_pair(dep, order), std::move(v));
    return *this;
  }
  Bindings& bind_fn(const std::string& n, Expr v) {
    fn.emplace(n, std::move(v));
    return *this;
  }
  bool empty() const { return var.empty() && jet.empty() && fn.empty(); }
};

Expr substitute(const Expr& e, const Bindings& b);

inline Expr subst_atom(const Atom& a, const Bindings& b) {
  switch (a.kind) {
    case AtomKind::Var: {
      auto it = b.var.find(a.name);
      return it != b.var.end() ? it->second : Expr::from_atom(a);
    }
    case AtomKind::Jet: {
      auto it = b.jet.find(std::make_pair(a.name, a.order));
      return it != b.jet.end() ? it->second : Expr::from_atom(a);
    }
    case AtomKind::Fn: {
      auto it = b.fn.find(a.name);
      if (it == b.fn.end()) {
        for (const auto& arg : a.args)
          if (b.var.count(arg))
            throw ExprError("cannot substitute an argument of the opaque function " +
                            a.name);
        return Expr::from_atom(a);
      }
      Expr r = it->second;
      for (size_t i = 0; i < a.args.size(); ++i)
        for (int k = 0; k < a.derivs[i]; ++k) r = diff_var(r, a.args[i]);
      return r;
    }
    case AtomKind::AlgConst: {
      auto it = b.var.find(a.name);
      if (it != b.var.end()) return it->second;
      Expr p = substitute(Expr(a.rel->p), b);
      Expr q = substitute(Expr(a.rel->q), b);
      return algebraic_const(a.name, p, q);
    }
    case AtomKind::Sqrt:
      return sqrt_of(substitute(Expr(a.arg), b));
    case AtomKind::Exp:
      return exp_of(substitute(Expr(a.arg), b));
    case AtomKind::Pow: {
      Expr base = substitute(Expr(a.arg), b);
      auto it = b.var.find(a.pexp.sym);
      if (it != b.var.end()) {
        if (!it->second.is_rational() || !is_integral(it->second.as_rational()))
          throw ExprError("symbolic exponent must instantiate to an integer");
        long long v = static_cast<long long>(rat_num(it->second.as_rational()));
        return pow_int(base, a.pexp.coeff * v + a.pexp.offset);
      }
      return pow_sym(base, a.pexp);
    }
  }
  return Expr::from_atom(a);
}

inline Expr substitute(const Expr& e, const Bindings& b) {
  if (b.empty()) return e;
  auto subst_poly = [&](const Poly& p) {
    Expr acc;
    for (const auto& [m, c] : p) {
      Expr term = Expr::from_rational(c);
      for (const auto& [a, k] : m) term *= pow_int(subst_atom(a, b), k);
      acc += term;
    }
    return acc;
  };
  Expr n = subst_poly(e.num());
  Expr d = subst_poly(e.den());
  return n / d;
}

// ---------------------------------------------------------------------------
// Collection by a subset of atoms.

// Splits the numerator by the sub-monomial of atoms matching `pred`; the
// denominator and all non-matching factors go into the coefficient. The
// denominator must not involve matching atoms (deep check).
inline std::vector<std::pair<Monomial, Expr>> collect(
    const Expr& e, const std::function<bool(const Atom&)>& pred) {
  Poly one;
  one[Monomial{}] = 1;
  Expr den(std::make_shared<ExprData>(ExprData{e.den(), one}));
  if (any_atom(den, pred))
    throw ExprError("collect: denominator depends on the collected atoms");
  std::map<Monomial, Poly, MonoLess> groups;
  for (const auto& [m, c] : e.num()) {
    Monomial key, rest;
    for (const auto& [a, k] : m) {
      if (pred(a)) {
        key.emplace_back(a, k);
      } else {
        if (a.arg) {
          Expr sub(a.arg);
          if (any_atom(sub, pred))
            throw ExprError("collect: matched atom nested inside a composite atom");
        }
        rest.emplace_back(a, k);
      }
    }
    poly_add_term(groups[key], std::move(rest), c);
  }
  std::vector<std::pair<Monomial, Expr>> out;
  out.reserve(groups.size());
  for (auto& [key, poly] : groups) {
    Expr coeff = Expr::make(std::move(poly), e.den());
    if (!coeff.is_zero()) out.emplace_back(key, std::move(coeff));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formatting. Output re-parses to the same canonical form.

struct FormatOptions {
  bool fn_args = true;  // print argument lists on opaque-function atoms
};

std::string format(const Expr& e, const FormatOptions& opts = {});

inline std::string format_atom(const Atom& a, const FormatOptions& opts) {
  std::ostringstream os;
  switch (a.kind) {
    case AtomKind::Var:
      os << a.name;
      break;
    case AtomKind::Jet:
      if (a.order <= 4) {
        os << a.name;
        for (int i = 0; i < a.order; ++i) os << '\'';
      } else {
        os << "D(" << a.name << ",x," << a.order << ")";
      }
      break;
    case AtomKind::Fn: {
      os << a.name;
      bool any = false;
      for (int d : a.derivs) any = any || d > 0;
      if (any) {
        os << "_{,";
        for (size_t i = 0; i < a.args.size(); ++i)
          for (int k = 0; k < a.derivs[i]; ++k) os << a.args[i];
        os << "}";
      }
      if (opts.fn_args) {
        os << "(";
        for (size_t i = 0; i < a.args.size(); ++i) {
          if (i) os << ",";
          os << a.args[i];
        }
        os << ")";
      }
      break;
    }
    case AtomKind::AlgConst:
      os << a.name;
      break;
    case AtomKind::Sqrt:
      os << "sqrt(" << format(Expr(a.arg), opts) << ")";
      break;
    case AtomKind::Exp:
      os << "exp(" << format(Expr(a.arg), opts) << ")";
      break;
    case AtomKind::Pow: {
      os << "(" << format(Expr(a.arg), opts) << ")^(";
      const auto& e = a.pexp;
      if (e.coeff == 1) {
        os << e.sym;
      } else if (e.coeff == -1) {
        os << "-" << e.sym;
      } else {
        os << e.coeff << "*" << e.sym;
      }
      if (e.offset > 0) os << " + " << e.offset;
      if (e.offset < 0) os << " - " << -e.offset;
      os << ")";
      break;
    }
  }
  return os.str();
}

inline std::string format_poly(const Poly& p, const FormatOptions& opts) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    bool coeff_one = (a == 1) && !m.empty();
    std::ostringstream term;
    bool need_star = false;
    if (!coeff_one) {
      if (is_integral(a)) {
        term << rat_str(a);
      } else {
        term << "(" << rat_str(a) << ")";
      }
      need_star = true;
    }
    for (const auto& [atom, k] : m) {
      if (need_star) term << "*";
      term << format_atom(atom, opts);
      if (k > 1) term << "^" << k;
      need_star = true;
    }
    os << term.str();
  }
  return os.str();
}

inline std::string format(const Expr& e, const FormatOptions& opts) {
  if (e.is_polynomial()) return format_poly(e.num(), opts);
  return "(" + format_poly(e.num(), opts) + ")/(" + format_poly(e.den(), opts) +
         ")";
}

}  // namespace liejet
