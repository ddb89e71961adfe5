#pragma once
// Determining PDEs for point symmetries of systems polynomial in their
// first-order jets.
//
// With opaque coefficients xi(x,y,z), eta_i(x,y,z) the on-shell symmetry
// residuals are polynomial in the first-order jets; since the unknowns do not
// depend on jets, each jet-monomial coefficient must vanish separately.  The
// module extracts that coefficient system, matches it against a labelled
// reference list, specializes it with a solved ansatz for the subsystem that
// has a closed-form general solution, and reduces the remainder to ODE
// constraints in the independent variable.

#include <liejet/io.hpp>
#include <liejet/ode.hpp>

#include <algorithm>
#include <optional>
#include <sstream>

namespace liejet {

// One coefficient equation: the factor of prod_i dep_i'^(power_i) in the
// residual of equation eq_index.
struct DeterminingEquation {
  std::vector<std::pair<std::string, int>> monomial;  // (dep, power), power>0
  int eq_index = 0;                                   // 0-based
  Expr residual;
};

struct DeterminingSystem {
  OdeSystem sys;
  std::vector<std::string> unknowns;  // xi then one per dependent
  std::vector<DeterminingEquation> equations;
};

inline std::string monomial_text(
    const std::vector<std::pair<std::string, int>>& mono,
    const char* prime = "'") {
  if (mono.empty()) return "1";
  std::string out;
  for (const auto& [dep, p] : mono) {
    if (!out.empty()) out += " ";
    out += dep;
    out += prime;
    if (p > 1) out += "^" + std::to_string(p);
  }
  return out;
}

inline std::string equation_key(const DeterminingEquation& eq) {
  return "coeff[" + monomial_text(eq.monomial) + "][eq_" +
         std::to_string(eq.eq_index + 1) + "]";
}

// The generic point generator with opaque coefficient functions of the base
// variables: xi(x, deps...) d/dx + sum_i eta_i(x, deps...) d/ddep_i.
inline Generator generic_generator(const OdeSystem& sys,
                                   std::vector<std::string>* names = nullptr) {
  std::vector<std::string> args{sys.indep};
  for (const auto& d : sys.deps) args.push_back(d);
  Generator g;
  std::vector<std::string> unknowns{"xi"};
  g.xi = Expr::fn("xi", args);
  for (size_t i = 0; i < sys.deps.size(); ++i) {
    std::string name = "eta" + std::to_string(i + 1);
    g.eta.push_back(Expr::fn(name, args));
    unknowns.push_back(name);
  }
  if (names) *names = unknowns;
  return g;
}

inline DeterminingSystem determining_system(const OdeSystem& sys) {
  validate(sys);
  DeterminingSystem out;
  out.sys = sys;
  Generator g = generic_generator(sys, &out.unknowns);
  std::vector<Expr> residuals = symmetry_residuals(g, sys);

  auto is_jet = [](const Atom& a) { return a.kind == AtomKind::Jet; };
  for (size_t i = 0; i < residuals.size(); ++i) {
    for (const auto& [mono, coeff] : collect(residuals[i], is_jet)) {
      DeterminingEquation eq;
      eq.eq_index = static_cast<int>(i);
      eq.residual = coeff;
      for (const auto& [atom, power] : mono) {
        if (atom.order != 1)
          throw ExprError("on-shell residual contains a jet of order " +
                          std::to_string(atom.order));
        eq.monomial.emplace_back(atom.name, power);
      }
      // collect() returns jets in canonical (degree/lex) atom order; list the
      // monomial alphabetically by dependent for stable keys.
      std::sort(eq.monomial.begin(), eq.monomial.end());
      out.equations.push_back(std::move(eq));
    }
  }
  // Listing order: total degree ascending, then within a degree the jet
  // monomials in lexicographic order with earlier dependents ranked higher
  // (y'^2 before y'z' before z'^2), then source equation.
  auto dense = [&](const std::vector<std::pair<std::string, int>>& m) {
    std::vector<int> e(sys.deps.size(), 0);
    for (const auto& [dep, p] : m) {
      auto it = std::find(sys.deps.begin(), sys.deps.end(), dep);
      e[static_cast<size_t>(it - sys.deps.begin())] = p;
    }
    return e;
  };
  std::stable_sort(out.equations.begin(), out.equations.end(),
                   [&](const DeterminingEquation& a,
                       const DeterminingEquation& b) {
                     long long da = 0, db = 0;
                     for (const auto& [_, p] : a.monomial) da += p;
                     for (const auto& [_, p] : b.monomial) db += p;
                     if (da != db) return da < db;
                     auto ea = dense(a.monomial), eb = dense(b.monomial);
                     if (ea != eb) return ea > eb;
                     return a.eq_index < b.eq_index;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// Matching a generated system against a labelled reference list.

struct MatchResult {
  std::string label;
  bool matched = false;
  // When matched: the combination sum_k coeff[k] * equations[index[k]].
  std::vector<size_t> indices;
  std::vector<Rational> coeffs;
  // When unmatched: closest generated equation and the leftover difference
  // reference - ratio * closest.
  std::optional<size_t> nearest;
  Expr difference;
};

struct MatchReport {
  std::vector<MatchResult> results;
  int matched_count = 0;
};

namespace matchdetail {

// Sparse vector of rational coefficients of an expression over its monomials.
// Expressions from a shared jet split have denominator 1, so the numerator
// polynomial itself is the vector.
inline const Poly& as_vector(const Expr& e) {
  if (!e.is_polynomial())
    throw ExprError("reference matching expects polynomial residuals");
  return e.num();
}

// Solve ref = sum_k c_k * eqs[pick[k]] exactly, by elimination over the
// union of monomials.  Returns the coefficients when solvable.
inline std::optional<std::vector<Rational>> solve_combination(
    const Poly& ref, const std::vector<const Poly*>& eqs) {
  std::vector<Monomial> rows;
  auto note = [&](const Poly& p) {
    for (const auto& [m, _] : p) rows.push_back(m);
  };
  note(ref);
  for (const Poly* p : eqs) note(*p);
  std::sort(rows.begin(), rows.end(), MonoLess{});
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const Monomial& a, const Monomial& b) {
                           return mono_cmp(a, b) == 0;
                         }),
             rows.end());

  size_t n = eqs.size();
  // Dense augmented matrix: one row per monomial, n columns plus rhs.
  std::vector<std::vector<Rational>> m(rows.size(),
                                       std::vector<Rational>(n + 1));
  auto coeff_of = [](const Poly& p, const Monomial& mono) -> Rational {
    auto it = p.find(mono);
    return it == p.end() ? Rational(0) : it->second;
  };
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < n; ++c) m[r][c] = coeff_of(*eqs[c], rows[r]);
    m[r][n] = coeff_of(ref, rows[r]);
  }

  std::vector<size_t> pivot_row;
  size_t r0 = 0;
  for (size_t c = 0; c < n && r0 < m.size(); ++c) {
    size_t pr = r0;
    while (pr < m.size() && m[pr][c] == 0) ++pr;
    if (pr == m.size()) continue;
    std::swap(m[pr], m[r0]);
    Rational inv = m[r0][c];
    for (auto& v : m[r0]) v /= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == r0 || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (size_t k = c; k <= n; ++k) m[r][k] -= f * m[r0][k];
    }
    pivot_row.push_back(c);
    ++r0;
  }
  // Rows past the pivots must be consistent.
  for (size_t r = r0; r < m.size(); ++r)
    if (m[r][n] != 0) return std::nullopt;
  std::vector<Rational> sol(n, Rational(0));
  for (size_t k = 0; k < pivot_row.size(); ++k) sol[pivot_row[k]] = m[k][n];
  return sol;
}

inline bool small_rational(const Rational& r, long long bound) {
  return abs(rat_num(r)) <= bound && rat_den(r) <= bound;
}

}  // namespace matchdetail

// For each reference equation, search for an exact rational-coefficient
// combination of at most `max_terms` generated residuals (coefficients with
// numerator and denominator bounded by 4).  Unmatched references report the
// generated equation sharing the most monomials and the leftover difference
// after removing the best single-ratio fit.
inline MatchReport match_reference(const DeterminingSystem& gen,
                                   const ReferenceEquations& ref,
                                   size_t max_terms = 3) {
  std::vector<const Poly*> vecs;
  vecs.reserve(gen.equations.size());
  for (const auto& eq : gen.equations)
    vecs.push_back(&matchdetail::as_vector(eq.residual));

  MatchReport report;
  for (const auto& [label, expr] : ref.equations) {
    MatchResult res;
    res.label = label;
    const Poly& target = matchdetail::as_vector(expr);

    size_t n = vecs.size();
    std::vector<std::vector<size_t>> subsets;
    for (size_t a = 0; a < n; ++a) subsets.push_back({a});
    if (max_terms >= 2)
      for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b) subsets.push_back({a, b});
    if (max_terms >= 3)
      for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b)
          for (size_t c = b + 1; c < n; ++c) subsets.push_back({a, b, c});

    for (const auto& pick : subsets) {
      std::vector<const Poly*> chosen;
      for (size_t k : pick) chosen.push_back(vecs[k]);
      auto sol = matchdetail::solve_combination(target, chosen);
      if (!sol) continue;
      bool ok = true;
      for (const auto& c : *sol)
        if (c == 0 || !matchdetail::small_rational(c, 4)) ok = false;
      if (!ok) continue;
      res.matched = true;
      res.indices = pick;
      res.coeffs = *sol;
      break;
    }

    if (!res.matched && n > 0) {
      // Nearest: most shared monomials; tie-break on fewer total monomials.
      size_t best = 0;
      long long best_shared = -1, best_size = 0;
      for (size_t k = 0; k < n; ++k) {
        long long shared = 0;
        for (const auto& [m, _] : *vecs[k])
          if (target.count(m)) ++shared;
        long long size = static_cast<long long>(vecs[k]->size());
        if (shared > best_shared ||
            (shared == best_shared && size < best_size)) {
          best = k;
          best_shared = shared;
          best_size = size;
        }
      }
      res.nearest = best;
      // Majority ratio among shared monomials gives the intended scaling.
      std::map<Rational, int> votes;
      for (const auto& [m, c] : *vecs[best]) {
        auto it = target.find(m);
        if (it != target.end()) ++votes[it->second / c];
      }
      Rational ratio(1);
      int most = -1;
      for (const auto& [r, v] : votes)
        if (v > most) {
          most = v;
          ratio = r;
        }
      res.difference =
          expr - Expr::from_rational(ratio) * gen.equations[best].residual;
    }
    if (res.matched) ++report.matched_count;
    report.results.push_back(std::move(res));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Solved ansatz specialization.
//
// The jet-free closure of the coefficient system forces
//   xi   = y*a1(x) + z*a2(x) + a3(x)
//   eta1 = (1/2) z^2 a2 + z*a4(x,y) + a5(x,y)
//   eta2 = (1/2) z^2 a2' + z*a4_x + a5_x + a6(y,z)
// for a two-dependent system (y, z); substituting it back eliminates one
// group of equations identically and turns the rest into constraints on the
// a_i, split here by explicit powers of the base variables.

struct AnsatzEquation {
  size_t source = 0;  // index into DeterminingSystem::equations
  std::vector<std::pair<std::string, int>> powers;  // (variable, power)
  Expr residual;
};

inline Bindings solved_ansatz_bindings(const OdeSystem& sys) {
  if (sys.deps.size() != 2)
    throw ExprError("the solved ansatz applies to two-dependent systems");
  const std::string& x = sys.indep;
  const std::string& y = sys.deps[0];
  const std::string& z = sys.deps[1];
  Expr Y = Expr::var(y), Z = Expr::var(z);
  Expr a1 = Expr::fn("a1", {x}), a2 = Expr::fn("a2", {x}),
       a3 = Expr::fn("a3", {x}), a4 = Expr::fn("a4", {x, y}),
       a5 = Expr::fn("a5", {x, y}), a6 = Expr::fn("a6", {y, z});
  Expr half_z2 = Z * Z / 2;
  Bindings b;
  b.bind_fn("xi", Y * a1 + Z * a2 + a3);
  b.bind_fn("eta1", half_z2 * a2 + Z * a4 + a5);
  b.bind_fn("eta2", half_z2 * diff_var(a2, x) + Z * diff_var(a4, x) +
                        diff_var(a5, x) + a6);
  return b;
}

inline std::vector<AnsatzEquation> apply_solved_ansatz(
    const DeterminingSystem& gen) {
  Bindings ansatz = solved_ansatz_bindings(gen.sys);
  std::set<std::string> base(gen.sys.deps.begin(), gen.sys.deps.end());
  auto is_base_var = [&](const Atom& a) {
    return a.kind == AtomKind::Var && base.count(a.name) > 0;
  };
  std::vector<AnsatzEquation> out;
  for (size_t k = 0; k < gen.equations.size(); ++k) {
    Expr reduced = substitute(gen.equations[k].residual, ansatz);
    if (reduced.is_zero()) continue;
    for (const auto& [mono, coeff] : collect(reduced, is_base_var)) {
      AnsatzEquation eq;
      eq.source = k;
      for (const auto& [atom, power] : mono)
        eq.powers.emplace_back(atom.name, power);
      std::sort(eq.powers.begin(), eq.powers.end());
      eq.residual = coeff;
      out.push_back(std::move(eq));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AnsatzEquation& a, const AnsatzEquation& b) {
                     if (a.source != b.source) return a.source < b.source;
                     long long da = 0, db = 0;
                     for (const auto& [_, p] : a.powers) da += p;
                     for (const auto& [_, p] : b.powers) db += p;
                     if (da != db) return da < db;
                     return a.powers < b.powers;
                   });
  return out;
}

// Specialize the coefficient functions of the system's right-hand sides and
// split once more: the result is a list of ODE constraints in x on the a_i.
// `coeff_values` binds the opaque functions appearing in the system (for the
// canonical two-dependent system: alpha and beta, as expressions in x).
inline std::vector<AnsatzEquation> reduce_to_x_odes(
    const DeterminingSystem& gen, const Bindings& coeff_values) {
  std::vector<AnsatzEquation> specialized = apply_solved_ansatz(gen);
  std::set<std::string> base(gen.sys.deps.begin(), gen.sys.deps.end());
  auto is_base_var = [&](const Atom& a) {
    return a.kind == AtomKind::Var && base.count(a.name) > 0;
  };
  std::vector<AnsatzEquation> out;
  for (const auto& eq : specialized) {
    Expr bound = substitute(eq.residual, coeff_values);
    if (bound.is_zero()) continue;
    // Clear any x-denominators (e.g. negative powers of x in coefficient
    // families) before re-splitting.
    Poly one;
    one[Monomial{}] = 1;
    bound = Expr::make(bound.num(), std::move(one));
    for (const auto& [mono, coeff] : collect(bound, is_base_var)) {
      AnsatzEquation row;
      row.source = eq.source;
      row.powers = eq.powers;
      for (const auto& [atom, power] : mono) {
        auto it = std::find_if(
            row.powers.begin(), row.powers.end(),
            [&](const auto& vp) { return vp.first == atom.name; });
        if (it == row.powers.end())
          row.powers.emplace_back(atom.name, power);
        else
          it->second += power;
      }
      std::sort(row.powers.begin(), row.powers.end());
      row.residual = coeff;
      out.push_back(std::move(row));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text rendering shared by the command line tool and the golden tests.

inline std::string render_determining(const DeterminingSystem& gen,
                                      const FormatOptions& opts = {false}) {
  std::ostringstream o;
  for (const auto& eq : gen.equations)
    o << equation_key(eq) << ": " << format(eq.residual, opts) << " = 0\n";
  return o.str();
}

inline std::string render_ansatz(const std::vector<AnsatzEquation>& eqs,
                                 const DeterminingSystem& gen,
                                 const FormatOptions& opts = {false}) {
  std::ostringstream o;
  for (const auto& eq : eqs)
    o << "ansatz[" << monomial_text(eq.powers, "") << "][from "
      << equation_key(gen.equations[eq.source]) << "]: "
      << format(eq.residual, opts) << " = 0\n";
  return o.str();
}

inline std::string render_match(const MatchReport& report,
                                const DeterminingSystem& gen,
                                const FormatOptions& opts = {false}) {
  std::ostringstream o;
  for (const auto& r : report.results) {
    o << r.label << ": ";
    if (r.matched) {
      o << "MATCH";
      for (size_t k = 0; k < r.indices.size(); ++k)
        o << (k ? " + " : " = ") << "(" << rat_str(r.coeffs[k]) << ")*"
          << equation_key(gen.equations[r.indices[k]]);
    } else {
      o << "NO MATCH";
      if (r.nearest)
        o << "; nearest " << equation_key(gen.equations[*r.nearest])
          << "; difference: " << format(r.difference, opts);
    }
    o << "\n";
  }
  o << "matched " << report.matched_count << " of "
    << report.results.size() << "\n";
  return o.str();
}

}  // namespace liejet
