#pragma once
// Lie-algebra operations on point-symmetry generators: commutators, exact
// span membership over the constant field, linear independence, and closure
// of a candidate basis under the bracket.
//
// "Constants" here are any expressions free of the base variables (the
// independent and dependent variables of the system): rational numbers,
// symbolic parameters, algebraic constants, and their combinations.

#include <liejet/ode.hpp>

#include <map>
#include <optional>
#include <set>

namespace liejet {

// First-order action of a generator on an expression in the base variables.
inline Expr apply_generator(const Generator& g, const Expr& e,
                            const OdeSystem& sys) {
  Expr out = g.xi * diff_var(e, sys.indep);
  for (size_t i = 0; i < sys.deps.size(); ++i)
    out += g.eta[i] * diff_var(e, sys.deps[i]);
  return out;
}

// Commutator [a, b]: component-wise a(coeffs of b) - b(coeffs of a).
inline Generator commutator(const Generator& a, const Generator& b,
                            const OdeSystem& sys) {
  if (a.eta.size() != sys.deps.size() || b.eta.size() != sys.deps.size())
    throw ExprError("generator shape does not match the system");
  Generator c;
  c.xi = apply_generator(a, b.xi, sys) - apply_generator(b, a.xi, sys);
  c.eta.reserve(sys.deps.size());
  for (size_t i = 0; i < sys.deps.size(); ++i)
    c.eta.push_back(apply_generator(a, b.eta[i], sys) -
                    apply_generator(b, a.eta[i], sys));
  return c;
}

namespace algdetail {

inline std::set<std::string> base_vars(const OdeSystem& sys) {
  std::set<std::string> base{sys.indep};
  base.insert(sys.deps.begin(), sys.deps.end());
  return base;
}

inline const Expr& slot(const Generator& g, size_t s) {
  return s == 0 ? g.xi : g.eta[s - 1];
}

}  // namespace algdetail

// Exact coordinates of g in the span of `basis` over the constant field, or
// nullopt when g is not in the span.  Coefficients are found by collecting
// every component on its base-variable structure and eliminating; the
// candidate is then confirmed by direct subtraction, so a returned vector is
// always a proven identity.
inline std::optional<std::vector<Expr>> express_in_basis(
    const Generator& g, const std::vector<Generator>& basis,
    const OdeSystem& sys) {
  std::set<std::string> base = algdetail::base_vars(sys);
  auto pred = [&](const Atom& a) {
    return atom_touches(a, base) ||
           (a.arg && depends_on(Expr(a.arg), base));
  };
  size_t n = basis.size();
  size_t nslots = 1 + sys.deps.size();

  std::vector<std::vector<Expr>> m;  // rows of n coefficients plus target
  for (size_t s = 0; s < nslots; ++s) {
    std::map<Monomial, std::vector<Expr>, MonoLess> rows;
    auto add = [&](const Expr& e, size_t col) {
      for (auto& [mono, coeff] : collect(e, pred)) {
        auto it = rows.find(mono);
        if (it == rows.end())
          it = rows.emplace(mono, std::vector<Expr>(n + 1)).first;
        it->second[col] = std::move(coeff);
      }
    };
    for (size_t k = 0; k < n; ++k) add(algdetail::slot(basis[k], s), k);
    add(algdetail::slot(g, s), n);
    for (auto& [_, row] : rows) m.push_back(std::move(row));
  }

  std::vector<Expr> sol(n, Expr());
  std::vector<std::pair<size_t, size_t>> pivots;  // (row, column)
  size_t r0 = 0;
  for (size_t c = 0; c < n && r0 < m.size(); ++c) {
    size_t pr = r0;
    while (pr < m.size() && m[pr][c].is_zero()) ++pr;
    if (pr == m.size()) continue;
    std::swap(m[pr], m[r0]);
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == r0 || m[r][c].is_zero()) continue;
      Expr f = m[r][c] / m[r0][c];
      for (size_t k = c; k <= n; ++k) m[r][k] = m[r][k] - f * m[r0][k];
    }
    pivots.emplace_back(r0, c);
    ++r0;
  }
  for (size_t r = r0; r < m.size(); ++r)
    if (!m[r][n].is_zero()) return std::nullopt;
  for (const auto& [r, c] : pivots) sol[c] = m[r][n] / m[r][c];

  for (size_t s = 0; s < nslots; ++s) {
    Expr acc = algdetail::slot(g, s);
    for (size_t k = 0; k < n; ++k)
      acc = acc - sol[k] * algdetail::slot(basis[k], s);
    if (!acc.is_zero()) return std::nullopt;
  }
  return sol;
}

// Index of a generator lying in the span of the remaining ones, or nullopt
// when the family is linearly independent over the constant field.
inline std::optional<size_t> dependent_member(
    const std::vector<Generator>& gens, const OdeSystem& sys) {
  for (size_t k = 0; k < gens.size(); ++k) {
    std::vector<Generator> rest;
    rest.reserve(gens.size() - 1);
    for (size_t j = 0; j < gens.size(); ++j)
      if (j != k) rest.push_back(gens[j]);
    if (express_in_basis(gens[k], rest, sys)) return k;
  }
  return std::nullopt;
}

struct ClosureReport {
  bool closed = true;
  // Coordinates of [gens[i], gens[j]] for each i < j, in listing order; only
  // filled while every bracket stays inside the span.
  std::vector<std::tuple<size_t, size_t, std::vector<Expr>>> structure;
  // First bracket that left the span, when not closed.
  std::optional<std::pair<size_t, size_t>> counterexample;
};

// Checks every pairwise bracket for membership in the span of the family.
inline ClosureReport closure_check(const std::vector<Generator>& gens,
                                   const OdeSystem& sys) {
  ClosureReport report;
  for (size_t i = 0; i < gens.size() && report.closed; ++i) {
    for (size_t j = i + 1; j < gens.size(); ++j) {
      Generator br = commutator(gens[i], gens[j], sys);
      auto coords = express_in_basis(br, gens, sys);
      if (!coords) {
        report.closed = false;
        report.counterexample = {i, j};
        break;
      }
      report.structure.emplace_back(i, j, std::move(*coords));
    }
  }
  return report;
}

// One line of a structure-constant table: "[X1,X3] = 2*X2 - X4".
inline std::string render_bracket(const std::string& ni, const std::string& nj,
                                  const std::vector<Expr>& coords,
                                  const std::vector<std::string>& names) {
  std::vector<std::string> terms;
  for (size_t k = 0; k < coords.size(); ++k) {
    if (coords[k].is_zero()) continue;
    std::string c = format(coords[k]);
    if (c == "1") {
      terms.push_back(names[k]);
    } else if (c == "-1") {
      terms.push_back("-" + names[k]);
    } else {
      // Multi-term coefficients are parenthesized; "-2" or "a0*b0" are not.
      bool wrap = c.find(' ') != std::string::npos ||
                  c.find('-', 1) != std::string::npos ||
                  c.find('+') != std::string::npos;
      terms.push_back((wrap ? "(" + c + ")" : c) + "*" + names[k]);
    }
  }
  std::string out = "[" + ni + "," + nj + "] = ";
  if (terms.empty()) return out + "0";
  out += terms[0];
  for (size_t k = 1; k < terms.size(); ++k) {
    if (terms[k][0] == '-')
      out += " - " + terms[k].substr(1);
    else
      out += " + " + terms[k];
  }
  return out;
}

}  // namespace liejet
