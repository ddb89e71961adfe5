#pragma once
// Reductions between scalar equations and first-order-coupled systems, the
// shape tests on scalar linear equations, and the contact condition for
// coordinate triples.
//
// Throughout, a scalar equation y^(n) = f(x, y, ..., y^(n-1)) of order n >= 3
// is rewritten over the pair (y, z) with z standing for y'; the companion
// system has uniform order n - 1.

#include <liejet/ode.hpp>

#include <optional>

namespace liejet {

// Substitute z for y' throughout: y -> y, y' -> z, y^(k) -> z^(k-1).
inline OdeSystem scalar_to_system(const ScalarOde& ode) {
  validate(ode);
  if (ode.order < 3)
    throw ExprError("pair reduction needs an equation of order at least 3");
  const std::string z = ode.dep == "z" ? "z_" : "z";
  Bindings map;
  map.bind_jet(ode.dep, 1, Expr::var(z));
  for (int k = 2; k < ode.order; ++k)
    map.bind_jet(ode.dep, k, Expr::jet(z, k - 1));
  OdeSystem sys;
  sys.indep = ode.indep;
  sys.deps = {ode.dep, z};
  sys.order = ode.order - 1;
  sys.rhs = {Expr::jet(z, ode.order - 2), substitute(ode.rhs, map)};
  validate(sys);
  return sys;
}

namespace reddetail {

// Coefficient list of a scalar right-hand side that is linear (affine) in
// the dependent and its derivatives: out[0] is the free term, out[k] the
// coefficient of y^(k-1).  Throws when the right-hand side is nonlinear.
inline std::vector<Expr> linear_coefficients(const ScalarOde& ode) {
  auto mine = [&](const Atom& a) {
    return (a.kind == AtomKind::Var || a.kind == AtomKind::Jet) &&
           a.name == ode.dep;
  };
  std::vector<Expr> out(static_cast<size_t>(ode.order) + 1, Expr());
  for (const auto& [mono, coeff] : collect(ode.rhs, mine)) {
    if (mono.empty()) {
      out[0] = coeff;
      continue;
    }
    if (mono.size() != 1 || mono[0].second != 1)
      throw ExprError("equation is not linear in " + ode.dep +
                      " and its derivatives");
    const Atom& a = mono[0].first;
    int k = a.kind == AtomKind::Var ? 0 : a.order;
    out[static_cast<size_t>(k) + 1] = coeff;
  }
  return out;
}

}  // namespace reddetail

// True when a linear scalar equation has vanishing coefficients on its two
// leading lower derivatives y^(n-1) and y^(n-2).
inline bool is_laguerre_form(const ScalarOde& ode) {
  validate(ode);
  std::vector<Expr> c = reddetail::linear_coefficients(ode);
  return c[static_cast<size_t>(ode.order)].is_zero() &&
         c[static_cast<size_t>(ode.order) - 1].is_zero();
}

// A coordinate triple (phi, psi, omega) in the variables (x, y, z).
struct TripleMap {
  Expr phi;
  Expr psi;
  Expr omega;
};

// Residual of the contact condition for the triple: with D = d/dx along
// curves where z plays y' and z' is formal,
//   omega * D(phi) - D(psi),
// cleared of denominators.  Identically zero exactly when the triple
// preserves the contact relation; triples that merely permute or rescale
// coordinates generally fail it, which is what admits the wider
// transformation group on (x, y, z).
inline Expr contact_condition_residual(const TripleMap& t,
                                       const std::string& x = "x",
                                       const std::string& y = "y",
                                       const std::string& z = "z") {
  Expr zp = Expr::jet(z, 1);
  auto D = [&](const Expr& e) {
    return diff_var(e, x) + Expr::var(z) * diff_var(e, y) +
           zp * diff_var(e, z);
  };
  Expr res = t.omega * D(t.phi) - D(t.psi);
  Poly one;
  one[Monomial{}] = 1;
  return Expr::make(res.num(), std::move(one));
}

// The lift of a point transformation (x, y) -> (phi, psi) to the z slot:
// omega = D(psi)/D(phi).  Satisfies the contact condition by construction.
inline TripleMap point_lift(const Expr& phi, const Expr& psi,
                            const std::string& x = "x",
                            const std::string& y = "y",
                            const std::string& z = "z") {
  auto D = [&](const Expr& e) {
    return diff_var(e, x) + Expr::var(z) * diff_var(e, y);
  };
  Expr dphi = D(phi);
  if (dphi.is_zero())
    throw ExprError("the point map is singular: its x-image is constant");
  return {phi, psi, D(psi) / dphi};
}

// Shape report for a third-order linear scalar equation
//   y''' = delta(x) + sigma(x) y + alpha(x) y' + beta(x) y''.
// The equation reduces to the canonical pair form exactly when the free and
// undifferentiated terms vanish; the companion system then reads
//   y'' = z',  z'' = alpha(x) y' + beta(x) z'.
struct ThirdOrderClassification {
  bool eligible = false;
  Expr delta, sigma, alpha, beta;
  std::optional<OdeSystem> reduced;
};

inline ThirdOrderClassification classify_linear_third_order(
    const ScalarOde& ode) {
  validate(ode);
  if (ode.order != 3)
    throw ExprError("classification applies to third-order equations");
  std::vector<Expr> c = reddetail::linear_coefficients(ode);
  ThirdOrderClassification out;
  out.delta = c[0];
  out.sigma = c[1];
  out.alpha = c[2];
  out.beta = c[3];
  out.eligible = out.delta.is_zero() && out.sigma.is_zero();
  if (out.eligible) {
    const std::string z = ode.dep == "z" ? "z_" : "z";
    OdeSystem sys;
    sys.indep = ode.indep;
    sys.deps = {ode.dep, z};
    sys.order = 2;
    sys.rhs = {Expr::jet(z, 1),
               out.alpha * Expr::jet(ode.dep, 1) + out.beta * Expr::jet(z, 1)};
    out.reduced = std::move(sys);
  }
  return out;
}

}  // namespace liejet
