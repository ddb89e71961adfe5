#pragma once
// The casebook: coefficient families for the reduced pair together with
// their recorded symmetry listings, and a verifier that re-checks every
// claim exactly.  Each case names a coefficient pair (alpha, beta), a
// claimed algebra dimension, and a list of generators; entries may carry a
// published variant next to the verified working form, in which case the
// verifier confirms the variant fails and re-derives the single edit that
// repairs it.

#include <liejet/algebra.hpp>
#include <liejet/builtin_data.hpp>
#include <liejet/determining.hpp>
#include <liejet/io.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace liejet {

// A named constant subject to a monic quadratic relation  name^2 = p*name + q.
struct AlgebraicParam {
  std::string name;
  Expr p, q;
};

// A list of parameter values, e.g. { (a0, 1), (b0, 2) }.
using Assignment = std::vector<std::pair<std::string, Expr>>;

struct CaseRecord {
  std::string id;
  int claimed_dim = 0;
  bool listed_complete = false;
  std::vector<std::string> params;
  std::vector<AlgebraicParam> algebraics;
  Expr alpha, beta;
  std::vector<Expr> alt_alphas;          // further coefficients in the family
  std::vector<Assignment> instances;     // concrete parameter values to spot-check
  std::optional<Assignment> closure_instance;
  bool emit_reduction = false;
  std::vector<GeneratorEntry> generators;
};

// The pair every case is verified against: the first dependent's second
// derivative equals the second dependent's first, and the second obeys the
// linear law with the case's coefficients.
inline OdeSystem case_system(const CaseRecord& rec, const Expr& alpha) {
  OdeSystem sys;
  sys.indep = "x";
  sys.deps = {"y", "z"};
  sys.order = 2;
  sys.rhs = {Expr::jet("z", 1),
             alpha * Expr::jet("y", 1) + rec.beta * Expr::jet("z", 1)};
  return sys;
}

inline OdeSystem case_system(const CaseRecord& rec) {
  return case_system(rec, rec.alpha);
}

// ---------------------------------------------------------------------------
// Reading case files.

namespace casedetail {

inline bool bool_field(const Field& f) {
  std::string v = iodetail::trim(f.value);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError(f.line, 1, "field '" + f.key + "' expects true or false");
}

inline int int_field(const Field& f) {
  std::string v = iodetail::trim(f.value);
  size_t pos = 0;
  try {
    int n = std::stoi(v, &pos);
    if (pos == v.size()) return n;
  } catch (...) {
  }
  throw ParseError(f.line, 1, "field '" + f.key + "' expects an integer");
}

}  // namespace casedetail

inline CaseRecord read_case(const std::vector<Block>& blocks) {
  if (blocks.empty() || blocks[0].kind != "case")
    throw ParseError(blocks.empty() ? 1 : blocks[0].line, 1,
                     "a case file starts with a 'case' block");
  const Block& b = blocks[0];
  CaseRecord rec;
  ParseContext ctx;

  for (const Field& f : b.fields) {
    static const std::set<std::string> known = {
        "id",         "claimed_dim", "listed_complete", "param",
        "algebraic",  "alpha",       "beta",            "alt_alpha",
        "instance",   "closure_instance",               "emit_reduction"};
    if (!known.count(f.key))
      throw ParseError(f.line, 1, "unknown case field '" + f.key + "'");
  }

  // Parameters are plain symbols; the algebraic relations may refer to them,
  // so both are collected before any expression field is parsed.
  for (const Field* f : b.all("param")) {
    std::string name = iodetail::trim(f->value);
    if (!iodetail::is_ident(name))
      throw ParseError(f->line, 1, "bad parameter name '" + name + "'");
    rec.params.push_back(name);
  }
  for (const Field* f : b.all("algebraic")) {
    auto sides = iodetail::split_top_level(f->value, '=');
    std::string lhs = sides.size() == 2 ? iodetail::trim(sides[0]) : "";
    std::string name =
        lhs.size() > 2 && lhs.substr(lhs.size() - 2) == "^2"
            ? iodetail::trim(lhs.substr(0, lhs.size() - 2))
            : "";
    if (!iodetail::is_ident(name))
      throw ParseError(f->line, 1,
                       "algebraic relations take the form 'name^2 = EXPR'");
    Expr rhs;
    try {
      rhs = parse_expression(sides[1], ctx);
    } catch (const ParseError& e) {
      throw ParseError(f->line, e.col, std::string("in field 'algebraic': ") + e.what());
    }
    Expr p = diff_var(rhs, name);
    Expr q = rhs - p * Expr::var(name);
    if (!diff_var(p, name).is_zero() || !diff_var(q, name).is_zero())
      throw ParseError(f->line, 1,
                       "the right side of '" + name +
                           "^2 = ...' must be linear in " + name);
    rec.algebraics.push_back({name, p, q});
    ctx.declare_const(name, algebraic_const(name, p, q));
  }

  rec.id = iodetail::trim(b.need("id").value);
  if (rec.id.empty()) throw ParseError(b.need("id").line, 1, "empty case id");
  rec.claimed_dim = casedetail::int_field(b.need("claimed_dim"));
  rec.listed_complete = casedetail::bool_field(b.need("listed_complete"));
  rec.alpha = parse_field_expr(b.need("alpha"), ctx);
  rec.beta = parse_field_expr(b.need("beta"), ctx);
  for (const Field* f : b.all("alt_alpha"))
    rec.alt_alphas.push_back(parse_field_expr(*f, ctx));
  for (const Field* f : b.all("instance"))
    rec.instances.push_back(parse_field_assignments(*f, ctx));
  if (const Field* f = b.find("closure_instance"))
    rec.closure_instance = parse_field_assignments(*f, ctx);
  if (const Field* f = b.find("emit_reduction"))
    rec.emit_reduction = casedetail::bool_field(*f);

  for (size_t i = 1; i < blocks.size(); ++i)
    rec.generators.push_back(read_generator(blocks[i], {"y", "z"}, ctx));
  if (rec.generators.empty())
    throw ParseError(b.line, 1, "a case needs at least one generator block");
  return rec;
}

inline std::vector<CaseRecord> builtin_cases() {
  std::vector<CaseRecord> out;
  for (const auto& [name, text] : data::builtin_casebook())
    out.push_back(read_case(read_blocks(text)));
  return out;
}

inline std::vector<CaseRecord> read_casebook_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".case") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw ExprError("no .case files under " + dir);
  std::vector<CaseRecord> out;
  for (const auto& p : paths) out.push_back(read_case(read_blocks_file(p.string())));
  return out;
}

// ---------------------------------------------------------------------------
// Instance handling.

inline Bindings instance_bindings(const Assignment& a) {
  Bindings b;
  for (const auto& [name, value] : a) b.bind_var(name, value);
  return b;
}

inline std::string describe(const Assignment& a) {
  std::string out;
  for (const auto& [name, value] : a) {
    if (!out.empty()) out += ", ";
    out += name + " = " + format(value);
  }
  return out;
}

// A value assigned to an algebraic constant must satisfy that constant's
// relation once the other assignments are substituted into it.
inline std::optional<std::string> relation_violation(const CaseRecord& rec,
                                                     const Assignment& inst) {
  Bindings b = instance_bindings(inst);
  for (const AlgebraicParam& alg : rec.algebraics) {
    auto it = std::find_if(inst.begin(), inst.end(),
                           [&](const auto& kv) { return kv.first == alg.name; });
    if (it == inst.end()) continue;
    const Expr& val = it->second;
    Expr res = val * val - substitute(alg.p, b) * val - substitute(alg.q, b);
    if (!res.is_zero())
      return "the value " + format(it->second) + " for " + alg.name +
             " violates its relation (residual " + format(res) + ")";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Repair search for published variants.

namespace casedetail {

struct Repair {
  std::string description;
  Generator candidate;
};

inline std::string slot_name(size_t s, const std::vector<std::string>& deps) {
  return s == 0 ? std::string("xi") : "eta[" + deps[s - 1] + "]";
}

inline const Expr& slot_of(const Generator& g, size_t s) {
  return s == 0 ? g.xi : g.eta[s - 1];
}

inline Expr& slot_ref(Generator& g, size_t s) {
  return s == 0 ? g.xi : g.eta[s - 1];
}

// The terms of one component in canonical order, each as a standalone
// expression over the component's denominator.
inline std::vector<Expr> component_terms(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& [mono, coeff] : e.num()) {
    Poly p;
    p[mono] = coeff;
    out.push_back(Expr::make(std::move(p), Poly(e.den())));
  }
  return out;
}

// Candidate single-edit corrections of a published form, in a fixed order:
// every single-term sign flip, then every whole-component sign flip, then
// every single-term doubling and halving.  The order makes the first
// verifying repair deterministic.
inline std::vector<Repair> repair_candidates(
    const Generator& printed, const std::vector<std::string>& deps) {
  const size_t slots = 1 + deps.size();
  std::vector<Repair> out;
  for (size_t s = 0; s < slots; ++s)
    for (const Expr& t : component_terms(slot_of(printed, s))) {
      Generator g = printed;
      slot_ref(g, s) = slot_of(printed, s) - t - t;
      out.push_back({"single-sign repair (term " + format(t) + " of " +
                         slot_name(s, deps) + " flipped)",
                     std::move(g)});
    }
  for (size_t s = 0; s < slots; ++s) {
    if (slot_of(printed, s).is_zero()) continue;
    Generator g = printed;
    slot_ref(g, s) = Expr() - slot_of(printed, s);
    out.push_back({"single-sign repair (the whole " + slot_name(s, deps) +
                       " component flipped)",
                   std::move(g)});
  }
  for (size_t s = 0; s < slots; ++s)
    for (const Expr& t : component_terms(slot_of(printed, s))) {
      Generator g = printed;
      slot_ref(g, s) = slot_of(printed, s) + t;
      out.push_back({"single-coefficient repair (term " + format(t) + " of " +
                         slot_name(s, deps) + " doubled)",
                     std::move(g)});
      Generator h = printed;
      slot_ref(h, s) = slot_of(printed, s) - t / 2;
      out.push_back({"single-coefficient repair (term " + format(t) + " of " +
                         slot_name(s, deps) + " halved)",
                     std::move(h)});
    }
  return out;
}

inline std::optional<Repair> search_repair(const Generator& printed,
                                           const OdeSystem& sys) {
  for (Repair& cand : repair_candidates(printed, sys.deps))
    if (is_symmetry(cand.candidate, sys)) return std::move(cand);
  return std::nullopt;
}

inline bool same_generator(const Generator& a, const Generator& b) {
  if (a.eta.size() != b.eta.size()) return false;
  if (!(a.xi - b.xi).is_zero()) return false;
  for (size_t i = 0; i < a.eta.size(); ++i)
    if (!(a.eta[i] - b.eta[i]).is_zero()) return false;
  return true;
}

}  // namespace casedetail

// ---------------------------------------------------------------------------
// Verification.

struct CaseItem {
  std::string name;
  std::string kind;  // generator | printed-variant | independence | closure |
                     // instance | alternative-coefficient
  std::vector<std::string> residuals;
  std::string verdict;
  bool pass = true;
};

struct CaseReport {
  std::string id;
  int claimed_dim = 0;
  int verified_lower_bound = 0;
  bool listed_complete = false;
  bool pass = true;
  std::vector<CaseItem> items;
  std::vector<std::string> findings;
  std::vector<std::string> brackets;  // structure table when closure succeeds
};

inline CaseReport verify_case(const CaseRecord& rec) {
  CaseReport rep;
  rep.id = rec.id;
  rep.claimed_dim = rec.claimed_dim;
  rep.listed_complete = rec.listed_complete;
  OdeSystem sys = case_system(rec);

  // 1. Every working form must be an exact symmetry of the symbolic pair.
  std::vector<Generator> working;
  std::vector<std::string> names;
  for (const GeneratorEntry& entry : rec.generators) {
    working.push_back(entry.gen);
    names.push_back(entry.name);
    CaseItem item{entry.name, "generator", {}, "SYMMETRY", true};
    for (const Expr& r : symmetry_residuals(entry.gen, sys)) {
      item.residuals.push_back(format(r));
      if (!r.is_zero()) {
        item.pass = false;
        item.verdict = "NOT A SYMMETRY";
      }
    }
    if (!item.pass) {
      rep.pass = false;
      rep.findings.push_back(rec.id + "/" + entry.name +
                             ": the recorded working form is not a symmetry");
    }
    rep.items.push_back(std::move(item));

    // 2. A published variant must fail, and a deterministic single-edit
    //    search must land exactly on the recorded working form.
    if (!entry.printed) continue;
    CaseItem pit{entry.name, "printed-variant", {}, "", true};
    bool printed_ok = true;
    for (const Expr& r : symmetry_residuals(*entry.printed, sys)) {
      pit.residuals.push_back(format(r));
      printed_ok = printed_ok && r.is_zero();
    }
    if (printed_ok) {
      pit.pass = false;
      pit.verdict = "UNEXPECTED: the printed variant verifies";
      rep.pass = false;
      rep.findings.push_back(rec.id + "/" + entry.name +
                             ": printed form verifies, so the stored working "
                             "variant is redundant");
    } else {
      auto fix = casedetail::search_repair(*entry.printed, sys);
      if (!fix) {
        pit.pass = false;
        pit.verdict = "FAILS AS PRINTED; no single-edit repair verifies";
        rep.pass = false;
        rep.findings.push_back(rec.id + "/" + entry.name +
                               ": printed form fails and no single-edit "
                               "repair verifies");
      } else if (!casedetail::same_generator(fix->candidate, entry.gen)) {
        pit.pass = false;
        pit.verdict = "FAILS AS PRINTED; repair disagrees with working form";
        rep.pass = false;
        rep.findings.push_back(rec.id + "/" + entry.name +
                               ": the first verifying repair (" +
                               fix->description +
                               ") differs from the recorded working form");
      } else {
        pit.verdict = "FAILS AS PRINTED; repaired";
        rep.findings.push_back("suggested erratum " + rec.id + "/" +
                               entry.name + ": " + fix->description +
                               " makes the printed form verify");
      }
    }
    rep.items.push_back(std::move(pit));
  }

  // 3. Linear independence of the listing over the symbolic coefficients.
  if (auto dep = dependent_member(working, sys)) {
    rep.pass = false;
    rep.findings.push_back(rec.id + ": " + names[*dep] +
                           " lies in the span of the other listed generators");
  } else {
    rep.verified_lower_bound = static_cast<int>(working.size());
    rep.items.push_back({"span", "independence", {},
                         "the " + std::to_string(working.size()) +
                             " listed generators are linearly independent",
                         true});
  }

  if (rec.listed_complete &&
      static_cast<int>(working.size()) != rec.claimed_dim) {
    rep.pass = false;
    rep.findings.push_back(rec.id + ": claims dimension " +
                           std::to_string(rec.claimed_dim) + " but lists " +
                           std::to_string(working.size()) + " generators");
  }
  if (!rec.listed_complete)
    rep.findings.push_back(
        "incomplete listing for " + rec.id + ": " +
        std::to_string(working.size()) + " of the claimed " +
        std::to_string(rec.claimed_dim) +
        " generators are recorded, so the verified dimension is a lower bound");

  // 4. A complete listing must close under the bracket.  Symbolic square
  //    roots or quadratic constants make span arithmetic awkward, so cases
  //    may name a rational closure instance; an empty instance runs the
  //    check fully symbolically.
  if (rec.listed_complete) {
    Assignment inst = rec.closure_instance ? *rec.closure_instance : Assignment{};
    CaseItem it{inst.empty() ? "closure" : "closure at " + describe(inst),
                "closure", {}, "", true};
    if (auto bad = relation_violation(rec, inst)) {
      it.pass = false;
      it.verdict = *bad;
      rep.pass = false;
    } else {
      Bindings b = instance_bindings(inst);
      OdeSystem sys_i = substitute(sys, b);
      std::vector<Generator> gens_i;
      gens_i.reserve(working.size());
      for (const Generator& g : working) gens_i.push_back(substitute(g, b));
      ClosureReport cr = closure_check(gens_i, sys_i);
      if (!cr.closed) {
        auto [i, j] = *cr.counterexample;
        it.pass = false;
        it.verdict =
            "NOT CLOSED: [" + names[i] + "," + names[j] + "] leaves the span";
        rep.pass = false;
        rep.findings.push_back(rec.id + ": the bracket [" + names[i] + "," +
                               names[j] +
                               "] is not in the span of the listing");
      } else if (auto dep = dependent_member(gens_i, sys_i)) {
        it.pass = false;
        it.verdict = "DEGENERATE INSTANCE: " + names[*dep] +
                     " becomes dependent at this instance";
        rep.pass = false;
      } else {
        it.verdict = "CLOSED: all " + std::to_string(cr.structure.size()) +
                     " brackets stay in the span";
        for (const auto& [i, j, coords] : cr.structure)
          rep.brackets.push_back(
              render_bracket(names[i], names[j], coords, names));
      }
    }
    rep.items.push_back(std::move(it));
  }

  // 5. Concrete parameter instances: relations stay consistent and every
  //    generator still verifies after substitution.
  for (const Assignment& inst : rec.instances) {
    CaseItem it{describe(inst), "instance", {}, "", true};
    if (auto bad = relation_violation(rec, inst)) {
      it.pass = false;
      it.verdict = *bad;
      rep.pass = false;
      rep.items.push_back(std::move(it));
      continue;
    }
    Bindings b = instance_bindings(inst);
    OdeSystem sys_i = substitute(sys, b);
    std::string first_bad;
    for (size_t k = 0; k < working.size() && first_bad.empty(); ++k)
      if (!is_symmetry(substitute(working[k], b), sys_i)) first_bad = names[k];
    if (first_bad.empty()) {
      it.verdict =
          "all " + std::to_string(working.size()) + " generators verify";
    } else {
      it.pass = false;
      it.verdict = first_bad + " fails at this instance";
      rep.pass = false;
      rep.findings.push_back(rec.id + ": " + first_bad +
                             " fails at the instance " + describe(inst));
    }
    rep.items.push_back(std::move(it));
  }

  // 6. Alternative coefficients belonging to the same family.
  for (const Expr& alt : rec.alt_alphas) {
    OdeSystem sys_a = case_system(rec, alt);
    CaseItem it{"alpha = " + format(alt), "alternative-coefficient", {}, "", true};
    std::string first_bad;
    for (size_t k = 0; k < working.size() && first_bad.empty(); ++k)
      if (!is_symmetry(working[k], sys_a)) first_bad = names[k];
    if (first_bad.empty()) {
      it.verdict =
          "all " + std::to_string(working.size()) + " generators verify";
    } else {
      it.pass = false;
      it.verdict = first_bad + " fails for this coefficient";
      rep.pass = false;
      rep.findings.push_back(rec.id + ": " + first_bad +
                             " fails for the alternative coefficient alpha = " +
                             format(alt));
    }
    rep.items.push_back(std::move(it));
  }

  // 7. On request, reduce the determining constraints to ordinary equations
  //    in x for this coefficient pair; the remaining rows describe whatever
  //    symmetries the recorded listing does not cover.
  if (rec.emit_reduction) {
    OdeSystem canonical;
    canonical.indep = "x";
    canonical.deps = {"y", "z"};
    canonical.order = 2;
    Expr al = Expr::fn("alpha", {"x"}), be = Expr::fn("beta", {"x"});
    canonical.rhs = {Expr::jet("z", 1),
                     al * Expr::jet("y", 1) + be * Expr::jet("z", 1)};
    DeterminingSystem det = determining_system(canonical);
    Bindings coeff;
    coeff.bind_fn("alpha", rec.alpha).bind_fn("beta", rec.beta);
    std::istringstream lines(render_ansatz(reduce_to_x_odes(det, coeff), det));
    for (std::string line; std::getline(lines, line);)
      if (!line.empty())
        rep.findings.push_back(rec.id + " reduction " + line);
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Whole-casebook classification.

struct ClassificationReport {
  std::vector<CaseReport> cases;
  std::vector<int> dimension_set;  // sorted distinct claimed dimensions
  bool pass = true;
};

inline ClassificationReport classify_casebook(
    const std::vector<CaseRecord>& records) {
  ClassificationReport out;
  std::set<int> dims;
  for (const CaseRecord& rec : records) {
    out.cases.push_back(verify_case(rec));
    out.pass = out.pass && out.cases.back().pass;
    dims.insert(rec.claimed_dim);
  }
  out.dimension_set.assign(dims.begin(), dims.end());
  return out;
}

}  // namespace liejet
