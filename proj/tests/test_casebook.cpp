// Verification of the bundled case records: parsing, symmetry checks,
// closure, erratum repairs, instances, and the whole-book classification.
#include <gtest/gtest.h>

#include <liejet/casebook.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

using namespace liejet;

namespace {

const std::vector<CaseRecord>& book() {
  static const std::vector<CaseRecord> cases = builtin_cases();
  return cases;
}

const CaseRecord& by_id(const std::string& id) {
  for (const CaseRecord& rec : book())
    if (rec.id == id) return rec;
  throw std::runtime_error("no case " + id);
}

const CaseReport& report(const std::string& id) {
  static std::map<std::string, CaseReport> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, verify_case(by_id(id))).first;
  return it->second;
}

std::vector<std::string> findings_with(const CaseReport& rep,
                                       const std::string& needle) {
  std::vector<std::string> out;
  for (const std::string& f : rep.findings)
    if (f.find(needle) != std::string::npos) out.push_back(f);
  return out;
}

bool same_expr(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

}  // namespace

// ---------------------------------------------------------------------------
// Parsing the bundled records.

TEST(Builtin, ParsesAllTenCases) {
  const auto& cases = book();
  ASSERT_EQ(cases.size(), 10u);

  std::vector<std::string> ids;
  std::vector<int> dims;
  std::vector<size_t> listed;
  for (const CaseRecord& rec : cases) {
    ids.push_back(rec.id);
    dims.push_back(rec.claimed_dim);
    listed.push_back(rec.generators.size());
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"I.1", "I.2", "I.3.1", "I.3.2",
                                           "II.1", "II.2.1", "II.2.2", "II.3",
                                           "II.4.1", "II.4.2"}));
  EXPECT_EQ(dims, (std::vector<int>{15, 15, 5, 6, 7, 7, 7, 5, 6, 6}));
  EXPECT_EQ(listed, (std::vector<size_t>{15, 15, 3, 3, 7, 7, 4, 3, 3, 3}));

  for (const CaseRecord& rec : cases) {
    bool complete = rec.id == "I.1" || rec.id == "I.2" || rec.id == "II.1" ||
                    rec.id == "II.2.1";
    EXPECT_EQ(rec.listed_complete, complete) << rec.id;
  }

  EXPECT_EQ(by_id("II.2.1").algebraics.size(), 2u);
  EXPECT_TRUE(by_id("II.2.2").emit_reduction);
  EXPECT_EQ(by_id("I.3.1").alt_alphas.size(), 1u);
  EXPECT_EQ(by_id("II.3").alt_alphas.size(), 1u);
  EXPECT_TRUE(by_id("I.2").closure_instance.has_value());
  EXPECT_FALSE(by_id("I.1").closure_instance.has_value());
}

TEST(Builtin, AgreesWithTheShippedFiles) {
  std::vector<CaseRecord> shipped = read_casebook_dir(CASEBOOK_DIR);
  const auto& embedded = book();
  ASSERT_EQ(shipped.size(), embedded.size());
  for (size_t c = 0; c < shipped.size(); ++c) {
    const CaseRecord& a = shipped[c];
    const CaseRecord& b = embedded[c];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.claimed_dim, b.claimed_dim);
    EXPECT_EQ(a.listed_complete, b.listed_complete);
    EXPECT_EQ(a.emit_reduction, b.emit_reduction);
    EXPECT_TRUE(same_expr(a.alpha, b.alpha)) << a.id;
    EXPECT_TRUE(same_expr(a.beta, b.beta)) << a.id;
    EXPECT_EQ(a.instances.size(), b.instances.size()) << a.id;
    ASSERT_EQ(a.generators.size(), b.generators.size()) << a.id;
    for (size_t k = 0; k < a.generators.size(); ++k) {
      EXPECT_EQ(a.generators[k].name, b.generators[k].name);
      EXPECT_TRUE(same_expr(a.generators[k].gen.xi, b.generators[k].gen.xi));
      for (size_t s = 0; s < 2; ++s)
        EXPECT_TRUE(same_expr(a.generators[k].gen.eta[s],
                              b.generators[k].gen.eta[s]));
      EXPECT_EQ(a.generators[k].printed.has_value(),
                b.generators[k].printed.has_value());
    }
  }
}

TEST(Reading, RejectsMalformedCases) {
  EXPECT_THROW(read_case(read_blocks("generator A { xi: 1 }")), ParseError);
  EXPECT_THROW(read_case(read_blocks("case { id: T\n claimed_dim: five\n"
                                     " listed_complete: true\n alpha: 0\n"
                                     " beta: 0 }\ngenerator A { xi: 1 }")),
               ParseError);
  EXPECT_THROW(read_case(read_blocks("case { id: T\n claimed_dim: 1\n"
                                     " listed_complete: true\n alpha: 0\n"
                                     " beta: 0\n colour: red }\n"
                                     "generator A { xi: 1 }")),
               ParseError);
  // The relation right side must be linear in the constant being declared.
  EXPECT_THROW(read_case(read_blocks("case { id: T\n claimed_dim: 1\n"
                                     " listed_complete: true\n"
                                     " algebraic: w^2 = w*w + 1\n alpha: 0\n"
                                     " beta: 0 }\ngenerator A { xi: 1 }")),
               ParseError);
  EXPECT_THROW(read_case(read_blocks("case { id: T\n claimed_dim: 1\n"
                                     " listed_complete: true\n alpha: 0\n"
                                     " beta: 0 }")),
               ParseError);
}

// ---------------------------------------------------------------------------
// Instance plumbing.

TEST(Instances, AlgebraicRelationConsistency) {
  const CaseRecord& rec = by_id("II.2.1");

  Assignment good{{"a0", Expr::from_int(1)},
                  {"al1", (Expr::from_int(1) + sqrt_of(Expr::from_int(5))) / 2}};
  EXPECT_FALSE(relation_violation(rec, good).has_value());

  Assignment bad{{"a0", Expr::from_int(1)}, {"al1", Expr::from_int(2)}};
  auto violation = relation_violation(rec, bad);
  ASSERT_TRUE(violation.has_value());
  EXPECT_NE(violation->find("al1"), std::string::npos);

  // Unbound algebraic constants are not checked.
  Assignment partial{{"a0", Expr::from_int(4)}};
  EXPECT_FALSE(relation_violation(rec, partial).has_value());
}

// ---------------------------------------------------------------------------
// The two fifteen-dimensional cases.

TEST(VerifyI1, FifteenSymmetriesCloseWithFourRepairs) {
  const CaseReport& rep = report("I.1");
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.claimed_dim, 15);
  EXPECT_EQ(rep.verified_lower_bound, 15);
  EXPECT_EQ(rep.brackets.size(), 105u);
  EXPECT_TRUE(findings_with(rep, "incomplete listing").empty());

  auto errata = findings_with(rep, "suggested erratum");
  ASSERT_EQ(errata.size(), 4u);
  std::vector<std::string> who = {"I.1/X10", "I.1/X12", "I.1/X13", "I.1/X14"};
  for (size_t k = 0; k < 4; ++k)
    EXPECT_NE(errata[k].find(who[k]), std::string::npos) << errata[k];

  // X10, X13, X14 are sign slips; X12 needs one coefficient doubled.
  EXPECT_NE(errata[0].find("single-sign repair"), std::string::npos);
  EXPECT_NE(errata[1].find("single-coefficient repair"), std::string::npos);
  EXPECT_NE(errata[1].find("doubled"), std::string::npos);
  EXPECT_NE(errata[2].find("single-sign repair"), std::string::npos);
  EXPECT_NE(errata[3].find("single-sign repair"), std::string::npos);

  // The bracket table is rendered in listing order with exact coordinates.
  EXPECT_EQ(rep.brackets.front(), "[X1,X2] = 0");
  EXPECT_NE(std::find(rep.brackets.begin(), rep.brackets.end(),
                      "[X1,X4] = X2"),
            rep.brackets.end());
  EXPECT_NE(std::find(rep.brackets.begin(), rep.brackets.end(),
                      "[X1,X8] = X1 + (1/2)*X5"),
            rep.brackets.end());
}

TEST(VerifyI2, SymbolicSurdsVerifyAndCloseAtOne) {
  const CaseReport& rep = report("I.2");
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.verified_lower_bound, 15);
  EXPECT_EQ(rep.brackets.size(), 105u);

  auto errata = findings_with(rep, "suggested erratum");
  ASSERT_EQ(errata.size(), 2u);
  EXPECT_NE(errata[0].find("I.2/Y10"), std::string::npos);
  EXPECT_NE(errata[0].find("single-sign repair"), std::string::npos);
  EXPECT_NE(errata[1].find("I.2/Y12"), std::string::npos);
  EXPECT_NE(errata[1].find("single-sign repair"), std::string::npos);

  bool closed_at_one = false;
  for (const CaseItem& it : rep.items)
    if (it.kind == "closure" && it.name == "closure at a0 = 1" && it.pass)
      closed_at_one = true;
  EXPECT_TRUE(closed_at_one);

  // Both concrete instances (a0 = 1 and a0 = 4) verified.
  size_t instance_passes = 0;
  for (const CaseItem& it : rep.items)
    if (it.kind == "instance" && it.pass) ++instance_passes;
  EXPECT_EQ(instance_passes, 2u);
}

// ---------------------------------------------------------------------------
// The seven-dimensional constant-coefficient cases.

TEST(VerifyII1, SevenGeneratorsCloseSymbolicallyInTheRate) {
  const CaseReport& rep = report("II.1");
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.verified_lower_bound, 7);
  EXPECT_EQ(rep.brackets.size(), 21u);
  EXPECT_TRUE(findings_with(rep, "suggested erratum").empty());
  EXPECT_FALSE(by_id("II.1").closure_instance.has_value());

  // The closure runs at symbolic b0, so the structure constants carry the
  // parameter itself.
  bool named = false, symbolic_constant = false;
  for (const CaseItem& it : rep.items)
    if (it.kind == "closure" && it.name == "closure" && it.pass) named = true;
  for (const std::string& line : rep.brackets)
    if (line == "[Y2,Y3] = -b0*Y2") symbolic_constant = true;
  EXPECT_TRUE(named);
  EXPECT_TRUE(symbolic_constant);
}

TEST(VerifyII21, QuadraticRatesCloseAtTheRationalInstance) {
  const CaseReport& rep = report("II.2.1");
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.verified_lower_bound, 7);
  EXPECT_EQ(rep.brackets.size(), 21u);
  EXPECT_TRUE(findings_with(rep, "suggested erratum").empty());

  bool closure_named = false;
  for (const CaseItem& it : rep.items)
    if (it.kind == "closure" &&
        it.name.find("a0 = (1/2)") != std::string::npos && it.pass)
      closure_named = true;
  EXPECT_TRUE(closure_named);

  bool rate_bracket = false;
  for (const std::string& line : rep.brackets)
    if (line == "[X1,Y4] = -(1/2)*Y4") rate_bracket = true;
  EXPECT_TRUE(rate_bracket);
}

TEST(VerifyII22, LowerBoundOfFourPlusReducedConstraints) {
  const CaseReport& rep = report("II.2.2");
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.claimed_dim, 7);
  EXPECT_EQ(rep.verified_lower_bound, 4);
  ASSERT_EQ(findings_with(rep, "incomplete listing for II.2.2").size(), 1u);

  auto reduced = findings_with(rep, "reduction ansatz[");
  EXPECT_GE(reduced.size(), 5u);
  bool mentions_a0 = false, mentions_b0 = false;
  for (const std::string& f : reduced) {
    if (f.find("a0") != std::string::npos) mentions_a0 = true;
    if (f.find("b0") != std::string::npos) mentions_b0 = true;
    EXPECT_NE(f.find(" = 0"), std::string::npos);
  }
  EXPECT_TRUE(mentions_a0);
  EXPECT_TRUE(mentions_b0);
}

// ---------------------------------------------------------------------------
// The power-law families carry the universal core plus instance checks.

TEST(VerifyFamilies, PowerLawCoresHoldSymbolicallyAndAtInstances) {
  for (const std::string& id :
       {std::string("I.3.1"), std::string("I.3.2"), std::string("II.3"),
        std::string("II.4.1"), std::string("II.4.2")}) {
    const CaseReport& rep = report(id);
    EXPECT_TRUE(rep.pass) << id;
    EXPECT_EQ(rep.verified_lower_bound, 3) << id;
    EXPECT_EQ(findings_with(rep, "incomplete listing").size(), 1u) << id;
    EXPECT_TRUE(rep.brackets.empty()) << id;  // no closure for partial lists

    size_t instances = 0;
    for (const CaseItem& it : rep.items)
      if (it.kind == "instance") {
        ++instances;
        EXPECT_TRUE(it.pass) << id << " at " << it.name;
      }
    EXPECT_EQ(instances, 2u) << id;
  }

  // The alternative coefficients run through the same generators.
  bool alt_seen = false;
  for (const CaseItem& it : report("I.3.1").items)
    if (it.kind == "alternative-coefficient") {
      alt_seen = true;
      EXPECT_TRUE(it.pass);
    }
  EXPECT_TRUE(alt_seen);
}

// ---------------------------------------------------------------------------
// Negative controls: corrupted data must fail loudly.

TEST(NegativeControl, CorruptedWorkingFormFailsVerification) {
  std::vector<CaseRecord> cases = builtin_cases();
  CaseRecord& rec = cases[0];
  ASSERT_EQ(rec.id, "I.1");
  ASSERT_EQ(rec.generators[12].name, "X13");
  rec.generators[12].gen.xi = Expr() - rec.generators[12].gen.xi;

  CaseReport rep = verify_case(rec);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(findings_with(rep, "X13").empty());
  EXPECT_FALSE(
      findings_with(rep, "the recorded working form is not a symmetry")
          .empty());
}

TEST(NegativeControl, IncompleteSpanMarkedCompleteFailsClosure) {
  CaseRecord rec;
  rec.id = "T";
  rec.claimed_dim = 2;
  rec.listed_complete = true;
  rec.alpha = Expr();
  rec.beta = Expr();

  GeneratorEntry a;
  a.name = "A";
  a.gen.xi = Expr::from_int(1);
  a.gen.eta = {Expr(), Expr()};
  GeneratorEntry b;
  b.name = "B";
  b.gen.xi = Expr::var("x");
  b.gen.eta = {Expr::var("x") * Expr::var("z") / 2, Expr()};
  rec.generators = {a, b};

  CaseReport rep = verify_case(rec);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(findings_with(rep, "is not in the span").empty());
}

TEST(NegativeControl, RedundantPrintedVariantIsReported) {
  std::vector<CaseRecord> cases = builtin_cases();
  CaseRecord& rec = cases[0];
  // Claim a printed variant identical to the (correct) working form of X15.
  rec.generators[14].printed = rec.generators[14].gen;

  CaseReport rep = verify_case(rec);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(findings_with(rep, "redundant").empty());
}

// ---------------------------------------------------------------------------
// Whole-book classification.

TEST(Classification, DimensionSetAndOverallPass) {
  ClassificationReport rep = classify_casebook(book());
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.cases.size(), 10u);
  EXPECT_EQ(rep.dimension_set, (std::vector<int>{5, 6, 7, 15}));

  size_t errata = 0;
  for (const CaseReport& c : rep.cases)
    for (const std::string& f : c.findings)
      if (f.find("suggested erratum") != std::string::npos) ++errata;
  EXPECT_EQ(errata, 6u);
}
