// End-to-end tests driving the command line binary: output contracts, exit
// codes, JSON schema, determinism, and the negative controls.
#include <gtest/gtest.h>

#include <liejet/builtin_data.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string out;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  RunResult res;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::string casebook(const std::string& file) {
  return std::string(CASEBOOK_DIR) + "/" + file;
}

// Scratch directory for generated inputs, removed when the test ends.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("liejet_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string strip_spaces(std::string s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\n') out += c;
  return out;
}

}  // namespace

TEST(CheckSymmetry, ContractLineAndExitZero) {
  RunResult r = run_cli("check-symmetry --system " + casebook("caseI1.sys") +
                        " --generator " + casebook("X7.gen"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "X7: SYMMETRY (residuals: 0, 0)\n");
}

TEST(CheckSymmetry, ParamsSpecializeCoefficientFunctions) {
  RunResult r = run_cli("check-symmetry --system " + casebook("canonical.sys") +
                        " --generator " + casebook("X7.gen") +
                        " --param alpha=0 --param beta=0");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "X7: SYMMETRY (residuals: 0, 0)\n");
}

TEST(CheckSymmetry, CorruptedGeneratorFailsWithExitOne) {
  Scratch tmp;
  std::string bad = tmp.write("bad.gen",
                              "generator X13 {\n"
                              "  xi: -(1/2)*x*z\n"
                              "  eta[y]: (1/4)*z*(x*z + 2*y)\n"
                              "  eta[z]: (1/2)*z^2\n"
                              "}\n");
  RunResult r = run_cli("check-symmetry --system " + casebook("caseI1.sys") +
                        " --generator " + bad);
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "X13: NOT A SYMMETRY"));
  EXPECT_FALSE(contains(r.out, "residuals: 0, 0"));
  EXPECT_TRUE(contains(r.out, "findings:"));
}

TEST(CheckSymmetry, DirectoryOfGeneratorFiles) {
  Scratch tmp;
  tmp.write("a_first.gen", "generator X2 { eta[y]: 1 }\n");
  tmp.write("b_second.gen", "generator X5 { eta[y]: z }\n");
  RunResult r = run_cli("check-symmetry --system " + casebook("caseI1.sys") +
                        " --generator " + tmp.dir.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "X2: SYMMETRY (residuals: 0, 0)\nX5: SYMMETRY (residuals: 0, 0)\n");
}

TEST(Determine, EmitsTheFullRowTable) {
  RunResult r = run_cli("determine --system " + casebook("canonical.sys"));
  EXPECT_EQ(r.status, 0);
  size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_GE(lines, 15u);
  EXPECT_TRUE(contains(r.out, "xi_{,yy} = 0"));
  EXPECT_TRUE(contains(r.out, "coeff[y'^2][eq_1]"));
  EXPECT_TRUE(contains(r.out, "coeff[z'^3][eq_2]"));
}

TEST(MatchPaper, FourteenOfFifteenWithNearestRow) {
  RunResult r = run_cli("match-paper --system " + casebook("canonical.sys"));
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "matched 14 of 15"));
  EXPECT_TRUE(contains(
      r.out,
      "R8: NO MATCH; nearest coeff[z'^2][eq_2]; difference: eta2_{,zz}"));
  EXPECT_TRUE(contains(r.out, "R1: MATCH"));
  EXPECT_TRUE(contains(r.out, "R15: MATCH"));
}

TEST(MatchPaper, PerturbedReferenceRowIsDetected) {
  std::string text = liejet::data::determining_reference();
  std::string target = "xi_{,yy} = 0";
  size_t at = text.find(target);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, target.size(), "xi_{,yy} + 1 = 0");

  Scratch tmp;
  std::string path = tmp.write("perturbed.eqs", text);
  RunResult r = run_cli("match-paper --system " + casebook("canonical.sys") +
                        " --equations " + path);
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "R1: NO MATCH"));
}

TEST(Closure, StructureTableForAClosedTriple) {
  Scratch tmp;
  std::string gens = tmp.write("triple.gen",
                               "generator A { eta[y]: 1 }\n"
                               "generator B { eta[z]: 1 }\n"
                               "generator C { eta[y]: z }\n");
  RunResult r = run_cli("closure --system " + casebook("caseI1.sys") +
                        " --generator " + gens);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "[A,B] = 0"));
  EXPECT_TRUE(contains(r.out, "[B,C] = A"));
  EXPECT_TRUE(contains(r.out, "closed: all 3 brackets stay in the span"));
}

TEST(Closure, OpenFamilyExitsOne) {
  Scratch tmp;
  std::string gens = tmp.write("open.gen",
                               "generator X1 { xi: 1 }\n"
                               "generator X8 {\n  xi: x\n"
                               "  eta[y]: (1/2)*x*z\n}\n");
  RunResult r = run_cli("closure --system " + casebook("caseI1.sys") +
                        " --generator " + gens);
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "not closed: [X1,X8] leaves the span"));
}

TEST(Commutator, EmitsTheBracketAsAGeneratorBlock) {
  Scratch tmp;
  std::string gens = tmp.write("pair.gen",
                               "generator X1 { xi: 1 }\n"
                               "generator X8 {\n  xi: x\n"
                               "  eta[y]: (1/2)*x*z\n}\n");
  RunResult r = run_cli("commutator --system " + casebook("caseI1.sys") +
                        " --generator " + gens);
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "# [X1,X8]"));
  EXPECT_TRUE(contains(r.out, "xi: 1"));
  EXPECT_TRUE(contains(r.out, "eta[y]: (1/2)*z"));
}

TEST(Prolong, SecondOrderCoefficients) {
  RunResult r = run_cli("prolong --system " + casebook("caseI1.sys") +
                        " --generator " + casebook("X7.gen"));
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "eta[y](1):"));
  EXPECT_TRUE(contains(r.out, "eta[z](2):"));
}

TEST(Reduce, ScalarFileBecomesAPairFile) {
  RunResult r = run_cli("reduce --system " + casebook("scalar_linear.sys"));
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "eq: y'' = z'"));
  EXPECT_TRUE(contains(r.out, "eq: z'' = alpha(x)*z + beta(x)*z'"));
  EXPECT_TRUE(contains(
      r.out, "canonical pair with alpha = alpha(x), beta = beta(x)"));
}

TEST(Parse, NormalizesExpressions) {
  RunResult r = run_cli(
      "parse \"(y+z)^2 - y^2 - 2*y*z - z^2\" "
      "\"exp(sqrt(a0)*x)*exp(-sqrt(a0)*x)\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "0\n1\n");
}

TEST(Classify, TextReportAndDimensionSet) {
  RunResult r = run_cli("classify --casebook builtin");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(
      r.out, "I.1: claimed 15, verified lower bound 15, complete listing closed"));
  EXPECT_TRUE(contains(
      r.out, "II.2.2: claimed 7, verified lower bound 4, lower bound only"));
  EXPECT_TRUE(contains(r.out, "dimension_set: {5, 6, 7, 15}"));
  EXPECT_TRUE(contains(r.out, "status: pass"));
  EXPECT_TRUE(contains(r.out, "suggested erratum I.1/X10"));
}

TEST(Classify, DirectoryCasebookMatchesBuiltin) {
  RunResult builtin = run_cli("classify --casebook builtin");
  RunResult dir = run_cli("classify --casebook " + std::string(CASEBOOK_DIR));
  EXPECT_EQ(dir.status, 0);
  EXPECT_EQ(builtin.out, dir.out);
}

TEST(Classify, JsonSchema) {
  RunResult r = run_cli("classify --casebook builtin --json");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(strip_spaces(r.out), "\"dimension_set\":[5,6,7,15]"));

  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "classify");
  EXPECT_EQ(j["status"], "pass");
  ASSERT_TRUE(j["items"].is_array());
  EXPECT_EQ(j["items"].size(), 10u);
  for (const auto& item : j["items"]) {
    EXPECT_TRUE(item.contains("name"));
    EXPECT_TRUE(item.contains("kind"));
    EXPECT_TRUE(item.contains("residuals"));
    EXPECT_TRUE(item.contains("verdict"));
  }
  EXPECT_TRUE(j["findings"].is_array());
}

TEST(Json, MirrorsTextContent) {
  RunResult text = run_cli("check-symmetry --system " +
                           casebook("caseI1.sys") + " --generator " +
                           casebook("X7.gen"));
  RunResult json = run_cli("check-symmetry --system " +
                           casebook("caseI1.sys") + " --generator " +
                           casebook("X7.gen") + " --json");
  EXPECT_EQ(json.status, 0);
  nlohmann::json j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["command"], "check-symmetry");
  ASSERT_EQ(j["items"].size(), 1u);
  EXPECT_EQ(j["items"][0]["name"], "X7");
  EXPECT_EQ(j["items"][0]["verdict"], "SYMMETRY");
  EXPECT_EQ(j["items"][0]["residuals"],
            (std::vector<std::string>{"0", "0"}));
  EXPECT_TRUE(contains(text.out, "X7: SYMMETRY"));
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  for (const std::string& cmd :
       {std::string("determine --system ") + casebook("canonical.sys"),
        std::string("classify --casebook builtin --json"),
        std::string("match-paper --system ") + casebook("canonical.sys")}) {
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_EQ(a.status, b.status) << cmd;
  }
}

TEST(Usage, ErrorsExitTwo) {
  EXPECT_EQ(run_cli("").status, 2);
  EXPECT_EQ(run_cli("frobnicate").status, 2);
  EXPECT_EQ(run_cli("determine").status, 2);               // missing --system
  EXPECT_EQ(run_cli("determine --bogus x").status, 2);     // unknown flag
  EXPECT_EQ(run_cli("determine --system /nonexistent.sys").status, 2);

  Scratch tmp;
  std::string bad = tmp.write("bad.sys", "system { indep: x\n");
  RunResult r = run_cli("determine --system " + bad);
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(contains(r.out, "error:"));
}

TEST(Usage, HelpExitsZero) {
  RunResult r = run_cli("--help");
  EXPECT_EQ(r.status, 0);
  for (const char* sub : {"parse", "check-symmetry", "prolong", "determine",
                          "match-paper", "commutator", "closure", "reduce",
                          "classify"})
    EXPECT_TRUE(contains(r.out, sub)) << sub;
}
