// Command-line front end.  Every subcommand reads the block-file formats,
// runs one library operation, and emits deterministic text (or key-sorted
// JSON with --json).  Exit codes: 0 all checks pass, 1 a verification
// failed, 2 usage or input error.
#include <CLI11.hpp>

#include <liejet/casebook.hpp>
#include <liejet/reduction.hpp>
#include <liejet/report.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace liejet;

// The coefficient functions of the canonical pair are predeclared so that
// system files may write alpha(x) and beta(x) without a declaration header.
ParseContext cli_context() {
  ParseContext ctx;
  ctx.declare_fn("alpha", {"x"});
  ctx.declare_fn("beta", {"x"});
  return ctx;
}

OdeSystem load_system(const std::string& path) {
  for (const Block& b : read_blocks_file(path))
    if (b.kind == "system") return read_system(b, cli_context());
  throw ExprError(path + " contains no system block");
}

ScalarOde load_scalar(const std::string& path) {
  for (const Block& b : read_blocks_file(path))
    if (b.kind == "scalar") return read_scalar(b, cli_context());
  throw ExprError(path + " contains no scalar block");
}

std::vector<GeneratorEntry> load_generators(
    const std::string& path, const std::vector<std::string>& deps) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.path().extension() == ".gen") found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    for (const auto& p : found) files.push_back(p.string());
  } else {
    files.push_back(path);
  }
  std::vector<GeneratorEntry> out;
  for (const std::string& file : files)
    for (const Block& b : read_blocks_file(file))
      if (b.kind == "generator")
        out.push_back(read_generator(b, deps, cli_context()));
  if (out.empty()) throw ExprError(path + " contains no generator blocks");
  return out;
}

// --param name=value assignments specialize both plain symbols and the
// predeclared coefficient functions of that name.
Bindings param_bindings(const std::vector<std::string>& params) {
  Bindings b;
  for (const std::string& p : params) {
    size_t eq = p.find('=');
    if (eq == std::string::npos)
      throw ExprError("--param expects name=value, got '" + p + "'");
    std::string name = iodetail::trim(p.substr(0, eq));
    if (!iodetail::is_ident(name))
      throw ExprError("--param expects an identifier, got '" + name + "'");
    Expr value = parse_expression(p.substr(eq + 1), cli_context());
    b.bind_var(name, value);
    b.bind_fn(name, value);
  }
  return b;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand runners.

struct Options {
  std::vector<std::string> exprs;
  std::string system_path;
  std::string generator_path;
  std::string equations_path;
  std::string casebook = "builtin";
  std::vector<std::string> params;
  int order = 0;
  bool json = false;
};

Report run_parse(const Options& o) {
  Report rep;
  rep.command = "parse";
  std::ostringstream text;
  for (const std::string& s : o.exprs) {
    Expr e = parse_expression(s, cli_context());
    text << format(e) << "\n";
    rep.items.push_back({s, "expression", {}, format(e)});
  }
  if (!o.system_path.empty()) {
    OdeSystem sys = load_system(o.system_path);
    text << write_system(sys);
    rep.items.push_back({o.system_path, "system", {}, "parsed"});
    if (!o.generator_path.empty())
      for (const GeneratorEntry& entry :
           load_generators(o.generator_path, sys.deps)) {
        text << write_generator(entry, sys.deps);
        rep.items.push_back({entry.name, "generator", {}, "parsed"});
      }
  } else if (!o.generator_path.empty()) {
    throw ExprError("--generator needs --system for the dependent names");
  }
  if (rep.items.empty()) throw ExprError("nothing to parse");
  rep.text = text.str();
  return rep;
}

Report run_check_symmetry(const Options& o) {
  Report rep;
  rep.command = "check-symmetry";
  Bindings b = param_bindings(o.params);
  OdeSystem sys = substitute(load_system(o.system_path), b);
  std::ostringstream text;
  for (const GeneratorEntry& entry :
       load_generators(o.generator_path, sys.deps)) {
    Generator g = substitute(entry.gen, b);
    bool ok = true;
    std::vector<std::string> residuals;
    for (const Expr& r : symmetry_residuals(g, sys)) {
      residuals.push_back(format(r));
      ok = ok && r.is_zero();
    }
    std::string verdict = ok ? "SYMMETRY" : "NOT A SYMMETRY";
    text << entry.name << ": " << verdict
         << " (residuals: " << join(residuals, ", ") << ")\n";
    rep.items.push_back({entry.name, "generator", residuals, verdict});
    if (!ok) {
      rep.pass = false;
      rep.findings.push_back(entry.name + " has nonzero residuals");
    }
  }
  rep.text = text.str();
  return rep;
}

Report run_prolong(const Options& o) {
  Report rep;
  rep.command = "prolong";
  Bindings b = param_bindings(o.params);
  OdeSystem sys = substitute(load_system(o.system_path), b);
  int order = o.order > 0 ? o.order : sys.order;
  std::ostringstream text;
  for (const GeneratorEntry& entry :
       load_generators(o.generator_path, sys.deps)) {
    Generator g = substitute(entry.gen, b);
    ProlongedGenerator pg = prolong(g, sys, order);
    text << entry.name << ":\n";
    text << "  xi: " << format(pg.base.xi) << "\n";
    for (size_t i = 0; i < sys.deps.size(); ++i)
      text << "  eta[" << sys.deps[i] << "]: " << format(pg.base.eta[i])
           << "\n";
    for (int j = 1; j <= pg.order; ++j)
      for (size_t i = 0; i < sys.deps.size(); ++i) {
        std::string name =
            "eta[" + sys.deps[i] + "](" + std::to_string(j) + ")";
        text << "  " << name << ": " << format(pg.coeff[i][j - 1]) << "\n";
        rep.items.push_back({entry.name + " " + name,
                             "prolongation-coefficient",
                             {},
                             format(pg.coeff[i][j - 1])});
      }
  }
  rep.text = text.str();
  return rep;
}

Report run_determine(const Options& o) {
  Report rep;
  rep.command = "determine";
  OdeSystem sys = load_system(o.system_path);
  DeterminingSystem det = determining_system(sys);
  rep.text = render_determining(det);
  for (const DeterminingEquation& eq : det.equations)
    rep.items.push_back({equation_key(eq),
                         "determining-equation",
                         {format(eq.residual, FormatOptions{false})},
                         "= 0"});
  return rep;
}

Report run_match(const Options& o) {
  Report rep;
  rep.command = "match-paper";
  OdeSystem sys = load_system(o.system_path);
  DeterminingSystem det = determining_system(sys);

  ReferenceEquations ref;
  bool found = false;
  std::vector<Block> blocks =
      o.equations_path.empty()
          ? read_blocks(data::determining_reference())
          : read_blocks_file(o.equations_path);
  for (const Block& b : blocks)
    if (b.kind == "equations") {
      ref = read_equations(b);
      found = true;
      break;
    }
  if (!found) throw ExprError("no equations block in the reference input");

  MatchReport mr = match_reference(det, ref);
  rep.text = render_match(mr, det);
  std::istringstream lines(rep.text);
  for (const MatchResult& r : mr.results) {
    std::string line;
    std::getline(lines, line);
    std::string verdict = line.substr(r.label.size() + 2);
    std::vector<std::string> residuals;
    if (!r.matched && r.nearest)
      residuals.push_back(format(r.difference, FormatOptions{false}));
    rep.items.push_back(
        {r.label, "reference-equation", residuals, verdict});
    if (!r.matched) {
      rep.pass = false;
      rep.findings.push_back(line);
    }
  }
  return rep;
}

Report run_commutator(const Options& o) {
  Report rep;
  rep.command = "commutator";
  Bindings b = param_bindings(o.params);
  OdeSystem sys = substitute(load_system(o.system_path), b);
  std::vector<GeneratorEntry> gens =
      load_generators(o.generator_path, sys.deps);
  if (gens.size() < 2)
    throw ExprError("commutator needs two generator blocks");
  Generator left = substitute(gens[0].gen, b);
  Generator right = substitute(gens[1].gen, b);
  GeneratorEntry out;
  out.name = "bracket";
  out.gen = commutator(left, right, sys);
  rep.text = "# [" + gens[0].name + "," + gens[1].name + "]\n" +
             write_generator(out, sys.deps);
  ReportItem item{"[" + gens[0].name + "," + gens[1].name + "]", "bracket",
                  {}, ""};
  item.verdict = "xi = " + format(out.gen.xi);
  for (size_t i = 0; i < sys.deps.size(); ++i)
    item.verdict +=
        ", eta[" + sys.deps[i] + "] = " + format(out.gen.eta[i]);
  rep.items.push_back(std::move(item));
  return rep;
}

Report run_closure(const Options& o) {
  Report rep;
  rep.command = "closure";
  Bindings b = param_bindings(o.params);
  OdeSystem sys = substitute(load_system(o.system_path), b);
  std::vector<GeneratorEntry> entries =
      load_generators(o.generator_path, sys.deps);
  std::vector<Generator> gens;
  std::vector<std::string> names;
  for (const GeneratorEntry& e : entries) {
    gens.push_back(substitute(e.gen, b));
    names.push_back(e.name);
  }
  ClosureReport cr = closure_check(gens, sys);
  std::ostringstream text;
  if (cr.closed) {
    for (const auto& [i, j, coords] : cr.structure) {
      std::string line = render_bracket(names[i], names[j], coords, names);
      text << line << "\n";
      size_t split = line.find(" = ");
      rep.items.push_back({line.substr(0, split), "bracket", {},
                           line.substr(split + 3)});
    }
    text << "closed: all " << cr.structure.size()
         << " brackets stay in the span\n";
  } else {
    auto [i, j] = *cr.counterexample;
    std::string line =
        "[" + names[i] + "," + names[j] + "] leaves the span";
    text << "not closed: " << line << "\n";
    rep.items.push_back({"[" + names[i] + "," + names[j] + "]", "bracket",
                         {}, "NOT IN SPAN"});
    rep.findings.push_back(line);
    rep.pass = false;
  }
  rep.text = text.str();
  return rep;
}

Report run_reduce(const Options& o) {
  Report rep;
  rep.command = "reduce";
  ScalarOde ode = load_scalar(o.system_path);
  OdeSystem sys = scalar_to_system(ode);
  rep.text = write_system(sys);
  for (size_t i = 0; i < sys.deps.size(); ++i)
    rep.items.push_back({sys.deps[i], "equation", {},
                         format(Expr::jet(sys.deps[i], sys.order)) + " = " +
                             format(sys.rhs[i])});
  if (ode.order == 3) {
    // When the input is linear with the two leading lower-derivative
    // coefficients absent, report the canonical coefficient pair as well.
    try {
      ThirdOrderClassification cls = classify_linear_third_order(ode);
      if (cls.eligible)
        rep.findings.push_back("canonical pair with alpha = " +
                               format(cls.alpha) + ", beta = " +
                               format(cls.beta));
    } catch (const ExprError&) {
      // Nonlinear input: the plain jet substitution above is all there is.
    }
  }
  return rep;
}

Report run_classify(const Options& o) {
  Report rep;
  rep.command = "classify";
  std::vector<CaseRecord> records = o.casebook == "builtin"
                                        ? builtin_cases()
                                        : read_casebook_dir(o.casebook);
  ClassificationReport cr = classify_casebook(records);
  rep.pass = cr.pass;
  rep.dimension_set = cr.dimension_set;
  std::ostringstream text;
  for (const CaseReport& c : cr.cases) {
    std::string verdict = "claimed " + std::to_string(c.claimed_dim) +
                          ", verified lower bound " +
                          std::to_string(c.verified_lower_bound) +
                          (c.listed_complete ? ", complete listing closed"
                                             : ", lower bound only");
    if (!c.pass) verdict += ", FAILED";
    text << c.id << ": " << verdict << "\n";
    rep.items.push_back({c.id, "case", {}, verdict});
    for (const std::string& f : c.findings) rep.findings.push_back(f);
  }
  std::string dims;
  for (int d : cr.dimension_set)
    dims += (dims.empty() ? "" : ", ") + std::to_string(d);
  text << "dimension_set: {" << dims << "}\n";
  text << "status: " << (cr.pass ? "pass" : "fail") << "\n";
  rep.text = text.str();
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact symmetry toolkit for third-order equations reducible to the "
      "pair y'' = z', z'' = alpha(x)*y' + beta(x)*z'"};
  app.require_subcommand(1);
  Options o;

  CLI::App* parse_cmd =
      app.add_subcommand("parse", "normalize expressions or block files");
  parse_cmd->add_option("expr", o.exprs, "expressions to normalize");
  parse_cmd->add_option("--system", o.system_path, "system file to echo");
  parse_cmd->add_option("--generator", o.generator_path,
                        "generator file to echo (needs --system)");
  parse_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* check_cmd = app.add_subcommand(
      "check-symmetry", "verify generators against a system");
  check_cmd->add_option("--system", o.system_path, "system file")->required();
  check_cmd->add_option("--generator", o.generator_path,
                        "generator file or directory of .gen files")
      ->required();
  check_cmd->add_option("--param", o.params,
                        "name=value substitution (repeatable)");
  check_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* prolong_cmd =
      app.add_subcommand("prolong", "print prolonged coefficients");
  prolong_cmd->add_option("--system", o.system_path, "system file")
      ->required();
  prolong_cmd->add_option("--generator", o.generator_path, "generator file")
      ->required();
  prolong_cmd->add_option("--order", o.order,
                          "prolongation order (default: system order)");
  prolong_cmd->add_option("--param", o.params,
                          "name=value substitution (repeatable)");
  prolong_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* det_cmd = app.add_subcommand(
      "determine", "derive the determining equations of a system");
  det_cmd->add_option("--system", o.system_path, "system file")->required();
  det_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* match_cmd = app.add_subcommand(
      "match-paper",
      "match derived determining equations against the reference list");
  match_cmd->add_option("--system", o.system_path, "system file")->required();
  match_cmd->add_option("--equations", o.equations_path,
                        "reference equations file (default: bundled list)");
  match_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* comm_cmd = app.add_subcommand(
      "commutator", "bracket of the first two generators in a file");
  comm_cmd->add_option("--system", o.system_path, "system file")->required();
  comm_cmd->add_option("--generator", o.generator_path,
                       "generator file or directory")
      ->required();
  comm_cmd->add_option("--param", o.params,
                       "name=value substitution (repeatable)");
  comm_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* closure_cmd = app.add_subcommand(
      "closure", "check a generator family for bracket closure");
  closure_cmd->add_option("--system", o.system_path, "system file")
      ->required();
  closure_cmd->add_option("--generator", o.generator_path,
                          "generator file or directory")
      ->required();
  closure_cmd->add_option("--param", o.params,
                          "name=value substitution (repeatable)");
  closure_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* reduce_cmd = app.add_subcommand(
      "reduce", "rewrite a scalar equation as a first-derivative pair");
  reduce_cmd->add_option("--system", o.system_path, "scalar equation file")
      ->required();
  reduce_cmd->add_flag("--json", o.json, "emit JSON");

  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "verify the casebook and report the dimension set");
  classify_cmd->add_option("--casebook", o.casebook,
                           "'builtin' or a directory of .case files");
  classify_cmd->add_flag("--json", o.json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Report rep;
    if (app.got_subcommand(parse_cmd)) rep = run_parse(o);
    else if (app.got_subcommand(check_cmd)) rep = run_check_symmetry(o);
    else if (app.got_subcommand(prolong_cmd)) rep = run_prolong(o);
    else if (app.got_subcommand(det_cmd)) rep = run_determine(o);
    else if (app.got_subcommand(match_cmd)) rep = run_match(o);
    else if (app.got_subcommand(comm_cmd)) rep = run_commutator(o);
    else if (app.got_subcommand(closure_cmd)) rep = run_closure(o);
    else if (app.got_subcommand(reduce_cmd)) rep = run_reduce(o);
    else rep = run_classify(o);
    std::cout << render_report(rep, o.json);
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
