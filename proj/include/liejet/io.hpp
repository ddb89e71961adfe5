#pragma once
// Block-structured data files for ODE systems, scalar equations, vector-field
// generators, and labelled equation lists.
//
// Grammar ('#' starts a comment running to end of line):
//
//   system {
//     indep: x
//     dep: y, z
//     eq: y'' = z'
//     eq: z'' = alpha(x)*y' + beta(x)*z'
//   }
//
//   generator X7 {
//     xi: z
//     eta[y]: (1/2)*z^2
//     eta[z]: 0
//   }
//
// A `scalar` block is a system block with one dependent variable.  An
// `equations` block declares opaque functions (`unknown:`/`function:`) and
// lists labelled expressions `eq[R1]: EXPR = 0` that are required to vanish.
// A generator block may carry `xi_printed:` / `eta_printed[y]:` fields
// recording a published variant of a coefficient next to the working form.

#include <liejet/ode.hpp>
#include <liejet/parse.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

namespace liejet {

struct Field {
  std::string key;    // identifier before ':'
  std::string label;  // bracketed tag inside the key, eta[y] -> "y"
  std::string value;  // raw text after ':' up to the next field
  int line = 1;
};

struct Block {
  std::string kind;
  std::string name;
  std::vector<Field> fields;
  int line = 1;

  const Field* find(const std::string& key, const std::string& label = "") const {
    for (const auto& f : fields)
      if (f.key == key && f.label == label) return &f;
    return nullptr;
  }
  std::vector<const Field*> all(const std::string& key) const {
    std::vector<const Field*> out;
    for (const auto& f : fields)
      if (f.key == key) out.push_back(&f);
    return out;
  }
  const Field& need(const std::string& key, const std::string& label = "") const {
    if (const Field* f = find(key, label)) return *f;
    throw ParseError(line, 1,
                     "block '" + kind + (name.empty() ? "" : " " + name) +
                         "' is missing the field '" + key +
                         (label.empty() ? "" : "[" + label + "]") + "'");
  }
};

namespace iodetail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

inline std::vector<std::string> split_top_level(const std::string& s,
                                                char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

inline std::vector<Field> parse_fields(const std::string& body, int base_line,
                                       const std::string& where) {
  std::vector<int> line_at(body.size() + 1);
  int line = base_line;
  for (size_t i = 0; i < body.size(); ++i) {
    line_at[i] = line;
    if (body[i] == '\n') ++line;
  }
  line_at[body.size()] = line;

  struct KeyPos {
    size_t start, colon;
    std::string key, label;
  };
  std::vector<KeyPos> keys;
  int depth = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c != ':' || depth != 0) continue;
    size_t j = i;
    std::string label;
    if (j > 0 && body[j - 1] == ']') {
      size_t lb = body.rfind('[', j - 1);
      if (lb == std::string::npos)
        throw ParseError(line_at[i], 1, where + ": unmatched ']' in field key");
      label = trim(body.substr(lb + 1, j - 2 - lb));
      j = lb;
    }
    size_t key_end = j;
    while (j > 0 && ident_char(body[j - 1])) --j;
    std::string key = body.substr(j, key_end - j);
    if (key.empty())
      throw ParseError(line_at[i], 1, where + ": ':' without a field name");
    keys.push_back({j, i, key, label});
  }
  if (keys.empty()) {
    if (!trim(body).empty())
      throw ParseError(base_line, 1, where + ": text outside any field");
    return {};
  }
  if (!trim(body.substr(0, keys.front().start)).empty())
    throw ParseError(base_line, 1, where + ": text before the first field");

  std::vector<Field> fields;
  for (size_t k = 0; k < keys.size(); ++k) {
    size_t vbeg = keys[k].colon + 1;
    size_t vend = k + 1 < keys.size() ? keys[k + 1].start : body.size();
    fields.push_back({keys[k].key, keys[k].label,
                      trim(body.substr(vbeg, vend - vbeg)),
                      line_at[keys[k].start]});
  }
  return fields;
}

}  // namespace iodetail

inline std::vector<Block> read_blocks(std::string text) {
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    while (i < text.size() && text[i] != '\n') text[i++] = ' ';
    if (i == text.size()) break;
  }

  std::vector<Block> blocks;
  size_t i = 0;
  int line = 1;
  auto skip_ws = [&] {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      if (text[i] == '\n') ++line;
      ++i;
    }
  };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    Block b;
    b.line = line;
    size_t k0 = i;
    while (i < text.size() && iodetail::ident_char(text[i])) ++i;
    b.kind = text.substr(k0, i - k0);
    if (b.kind.empty())
      throw ParseError(line, 1, "expected a block keyword");
    size_t n0 = i;
    while (i < text.size() && text[i] != '{' && text[i] != '\n') ++i;
    b.name = iodetail::trim(text.substr(n0, i - n0));
    if (i < text.size() && text[i] == '\n') {
      skip_ws();
    }
    if (i >= text.size() || text[i] != '{')
      throw ParseError(line, 1, "expected '{' after '" + b.kind + "'");
    ++i;  // past '{'
    int body_line = line;
    size_t b0 = i;
    while (i < text.size() && text[i] != '}') {
      // '_{,xy}' derivative subscripts carry braces of their own.
      if (text[i] == '_' && i + 1 < text.size() && text[i + 1] == '{') {
        i += 2;
        while (i < text.size() && text[i] != '}') {
          if (text[i] == '\n') ++line;
          ++i;
        }
        if (i >= text.size()) break;
        ++i;
        continue;
      }
      if (text[i] == '{')
        throw ParseError(line, 1, "blocks do not nest");
      if (text[i] == '\n') ++line;
      ++i;
    }
    if (i >= text.size())
      throw ParseError(b.line, 1, "unterminated block '" + b.kind + "'");
    b.fields = iodetail::parse_fields(text.substr(b0, i - b0), body_line,
                                      b.kind);
    ++i;  // past '}'
    blocks.push_back(std::move(b));
  }
  return blocks;
}

inline std::vector<Block> read_blocks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return read_blocks(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line, e.col, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Field-level helpers.

inline Expr parse_field_expr(const Field& f, const ParseContext& ctx = {}) {
  try {
    return parse_expression(f.value, ctx);
  } catch (const ParseError& e) {
    throw ParseError(f.line, e.col,
                     "in field '" + f.key + "': " + e.what());
  }
}

// "LHS = RHS"; the right side defaults to 0 when absent.
inline std::pair<Expr, Expr> parse_field_equation(const Field& f,
                                                  const ParseContext& ctx = {}) {
  auto sides = iodetail::split_top_level(f.value, '=');
  if (sides.size() > 2)
    throw ParseError(f.line, 1, "field '" + f.key + "' has more than one '='");
  try {
    Expr lhs = parse_expression(sides[0], ctx);
    Expr rhs = sides.size() == 2 ? parse_expression(sides[1], ctx) : Expr();
    return {lhs, rhs};
  } catch (const ParseError& e) {
    throw ParseError(f.line, e.col,
                     "in field '" + f.key + "': " + e.what());
  }
}

// name = EXPR, name = EXPR, ...
inline std::vector<std::pair<std::string, Expr>> parse_field_assignments(
    const Field& f, const ParseContext& ctx = {}) {
  std::vector<std::pair<std::string, Expr>> out;
  for (const auto& part : iodetail::split_top_level(f.value, ',')) {
    auto sides = iodetail::split_top_level(part, '=');
    if (sides.size() != 2 || !iodetail::is_ident(sides[0]))
      throw ParseError(f.line, 1,
                       "field '" + f.key + "' expects 'name = value' pairs");
    try {
      out.emplace_back(sides[0], parse_expression(sides[1], ctx));
    } catch (const ParseError& e) {
      throw ParseError(f.line, e.col,
                       "in field '" + f.key + "': " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// System and scalar-equation blocks.

namespace iodetail {

// The left side of an `eq:` field must be a bare jet like y'' or D(y,x,3).
inline std::pair<std::string, int> lhs_jet(const Expr& e, int line) {
  if (e.is_polynomial() && e.num().size() == 1) {
    const auto& [mono, coeff] = *e.num().begin();
    if (coeff == 1 && mono.size() == 1 && mono[0].second == 1 &&
        mono[0].first.kind == AtomKind::Jet)
      return {mono[0].first.name, mono[0].first.order};
  }
  throw ParseError(line, 1,
                   "left side of 'eq' must be a single derivative like y''");
}

}  // namespace iodetail

inline OdeSystem read_system(const Block& b, const ParseContext& ctx = {}) {
  if (b.kind != "system")
    throw ParseError(b.line, 1, "expected a 'system' block, got '" + b.kind + "'");
  OdeSystem sys;
  sys.indep = iodetail::trim(b.need("indep").value);
  if (!iodetail::is_ident(sys.indep))
    throw ParseError(b.need("indep").line, 1, "bad independent variable name");
  for (const auto& d : iodetail::split_top_level(b.need("dep").value, ',')) {
    if (!iodetail::is_ident(d))
      throw ParseError(b.need("dep").line, 1, "bad dependent variable name");
    sys.deps.push_back(d);
  }
  sys.rhs.assign(sys.deps.size(), Expr());
  std::vector<bool> seen(sys.deps.size(), false);
  int order = -1;
  for (const Field* f : b.all("eq")) {
    auto [lhs, rhs] = parse_field_equation(*f, ctx);
    auto [dep, ord] = iodetail::lhs_jet(lhs, f->line);
    auto it = std::find(sys.deps.begin(), sys.deps.end(), dep);
    if (it == sys.deps.end())
      throw ParseError(f->line, 1, "'" + dep + "' is not a declared dependent");
    size_t idx = static_cast<size_t>(it - sys.deps.begin());
    if (seen[idx])
      throw ParseError(f->line, 1, "duplicate equation for '" + dep + "'");
    if (order != -1 && ord != order)
      throw ParseError(f->line, 1, "all equations must have the same order");
    order = ord;
    seen[idx] = true;
    sys.rhs[idx] = rhs;
  }
  for (size_t k = 0; k < seen.size(); ++k)
    if (!seen[k])
      throw ParseError(b.line, 1, "missing equation for '" + sys.deps[k] + "'");
  sys.order = order;
  try {
    validate(sys);
  } catch (const ExprError& e) {
    throw ParseError(b.line, 1, e.what());
  }
  return sys;
}

inline ScalarOde read_scalar(const Block& b, const ParseContext& ctx = {}) {
  if (b.kind != "scalar")
    throw ParseError(b.line, 1, "expected a 'scalar' block, got '" + b.kind + "'");
  ScalarOde ode;
  ode.indep = iodetail::trim(b.need("indep").value);
  ode.dep = iodetail::trim(b.need("dep").value);
  if (!iodetail::is_ident(ode.indep) || !iodetail::is_ident(ode.dep))
    throw ParseError(b.line, 1, "bad variable name");
  const Field& f = b.need("eq");
  auto [lhs, rhs] = parse_field_equation(f, ctx);
  auto [dep, ord] = iodetail::lhs_jet(lhs, f.line);
  if (dep != ode.dep)
    throw ParseError(f.line, 1, "'" + dep + "' is not the declared dependent");
  ode.order = ord;
  ode.rhs = rhs;
  try {
    validate(ode);
  } catch (const ExprError& e) {
    throw ParseError(b.line, 1, e.what());
  }
  return ode;
}

// ---------------------------------------------------------------------------
// Generator blocks.

struct GeneratorEntry {
  std::string name;
  Generator gen;                     // working form
  std::optional<Generator> printed;  // published variant, when recorded
};

inline GeneratorEntry read_generator(const Block& b,
                                     const std::vector<std::string>& deps,
                                     const ParseContext& ctx = {}) {
  if (b.kind != "generator")
    throw ParseError(b.line, 1,
                     "expected a 'generator' block, got '" + b.kind + "'");
  if (b.name.empty())
    throw ParseError(b.line, 1, "generator blocks need a name");
  GeneratorEntry entry;
  entry.name = b.name;
  entry.gen.eta.assign(deps.size(), Expr());
  if (const Field* f = b.find("xi")) entry.gen.xi = parse_field_expr(*f, ctx);
  for (size_t i = 0; i < deps.size(); ++i)
    if (const Field* f = b.find("eta", deps[i]))
      entry.gen.eta[i] = parse_field_expr(*f, ctx);

  Generator printed = entry.gen;
  bool differs = false;
  if (const Field* f = b.find("xi_printed")) {
    printed.xi = parse_field_expr(*f, ctx);
    differs = true;
  }
  for (size_t i = 0; i < deps.size(); ++i)
    if (const Field* f = b.find("eta_printed", deps[i])) {
      printed.eta[i] = parse_field_expr(*f, ctx);
      differs = true;
    }
  if (differs) entry.printed = printed;

  for (const auto& f : b.fields) {
    bool known = f.key == "xi" || f.key == "eta" || f.key == "xi_printed" ||
                 f.key == "eta_printed";
    if (!known)
      throw ParseError(f.line, 1, "unknown generator field '" + f.key + "'");
    if ((f.key == "eta" || f.key == "eta_printed") &&
        std::find(deps.begin(), deps.end(), f.label) == deps.end())
      throw ParseError(f.line, 1, "'" + f.label + "' is not a dependent");
  }
  return entry;
}

// ---------------------------------------------------------------------------
// Labelled equation lists.

struct ReferenceEquations {
  ParseContext ctx;
  std::vector<std::pair<std::string, Expr>> equations;  // label, lhs - rhs
};

inline ReferenceEquations read_equations(const Block& b) {
  if (b.kind != "equations")
    throw ParseError(b.line, 1,
                     "expected an 'equations' block, got '" + b.kind + "'");
  ReferenceEquations ref;
  auto declare = [&](const Field* f) {
    const std::string& v = f->value;
    size_t p = v.find('(');
    if (p == std::string::npos || v.back() != ')')
      throw ParseError(f->line, 1, "declaration must look like name(x, y)");
    std::string name = iodetail::trim(v.substr(0, p));
    std::vector<std::string> args;
    for (const auto& a : iodetail::split_top_level(
             v.substr(p + 1, v.size() - p - 2), ','))
      args.push_back(a);
    if (!iodetail::is_ident(name))
      throw ParseError(f->line, 1, "bad function name '" + name + "'");
    for (const auto& a : args)
      if (!iodetail::is_ident(a))
        throw ParseError(f->line, 1, "bad argument name '" + a + "'");
    ref.ctx.declare_fn(name, args);
  };
  for (const Field* f : b.all("unknown")) declare(f);
  for (const Field* f : b.all("function")) declare(f);
  for (const Field* f : b.all("eq")) {
    if (f->label.empty())
      throw ParseError(f->line, 1, "equation fields need a label: eq[R1]: ...");
    auto [lhs, rhs] = parse_field_equation(*f, ref.ctx);
    ref.equations.emplace_back(f->label, lhs - rhs);
  }
  for (const auto& f : b.fields)
    if (f.key != "unknown" && f.key != "function" && f.key != "eq")
      throw ParseError(f.line, 1, "unknown equations field '" + f.key + "'");
  return ref;
}

// ---------------------------------------------------------------------------
// Writers.  read(write(x)) reproduces x.

inline std::string write_system(const OdeSystem& sys) {
  std::ostringstream o;
  o << "system {\n  indep: " << sys.indep << "\n  dep: ";
  for (size_t i = 0; i < sys.deps.size(); ++i)
    o << (i ? ", " : "") << sys.deps[i];
  o << "\n";
  for (size_t i = 0; i < sys.deps.size(); ++i)
    o << "  eq: " << format(Expr::jet(sys.deps[i], sys.order)) << " = "
      << format(sys.rhs[i]) << "\n";
  o << "}\n";
  return o.str();
}

inline std::string write_scalar(const ScalarOde& ode) {
  std::ostringstream o;
  o << "scalar {\n  indep: " << ode.indep << "\n  dep: " << ode.dep
    << "\n  eq: " << format(Expr::jet(ode.dep, ode.order)) << " = "
    << format(ode.rhs) << "\n}\n";
  return o.str();
}

inline std::string write_generator(const GeneratorEntry& entry,
                                   const std::vector<std::string>& deps) {
  std::ostringstream o;
  o << "generator " << entry.name << " {\n";
  o << "  xi: " << format(entry.gen.xi) << "\n";
  for (size_t i = 0; i < deps.size(); ++i)
    o << "  eta[" << deps[i] << "]: " << format(entry.gen.eta[i]) << "\n";
  if (entry.printed) {
    if (!(entry.printed->xi - entry.gen.xi).is_zero())
      o << "  xi_printed: " << format(entry.printed->xi) << "\n";
    for (size_t i = 0; i < deps.size(); ++i)
      if (!(entry.printed->eta[i] - entry.gen.eta[i]).is_zero())
        o << "  eta_printed[" << deps[i]
          << "]: " << format(entry.printed->eta[i]) << "\n";
  }
  o << "}\n";
  return o.str();
}

}  // namespace liejet
