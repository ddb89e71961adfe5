#pragma once
// Expression language: tokenizer and recursive-descent parser.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | primary ('^' factor)?
//   primary:= INT | '(' expr ')' | 'exp' '(' expr ')' | 'sqrt' '(' expr ')'
//           | 'D' '(' IDENT ',' IDENT ',' INT ')'
//           | IDENT PRIME* | IDENT '(' expr (',' expr)* ')'
//           | IDENT '_{,' LETTERS '}' ( '(' args ')' )?
//
// '^' is right-associative; unary minus binds looser than '^'; '/' is
// ordinary term-level division (exact on rationals, so 3/2 parses to the
// rational 3/2 while 3/2^2 is 3/4). The '_{,xy}' suffix is the comma
// subscript partial-derivative notation for declared opaque functions.

#include <liejet/expr.hpp>

#include <cctype>
#include <map>
#include <string>
#include <vector>

namespace liejet {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Names resolved during parsing: declared opaque functions (signature) and
// algebraic constants (atom carrying its rewrite relation). Anything else is
// a plain variable.
struct ParseContext {
  std::map<std::string, std::vector<std::string>> fns;
  std::map<std::string, Expr> consts;

  ParseContext& declare_fn(const std::string& name,
                           std::vector<std::string> args) {
    fns[name] = std::move(args);
    return *this;
  }
  ParseContext& declare_const(const std::string& name, Expr value) {
    consts.emplace(name, std::move(value));
    return *this;
  }
};

namespace detail {

struct Token {
  enum Kind {
    End,
    Int,
    Ident,
    DIdent,  // name with a '_{,...}' derivative subscript
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Prime,
  } kind = End;
  std::string text;
  std::string subs;  // subscript letters for DIdent
  int line = 1;
  int col = 1;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = Token::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string name = src.substr(i, j - i);
      // Derivative subscript: IDENT ending in '_' immediately before '{,'.
      if (!name.empty() && name.back() == '_' && j + 1 < src.size() &&
          src[j] == '{' && src[j + 1] == ',') {
        size_t k = j + 2;
        std::string subs;
        while (k < src.size() &&
               std::isalpha(static_cast<unsigned char>(src[k])))
          subs += src[k++];
        if (k >= src.size() || src[k] != '}')
          throw ParseError(line, col, "unterminated derivative subscript");
        t.kind = Token::DIdent;
        t.text = name.substr(0, name.size() - 1);
        t.subs = std::move(subs);
        advance(k + 1 - i);
        out.push_back(std::move(t));
        continue;
      }
      t.kind = Token::Ident;
      t.text = std::move(name);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '+': t.kind = Token::Plus; break;
      case '-': t.kind = Token::Minus; break;
      case '*': t.kind = Token::Star; break;
      case '/': t.kind = Token::Slash; break;
      case '^': t.kind = Token::Caret; break;
      case '(': t.kind = Token::LParen; break;
      case ')': t.kind = Token::RParen; break;
      case ',': t.kind = Token::Comma; break;
      case '\'': t.kind = Token::Prime; break;
      default:
        throw ParseError(line, col, std::string("unknown token '") + c + "'");
    }
    t.text = std::string(1, c);
    advance(1);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class ExprParser {
 public:
  ExprParser(std::vector<Token> toks, const ParseContext& ctx)
      : toks_(std::move(toks)), ctx_(ctx) {}

  Expr parse() {
    Expr e = parse_expr();
    expect(Token::End, "end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().col, msg);
  }
  void expect(Token::Kind k, const std::string& what) {
    if (!accept(k)) fail("expected " + what);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept(Token::Plus)) {
        e += parse_term();
      } else if (accept(Token::Minus)) {
        e -= parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept(Token::Star)) {
        e *= parse_factor();
      } else if (accept(Token::Slash)) {
        const Token& at = peek();
        Expr d = parse_factor();
        if (d.is_zero()) throw ParseError(at.line, at.col, "division by zero");
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (accept(Token::Minus)) return -parse_factor();
    Expr base = parse_primary();
    if (accept(Token::Caret)) {
      const Token& at = peek();
      Expr exponent = parse_factor();  // right-associative
      try {
        return pow_expr(base, exponent);
      } catch (const ExprError& e) {
        throw ParseError(at.line, at.col, e.what());
      }
    }
    return base;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Int: {
        next();
        return Expr::from_rational(Rational(t.text));
      }
      case Token::LParen: {
        next();
        Expr e = parse_expr();
        expect(Token::RParen, "')'");
        return e;
      }
      case Token::Ident:
        return parse_ident();
      case Token::DIdent:
        return parse_ident();
      default:
        fail("expected an expression");
    }
  }

  Expr parse_ident() {
    Token t = next();
    if (t.kind == Token::Ident) {
      if (t.text == "exp" && peek().kind == Token::LParen) {
        next();
        Expr a = parse_expr();
        expect(Token::RParen, "')'");
        return exp_of(a);
      }
      if (t.text == "sqrt" && peek().kind == Token::LParen) {
        next();
        Expr a = parse_expr();
        expect(Token::RParen, "')'");
        return sqrt_of(a);
      }
      if (t.text == "D" && peek().kind == Token::LParen) {
        next();
        Token dep = next();
        if (dep.kind != Token::Ident)
          throw ParseError(dep.line, dep.col, "expected dependent name in D()");
        expect(Token::Comma, "','");
        Token ind = next();
        if (ind.kind != Token::Ident)
          throw ParseError(ind.line, ind.col,
                           "expected independent name in D()");
        expect(Token::Comma, "','");
        Token ord = next();
        if (ord.kind != Token::Int)
          throw ParseError(ord.line, ord.col, "expected integer order in D()");
        expect(Token::RParen, "')'");
        return Expr::jet(dep.text, std::stoi(ord.text));
      }
    }
    // Function application.
    if (peek().kind == Token::LParen) {
      next();
      std::vector<std::string> args;
      for (;;) {
        Token a = next();
        if (a.kind != Token::Ident)
          throw ParseError(a.line, a.col,
                           "opaque-function arguments must be plain variables");
        args.push_back(a.text);
        if (accept(Token::Comma)) continue;
        break;
      }
      expect(Token::RParen, "')'");
      auto decl = ctx_.fns.find(t.text);
      if (decl != ctx_.fns.end() && decl->second != args)
        throw ParseError(t.line, t.col,
                         "arguments of " + t.text +
                             " do not match its declaration");
      return make_fn(t, args);
    }
    if (t.kind == Token::DIdent) {
      auto decl = ctx_.fns.find(t.text);
      if (decl == ctx_.fns.end())
        throw ParseError(t.line, t.col,
                         "derivative of undeclared function " + t.text);
      return make_fn(t, decl->second);
    }
    // Primes build jet variables.
    int primes = 0;
    while (accept(Token::Prime)) ++primes;
    if (primes > 0) return Expr::jet(t.text, primes);
    auto cit = ctx_.consts.find(t.text);
    if (cit != ctx_.consts.end()) return cit->second;
    auto fit = ctx_.fns.find(t.text);
    if (fit != ctx_.fns.end())
      return Expr::fn(t.text, fit->second);
    return Expr::var(t.text);
  }

  Expr make_fn(const Token& t, const std::vector<std::string>& args) {
    std::vector<int> derivs(args.size(), 0);
    for (char c : t.subs) {
      std::string name(1, c);
      bool found = false;
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == name) {
          ++derivs[i];
          found = true;
          break;
        }
      }
      if (!found)
        throw ParseError(t.line, t.col,
                         "subscript '" + name + "' is not an argument of " +
                             t.text);
    }
    return Expr::fn_partial(t.text, args, std::move(derivs));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const ParseContext& ctx_;
};

}  // namespace detail

inline Expr parse_expression(const std::string& text,
                             const ParseContext& ctx = {}) {
  return detail::ExprParser(detail::tokenize(text), ctx).parse();
}

}  // namespace liejet
