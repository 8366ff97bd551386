#pragma once

#include <codelta/json_util.hpp>
#include <codelta/lang/lexer.hpp>

#include <string>
#include <vector>

namespace codelta::lang {

class Parser {
 public:
  explicit Parser(const std::string& text, int start_line = 1) : toks_(Lexer(text, start_line).run()) {}

  TermPtr parse_term_all() {
    TermPtr t = parse_term();
    expect(Token::Kind::End);
    return t;
  }

  TypeExpr parse_type_all() {
    TypeExpr t = parse_type();
    expect(Token::Kind::End);
    return t;
  }

  // declaration pieces: name ':' type '=' term
  std::string expect_decl_name() { return expect(Token::Kind::Ident).text; }
  TypeExpr parse_decl_type() {
    expect(Token::Kind::Colon);
    return parse_type();
  }
  TermPtr parse_decl_body() {
    expect(Token::Kind::Equals);
    TermPtr t = parse_term();
    expect(Token::Kind::End);
    return t;
  }

  // term := lambda | tensor-let | sum
  TermPtr parse_term() {
    const Token& tok = peek();
    if (tok.kind == Token::Kind::Backslash) {
      Span sp = tok.span;
      next();
      std::string name = expect(Token::Kind::Ident).text;
      expect(Token::Kind::Colon);
      TypeExpr ty = parse_type();
      expect(Token::Kind::Dot);
      TermPtr body = parse_term();
      TermPtr t = mk(Term::Kind::Lambda, sp);
      t->name = std::move(name);
      t->ann = std::move(ty);
      t->a = std::move(body);
      return t;
    }
    if (tok.kind == Token::Kind::KwLet) {
      Span sp = tok.span;
      next();
      std::string lx = expect(Token::Kind::Ident).text;
      expect(Token::Kind::Tensor);
      std::string ly = expect(Token::Kind::Ident).text;
      expect(Token::Kind::Equals);
      TermPtr rhs = parse_term();
      expect(Token::Kind::KwIn);
      TermPtr body = parse_term();
      TermPtr t = mk(Term::Kind::TensorLet, sp);
      t->let_left = std::move(lx);
      t->let_right = std::move(ly);
      t->a = std::move(rhs);
      t->b = std::move(body);
      return t;
    }
    return parse_sum();
  }

 private:
  TermPtr parse_sum() {
    TermPtr t = parse_tensor();
    while (peek().kind == Token::Kind::Plus) {
      Span sp = peek().span;
      next();
      TermPtr rhs = parse_tensor();
      TermPtr s = mk(Term::Kind::Sum, sp);
      s->a = std::move(t);
      s->b = std::move(rhs);
      t = std::move(s);
    }
    return t;
  }

  TermPtr parse_tensor() {
    TermPtr t = parse_app();
    while (peek().kind == Token::Kind::Tensor) {
      Span sp = peek().span;
      next();
      TermPtr rhs = parse_app();
      TermPtr p = mk(Term::Kind::TensorPair, sp);
      p->a = std::move(t);
      p->b = std::move(rhs);
      t = std::move(p);
    }
    return t;
  }

  static bool starts_atom(Token::Kind k) {
    switch (k) {
      case Token::Kind::Ident:
      case Token::Kind::RatLit:
      case Token::Kind::LParen:
      case Token::Kind::Lt:
      case Token::Kind::BangBlob:
      case Token::Kind::KwCoder:
      case Token::Kind::KwDerelict:
      case Token::Kind::KwWeaken:
      case Token::Kind::KwCoweaken:
      case Token::Kind::KwContract:
      case Token::Kind::KwCocontract:
      case Token::Kind::KwDiff:
      case Token::Kind::KwSeely:
      case Token::Kind::KwUnseely:
      case Token::Kind::KwFst:
      case Token::Kind::KwSnd:
        return true;
      default:
        return false;
    }
  }

  TermPtr parse_app() {
    TermPtr t = parse_atom();
    while (starts_atom(peek().kind)) {
      Span sp = peek().span;
      TermPtr arg = parse_atom();
      TermPtr a = mk(Term::Kind::App, sp);
      a->a = std::move(t);
      a->b = std::move(arg);
      t = std::move(a);
    }
    return t;
  }

  TermPtr unary(Term::Kind k) {
    Span sp = peek().span;
    next();
    expect(Token::Kind::LParen);
    TermPtr inner = parse_term();
    expect(Token::Kind::RParen);
    TermPtr t = mk(k, sp);
    t->a = std::move(inner);
    return t;
  }

  TermPtr parse_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Token::Kind::Ident: {
        TermPtr t = mk(Term::Kind::Var, tok.span);
        t->name = tok.text;
        next();
        return t;
      }
      case Token::Kind::RatLit: {
        TermPtr t = mk(Term::Kind::ScalarLit, tok.span);
        t->scalar = tok.rat;
        next();
        return t;
      }
      case Token::Kind::BangBlob: {
        TermPtr t = mk(Term::Kind::BangLit, tok.span);
        try {
          t->poly = poly_from_json(parse_json_strict(tok.text));
        } catch (const std::exception& e) {
          throw LangError("syntax", tok.span, std::string("bad polynomial literal: ") + e.what());
        }
        next();
        return t;
      }
      case Token::Kind::KwCoder:
        return unary(Term::Kind::Coder);
      case Token::Kind::KwDerelict:
        return unary(Term::Kind::Derelict);
      case Token::Kind::KwWeaken:
        return unary(Term::Kind::Weaken);
      case Token::Kind::KwContract:
        return unary(Term::Kind::Contract);
      case Token::Kind::KwDiff:
        return unary(Term::Kind::Diff);
      case Token::Kind::KwSeely:
        return unary(Term::Kind::Seely);
      case Token::Kind::KwUnseely:
        return unary(Term::Kind::Unseely);
      case Token::Kind::KwFst:
        return unary(Term::Kind::Fst);
      case Token::Kind::KwSnd:
        return unary(Term::Kind::Snd);
      case Token::Kind::KwCoweaken: {
        Span sp = tok.span;
        next();
        expect(Token::Kind::LParen);
        expect(Token::Kind::RParen);
        return mk(Term::Kind::Coweaken, sp);
      }
      case Token::Kind::KwCocontract: {
        Span sp = tok.span;
        next();
        expect(Token::Kind::LParen);
        TermPtr a = parse_term();
        expect(Token::Kind::Comma);
        TermPtr b = parse_term();
        expect(Token::Kind::RParen);
        TermPtr t = mk(Term::Kind::Cocontract, sp);
        t->a = std::move(a);
        t->b = std::move(b);
        return t;
      }
      case Token::Kind::Lt: {
        Span sp = tok.span;
        next();
        TermPtr a = parse_term();
        expect(Token::Kind::Comma);
        TermPtr b = parse_term();
        expect(Token::Kind::Gt);
        TermPtr t = mk(Term::Kind::WithPair, sp);
        t->a = std::move(a);
        t->b = std::move(b);
        return t;
      }
      case Token::Kind::LParen: {
        next();
        TermPtr a = parse_term();
        expect(Token::Kind::RParen);
        return a;
      }
      default:
        throw LangError("syntax", tok.span,
                        std::string("expected a term, found ") + token_name(tok.kind));
    }
  }

  // type := with ("-o" type)?   right associative arrow
  TypeExpr parse_type() {
    TypeExpr t = parse_type_with();
    if (peek().kind == Token::Kind::Lolli) {
      next();
      return TypeExpr::lolli(std::move(t), parse_type());
    }
    return t;
  }

  TypeExpr parse_type_with() {
    TypeExpr t = parse_type_tensor();
    while (peek().kind == Token::Kind::Amp) {
      next();
      t = TypeExpr::with(std::move(t), parse_type_tensor());
    }
    return t;
  }

  TypeExpr parse_type_tensor() {
    TypeExpr t = parse_type_atom();
    while (peek().kind == Token::Kind::Tensor) {
      next();
      t = TypeExpr::tensor(std::move(t), parse_type_atom());
    }
    return t;
  }

  TypeExpr parse_type_atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Token::Kind::UnitType:
        next();
        return TypeExpr::unit();
      case Token::Kind::RealType: {
        int n = tok.nat;
        Span sp = tok.span;
        next();
        if (n <= 0) throw LangError("syntax", sp, "dimension must be positive");
        return TypeExpr::real(n);
      }
      case Token::Kind::BangSym:
        next();
        return TypeExpr::bang(parse_type_atom());
      case Token::Kind::LParen: {
        next();
        TypeExpr t = parse_type();
        expect(Token::Kind::RParen);
        return t;
      }
      default:
        throw LangError("syntax", tok.span,
                        std::string("expected a type, found ") + token_name(tok.kind));
    }
  }

  const Token& peek() const { return toks_[idx_]; }
  const Token& next() { return toks_[idx_++]; }
  const Token& expect(Token::Kind k) {
    if (peek().kind != k)
      throw LangError("syntax", peek().span,
                      std::string("expected ") + token_name(k) + ", found " + token_name(peek().kind));
    return next();
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

inline TermPtr parse_term_text(const std::string& text) { return Parser(text).parse_term_all(); }
inline TypeExpr parse_type_text(const std::string& text) { return Parser(text).parse_type_all(); }

// One declaration: name : type = term. Files hold one per line, with blank
// lines and # comments allowed.
struct Declaration {
  std::string name;
  TypeExpr declared;
  TermPtr body;
  int line = 1;
};

inline std::vector<Declaration> parse_declarations(const std::string& text) {
  std::vector<Declaration> out;
  std::size_t start = 0;
  int line_no = 1;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    std::size_t hash = stripped.find('#');
    if (hash != std::string::npos) stripped = stripped.substr(0, hash);
    bool blank = stripped.find_first_not_of(" \t") == std::string::npos;
    if (!blank) {
      Parser p(line, line_no);
      Declaration d;
      d.line = line_no;
      try {
        d.name = p.expect_decl_name();
        d.declared = p.parse_decl_type();
        d.body = p.parse_decl_body();
      } catch (const LangError& e) {
        throw LangError(e.error_kind(), e.span(),
                        e.message() + (d.name.empty() ? std::string() : " (declaration '" + d.name + "')"));
      }
      out.push_back(std::move(d));
    }
    if (end == std::string::npos) break;
    start = end + 1;
    ++line_no;
  }
  return out;
}

}  // namespace codelta::lang
