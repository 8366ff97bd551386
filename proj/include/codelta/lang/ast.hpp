#pragma once

#include <codelta/lang/type.hpp>
#include <codelta/poly.hpp>
#include <codelta/poly_json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace codelta::lang {

struct Span {
  int line = 1;
  int col = 1;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct Term;
using TermPtr = std::shared_ptr<Term>;

// One node kind per construct, including one per primitive, so the printer
// can reproduce the source form exactly.
struct Term {
  enum class Kind {
    Var,
    Lambda,
    App,
    TensorPair,
    TensorLet,
    BangLit,
    Derelict,
    Coder,
    Weaken,
    Coweaken,
    Contract,
    Cocontract,
    Diff,
    Seely,
    Unseely,
    Sum,
    ScalarLit,
    WithPair,
    Fst,
    Snd,
  };

  Kind kind;
  Span span;

  std::string name;                   // Var, Lambda binder
  std::string let_left, let_right;    // TensorLet binders
  std::optional<TypeExpr> ann;        // Lambda annotation
  TermPtr a, b;                       // children
  std::optional<PolyMap> poly;        // BangLit
  Rational scalar;                    // ScalarLit

  // filled by the typechecker; evaluation requires it
  std::optional<TypeExpr> checked_type;
};

inline TermPtr mk(Term::Kind k, Span sp) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->span = sp;
  return t;
}

// Canonical printing. Parenthesized subterms always print with inner spaces,
// "( f x )", because the three characters "(x)" form the tensor token; the
// spaced form never collides with it.
//
// Levels: 0 term (lambda, let, sum), 1 summand (application), 2 atom.
namespace detail {

inline std::string print_term(const Term& t, int level);

inline std::string print_child(const TermPtr& t, int level) { return print_term(*t, level); }

inline std::string paren(const std::string& inner) { return "( " + inner + " )"; }

// A prim argument printed as the bare variable x would close up into the
// token (x), so it gets inner spaces.
inline std::string prim_arg(const std::string& s) { return s == "x" ? " x " : s; }

inline std::string print_term(const Term& t, int level) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t.name;
    case Term::Kind::ScalarLit:
      return to_string(t.scalar);
    case Term::Kind::Lambda: {
      std::string s = "\\" + t.name + " : " + t.ann->to_string() + " . " + print_child(t.a, 0);
      return level > 0 ? paren(s) : s;
    }
    case Term::Kind::TensorLet: {
      std::string s = "let " + t.let_left + " (x) " + t.let_right + " = " + print_child(t.a, 0) + " in " +
                      print_child(t.b, 0);
      return level > 0 ? paren(s) : s;
    }
    case Term::Kind::Sum: {
      std::string s = print_child(t.a, 1) + " + " + print_child(t.b, 2);
      return level > 1 ? paren(s) : s;
    }
    case Term::Kind::App: {
      std::string s = print_child(t.a, 2) + " " + print_child(t.b, 3);
      return level > 2 ? paren(s) : s;
    }
    case Term::Kind::TensorPair:
      return "( " + print_child(t.a, 0) + " (x) " + print_child(t.b, 0) + " )";
    case Term::Kind::WithPair:
      return "<" + print_child(t.a, 0) + ", " + print_child(t.b, 0) + ">";
    case Term::Kind::BangLit:
      return "bang{" + poly_to_json(*t.poly).dump() + "}";
    case Term::Kind::Derelict:
      return "derelict(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Coder:
      return "coder(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Weaken:
      return "weaken(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Coweaken:
      return "coweaken()";
    case Term::Kind::Contract:
      return "contract(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Cocontract:
      return "cocontract(" + print_child(t.a, 0) + ", " + print_child(t.b, 0) + ")";
    case Term::Kind::Diff:
      return "diff(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Seely:
      return "seely(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Unseely:
      return "unseely(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Fst:
      return "fst(" + prim_arg(print_child(t.a, 0)) + ")";
    case Term::Kind::Snd:
      return "snd(" + prim_arg(print_child(t.a, 0)) + ")";
  }
  return "?";
}

}  // namespace detail

inline std::string print_term(const Term& t) { return detail::print_term(t, 0); }
inline std::string print_term(const TermPtr& t) { return detail::print_term(*t, 0); }

}  // namespace codelta::lang
