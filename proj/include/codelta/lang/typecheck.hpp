#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "codelta/lang/ast.hpp"
#include "codelta/lang/lexer.hpp"
#include "codelta/lang/type.hpp"

namespace codelta::lang {

// Variables fall into two zones. Lambda and tensor-let binders are linear:
// each must be used exactly once along every multiplicative path, and
// duplication or discarding has to go through contract/weaken explicitly.
// Names supplied from outside (an environment file, or earlier declarations)
// are exponential and may be used any number of times.
struct Binding {
  TypeExpr type;
  bool exponential;
  int id;  // unique per linear binder, 0 for exponential names
};

class Checker {
 public:
  Checker() = default;
  explicit Checker(std::map<std::string, TypeExpr> env) {
    for (auto& [name, ty] : env) ctx_.emplace(name, Binding{ty, true, 0});
  }

  // Infers the type, writes checked_type on every node, and requires every
  // type to come out fully determined.
  TypeExpr check(Term& t) {
    auto [ty, usage] = infer(t);
    (void)usage;
    resolve(t);
    return subst_.apply(ty);
  }

  // Same, but the inferred type must also match a declared one. The match is
  // allowed to pin down metavariables the term alone leaves open (this is how
  // a bare coweaken() learns its target space).
  TypeExpr check(Term& t, const TypeExpr& declared) {
    auto [ty, usage] = infer(t);
    (void)usage;
    if (!subst_.unify(ty, declared)) {
      throw LangError("type", t.span,
                      "term has type " + subst_.apply(ty).to_string() + " but is declared " +
                          declared.to_string());
    }
    resolve(t);
    return subst_.apply(ty);
  }

 private:
  using Usage = std::set<int>;

  TypeExpr fresh() { return TypeExpr::meta(next_meta_++); }

  std::string usage_name(int id) const {
    auto it = id_names_.find(id);
    return it == id_names_.end() ? "?" : it->second;
  }

  // Multiplicative combination: the two sides must use disjoint sets of
  // linear variables.
  Usage merge_disjoint(const Usage& u1, const Usage& u2, const Span& sp, const std::string& what) {
    for (int id : u2) {
      if (u1.count(id)) {
        throw LangError("type", sp,
                        "linear variable '" + usage_name(id) + "' is used on both sides of " + what);
      }
    }
    Usage out = u1;
    out.insert(u2.begin(), u2.end());
    return out;
  }

  // Additive combination: both sides must use exactly the same linear
  // variables.
  void require_equal(const Usage& u1, const Usage& u2, const Span& sp, const std::string& what) {
    if (u1 == u2) return;
    for (int id : u1) {
      if (!u2.count(id)) {
        throw LangError("type", sp,
                        "linear variable '" + usage_name(id) + "' is used in only one branch of " + what);
      }
    }
    for (int id : u2) {
      if (!u1.count(id)) {
        throw LangError("type", sp,
                        "linear variable '" + usage_name(id) + "' is used in only one branch of " + what);
      }
    }
  }

  void must_unify(const TypeExpr& a, const TypeExpr& b, const Span& sp, const std::string& what) {
    if (!subst_.unify(a, b)) {
      throw LangError("type", sp,
                      what + ": cannot match " + subst_.apply(a).to_string() + " with " +
                          subst_.apply(b).to_string());
    }
  }

  struct ScopedBinding {
    ScopedBinding(Checker& c, const std::string& name, TypeExpr ty, int id) : c_(c), name_(name) {
      auto it = c_.ctx_.find(name_);
      if (it != c_.ctx_.end()) {
        shadowed_ = it->second;
        it->second = Binding{std::move(ty), false, id};
      } else {
        c_.ctx_.emplace(name_, Binding{std::move(ty), false, id});
      }
    }
    ~ScopedBinding() {
      auto it = c_.ctx_.find(name_);
      if (shadowed_) {
        it->second = *shadowed_;
      } else {
        c_.ctx_.erase(it);
      }
    }
    Checker& c_;
    std::string name_;
    std::optional<Binding> shadowed_;
  };

  int bind_linear(const std::string& name) {
    int id = next_id_++;
    id_names_[id] = name;
    return id;
  }

  void require_used(const Usage& u, int id, const Span& sp) {
    if (!u.count(id)) {
      throw LangError("type", sp, "linear variable '" + usage_name(id) + "' is never used");
    }
  }

  std::pair<TypeExpr, Usage> infer(Term& t) {
    auto out = infer_node(t);
    t.checked_type = out.first;
    return out;
  }

  std::pair<TypeExpr, Usage> infer_node(Term& t) {
    switch (t.kind) {
      case Term::Kind::Var: {
        auto it = ctx_.find(t.name);
        if (it == ctx_.end()) throw LangError("type", t.span, "unbound variable '" + t.name + "'");
        const Binding& b = it->second;
        Usage u;
        if (!b.exponential) u.insert(b.id);
        return {b.type, u};
      }

      case Term::Kind::Lambda: {
        int id = bind_linear(t.name);
        TypeExpr arg = *t.ann;
        std::pair<TypeExpr, Usage> body;
        {
          ScopedBinding sb(*this, t.name, arg, id);
          body = infer(*t.a);
        }
        require_used(body.second, id, t.span);
        body.second.erase(id);
        return {TypeExpr::lolli(arg, body.first), body.second};
      }

      case Term::Kind::App: {
        auto f = infer(*t.a);
        auto x = infer(*t.b);
        TypeExpr res = fresh();
        must_unify(f.first, TypeExpr::lolli(x.first, res), t.span, "application");
        Usage u = merge_disjoint(f.second, x.second, t.span, "an application");
        return {res, u};
      }

      case Term::Kind::TensorPair: {
        auto a = infer(*t.a);
        auto b = infer(*t.b);
        Usage u = merge_disjoint(a.second, b.second, t.span, "a tensor pair");
        return {TypeExpr::tensor(a.first, b.first), u};
      }

      case Term::Kind::TensorLet: {
        auto rhs = infer(*t.a);
        TypeExpr lt = fresh(), rt = fresh();
        must_unify(rhs.first, TypeExpr::tensor(lt, rt), t.span, "tensor let");
        int lid = bind_linear(t.let_left);
        int rid = bind_linear(t.let_right);
        if (t.let_left == t.let_right) {
          throw LangError("type", t.span, "tensor let binds '" + t.let_left + "' twice");
        }
        std::pair<TypeExpr, Usage> body;
        {
          ScopedBinding sl(*this, t.let_left, lt, lid);
          ScopedBinding sr(*this, t.let_right, rt, rid);
          body = infer(*t.b);
        }
        require_used(body.second, lid, t.span);
        require_used(body.second, rid, t.span);
        body.second.erase(lid);
        body.second.erase(rid);
        Usage u = merge_disjoint(rhs.second, body.second, t.span, "a tensor let");
        return {body.first, u};
      }

      case Term::Kind::Sum: {
        auto a = infer(*t.a);
        auto b = infer(*t.b);
        must_unify(a.first, b.first, t.span, "sum");
        require_equal(a.second, b.second, t.span, "a sum");
        return {a.first, a.second};
      }

      case Term::Kind::ScalarLit:
        return {TypeExpr::unit(), {}};

      case Term::Kind::WithPair: {
        auto a = infer(*t.a);
        auto b = infer(*t.b);
        require_equal(a.second, b.second, t.span, "a with pair");
        return {TypeExpr::with(a.first, b.first), a.second};
      }

      case Term::Kind::Fst: {
        auto a = infer(*t.a);
        TypeExpr l = fresh(), r = fresh();
        must_unify(a.first, TypeExpr::with(l, r), t.span, "fst");
        return {l, a.second};
      }

      case Term::Kind::Snd: {
        auto a = infer(*t.a);
        TypeExpr l = fresh(), r = fresh();
        must_unify(a.first, TypeExpr::with(l, r), t.span, "snd");
        return {r, a.second};
      }

      case Term::Kind::BangLit: {
        const PolyMap& f = *t.poly;
        return {TypeExpr::lolli(TypeExpr::bang(TypeExpr::real(f.domain().flat_dim())),
                                TypeExpr::real(f.codomain().flat_dim())),
                {}};
      }

      case Term::Kind::Derelict: {
        auto a = infer(*t.a);
        TypeExpr inner = fresh();
        must_unify(a.first, TypeExpr::bang(inner), t.span, "derelict");
        return {inner, a.second};
      }

      case Term::Kind::Coder: {
        auto a = infer(*t.a);
        return {TypeExpr::bang(a.first), a.second};
      }

      case Term::Kind::Weaken: {
        auto a = infer(*t.a);
        TypeExpr inner = fresh();
        must_unify(a.first, TypeExpr::bang(inner), t.span, "weaken");
        return {TypeExpr::unit(), a.second};
      }

      case Term::Kind::Coweaken:
        return {TypeExpr::bang(fresh()), {}};

      case Term::Kind::Contract: {
        auto a = infer(*t.a);
        TypeExpr inner = fresh();
        must_unify(a.first, TypeExpr::bang(inner), t.span, "contract");
        TypeExpr banged = TypeExpr::bang(inner);
        return {TypeExpr::tensor(banged, banged), a.second};
      }

      case Term::Kind::Cocontract: {
        auto a = infer(*t.a);
        auto b = infer(*t.b);
        TypeExpr inner = fresh();
        must_unify(a.first, TypeExpr::bang(inner), t.span, "cocontract");
        must_unify(b.first, TypeExpr::bang(inner), t.span, "cocontract");
        Usage u = merge_disjoint(a.second, b.second, t.span, "cocontract");
        return {TypeExpr::bang(inner), u};
      }

      case Term::Kind::Diff: {
        auto a = infer(*t.a);
        TypeExpr dom = fresh(), cod = fresh();
        must_unify(a.first, TypeExpr::lolli(TypeExpr::bang(dom), cod), t.span, "diff");
        return {TypeExpr::lolli(TypeExpr::tensor(dom, TypeExpr::bang(dom)), cod), a.second};
      }

      case Term::Kind::Seely: {
        auto a = infer(*t.a);
        TypeExpr l = fresh(), r = fresh();
        must_unify(a.first, TypeExpr::bang(TypeExpr::with(l, r)), t.span, "seely");
        return {TypeExpr::tensor(TypeExpr::bang(l), TypeExpr::bang(r)), a.second};
      }

      case Term::Kind::Unseely: {
        auto a = infer(*t.a);
        TypeExpr l = fresh(), r = fresh();
        must_unify(a.first, TypeExpr::tensor(TypeExpr::bang(l), TypeExpr::bang(r)), t.span, "unseely");
        return {TypeExpr::bang(TypeExpr::with(l, r)), a.second};
      }
    }
    throw LangError("type", t.span, "unhandled term");
  }

  // Applies the final substitution to every recorded type and rejects any
  // leftover metavariable.
  void resolve(Term& t) {
    if (!t.checked_type) throw LangError("type", t.span, "internal: node was never inferred");
    if (!subst_.resolved(*t.checked_type)) {
      throw LangError("type", t.span,
                      "ambiguous type " + subst_.apply(*t.checked_type).to_string() +
                          "; add an annotation or declaration");
    }
    t.checked_type = subst_.apply(*t.checked_type);
    if (t.ann) t.ann = subst_.apply(*t.ann);
    if (t.a) resolve(*t.a);
    if (t.b) resolve(*t.b);
  }

  Subst subst_;
  int next_meta_ = 0;
  int next_id_ = 1;
  std::map<std::string, Binding> ctx_;
  std::map<int, std::string> id_names_;
};

// Checks a declaration file top to bottom. Each declaration is checked
// against its declared type with all earlier declarations available as
// exponential names.
struct CheckedDecl {
  Declaration decl;
  TypeExpr type;
};

inline std::vector<CheckedDecl> check_declarations(std::vector<Declaration> decls,
                                                   std::map<std::string, TypeExpr> env = {}) {
  std::vector<CheckedDecl> out;
  for (auto& d : decls) {
    Checker ck(env);
    TypeExpr ty;
    try {
      ty = ck.check(*d.body, d.declared);
    } catch (const LangError& e) {
      throw LangError(e.error_kind(), e.span(), e.message() + " (declaration '" + d.name + "')");
    }
    env.emplace(d.name, ty);
    out.push_back(CheckedDecl{std::move(d), std::move(ty)});
  }
  return out;
}

}  // namespace codelta::lang
