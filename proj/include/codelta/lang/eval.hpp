#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "codelta/bang.hpp"
#include "codelta/distribution.hpp"
#include "codelta/distribution_json.hpp"
#include "codelta/lang/ast.hpp"
#include "codelta/lang/lexer.hpp"
#include "codelta/lang/parser.hpp"
#include "codelta/lang/type.hpp"
#include "codelta/poly.hpp"
#include "codelta/poly_json.hpp"

namespace codelta::lang {

// Runtime values. Tensors of two distribution spaces are kept in the
// canonical combined form; every other tensor type is a formal sum of simple
// pairs, which is enough because the type system makes every context linear
// in each tensor factor.
class SemValue {
 public:
  enum class Kind { Scalar, Vec, Dist, Tensor, TensorSum, Pair, Fun };

  struct FunData {
    TypeExpr type;
    std::function<SemValue(const SemValue&)> call;
    std::optional<PolyMap> poly;
  };

  static SemValue scalar(Rational c) {
    SemValue v(Kind::Scalar);
    v.scalar_ = std::move(c);
    return v;
  }
  static SemValue vec(Vector x) {
    SemValue v(Kind::Vec);
    v.vec_ = std::make_shared<Vector>(std::move(x));
    return v;
  }
  static SemValue dist(Distribution d) {
    SemValue v(Kind::Dist);
    v.dist_ = std::make_shared<Distribution>(std::move(d));
    return v;
  }
  static SemValue tensor(TensorElem t) {
    SemValue v(Kind::Tensor);
    v.tensor_ = std::make_shared<TensorElem>(std::move(t));
    return v;
  }
  static SemValue tensor_sum(std::vector<std::pair<SemValue, SemValue>> parts) {
    SemValue v(Kind::TensorSum);
    auto out = std::make_shared<std::vector<std::pair<SemValue, SemValue>>>();
    for (auto& p : parts) {
      if (p.first.is_zero() || p.second.is_zero()) continue;
      out->push_back(std::move(p));
    }
    v.parts_ = std::move(out);
    return v;
  }
  static SemValue pair(SemValue a, SemValue b) {
    SemValue v(Kind::Pair);
    v.left_ = std::make_shared<SemValue>(std::move(a));
    v.right_ = std::make_shared<SemValue>(std::move(b));
    return v;
  }
  static SemValue fun(FunData f) {
    SemValue v(Kind::Fun);
    v.fun_ = std::make_shared<FunData>(std::move(f));
    return v;
  }

  Kind kind() const { return kind_; }

  const Rational& as_scalar() const {
    need(Kind::Scalar);
    return scalar_;
  }
  const Vector& as_vec() const {
    need(Kind::Vec);
    return *vec_;
  }
  const Distribution& as_dist() const {
    need(Kind::Dist);
    return *dist_;
  }
  const TensorElem& as_tensor() const {
    need(Kind::Tensor);
    return *tensor_;
  }
  const std::vector<std::pair<SemValue, SemValue>>& parts() const {
    need(Kind::TensorSum);
    return *parts_;
  }
  const SemValue& first() const {
    need(Kind::Pair);
    return *left_;
  }
  const SemValue& second() const {
    need(Kind::Pair);
    return *right_;
  }
  const FunData& as_fun() const {
    need(Kind::Fun);
    return *fun_;
  }

  bool is_zero() const {
    switch (kind_) {
      case Kind::Scalar:
        return scalar_ == 0;
      case Kind::Vec:
        return vec_->is_zero();
      case Kind::Dist:
        return dist_->is_zero();
      case Kind::Tensor:
        return tensor_->is_zero();
      case Kind::TensorSum:
        return parts_->empty();
      case Kind::Pair:
        return left_->is_zero() && right_->is_zero();
      case Kind::Fun:
        return false;
    }
    return false;
  }

  std::string kind_name() const {
    switch (kind_) {
      case Kind::Scalar:
        return "scalar";
      case Kind::Vec:
        return "vector";
      case Kind::Dist:
        return "distribution";
      case Kind::Tensor:
        return "tensor";
      case Kind::TensorSum:
        return "tensor sum";
      case Kind::Pair:
        return "pair";
      case Kind::Fun:
        return "map";
    }
    return "?";
  }

 private:
  explicit SemValue(Kind k) : kind_(k) {}
  void need(Kind k) const {
    if (kind_ != k) throw std::logic_error("value is a " + kind_name() + ", not the requested kind");
  }

  Kind kind_;
  Rational scalar_ = 0;
  std::shared_ptr<Vector> vec_;
  std::shared_ptr<Distribution> dist_;
  std::shared_ptr<TensorElem> tensor_;
  std::shared_ptr<std::vector<std::pair<SemValue, SemValue>>> parts_;
  std::shared_ptr<SemValue> left_, right_;
  std::shared_ptr<FunData> fun_;
};

inline SemValue sem_add(const SemValue& a, const SemValue& b);
inline SemValue sem_scale(const Rational& c, const SemValue& v);

inline SemValue sem_add(const SemValue& a, const SemValue& b) {
  if (a.kind() != b.kind()) {
    throw std::invalid_argument("cannot add a " + a.kind_name() + " to a " + b.kind_name());
  }
  switch (a.kind()) {
    case SemValue::Kind::Scalar:
      return SemValue::scalar(a.as_scalar() + b.as_scalar());
    case SemValue::Kind::Vec:
      return SemValue::vec(a.as_vec() + b.as_vec());
    case SemValue::Kind::Dist:
      return SemValue::dist(a.as_dist().add(b.as_dist()));
    case SemValue::Kind::Tensor:
      return SemValue::tensor(a.as_tensor().add(b.as_tensor()));
    case SemValue::Kind::TensorSum: {
      auto parts = a.parts();
      for (const auto& p : b.parts()) parts.push_back(p);
      return SemValue::tensor_sum(std::move(parts));
    }
    case SemValue::Kind::Pair:
      return SemValue::pair(sem_add(a.first(), b.first()), sem_add(a.second(), b.second()));
    case SemValue::Kind::Fun: {
      SemValue::FunData f;
      f.type = a.as_fun().type;
      auto fa = a.as_fun().call, fb = b.as_fun().call;
      f.call = [fa, fb](const SemValue& x) { return sem_add(fa(x), fb(x)); };
      return SemValue::fun(std::move(f));
    }
  }
  throw std::logic_error("unreachable");
}

inline SemValue sem_scale(const Rational& c, const SemValue& v) {
  switch (v.kind()) {
    case SemValue::Kind::Scalar:
      return SemValue::scalar(c * v.as_scalar());
    case SemValue::Kind::Vec:
      return SemValue::vec(v.as_vec() * c);
    case SemValue::Kind::Dist:
      return SemValue::dist(v.as_dist().scale(c));
    case SemValue::Kind::Tensor:
      return SemValue::tensor(v.as_tensor().scale(c));
    case SemValue::Kind::TensorSum: {
      std::vector<std::pair<SemValue, SemValue>> parts;
      for (const auto& p : v.parts()) parts.emplace_back(sem_scale(c, p.first), p.second);
      return SemValue::tensor_sum(std::move(parts));
    }
    case SemValue::Kind::Pair:
      return SemValue::pair(sem_scale(c, v.first()), sem_scale(c, v.second()));
    case SemValue::Kind::Fun: {
      SemValue::FunData f;
      f.type = v.as_fun().type;
      auto call = v.as_fun().call;
      Rational cc = c;
      f.call = [cc, call](const SemValue& x) { return sem_scale(cc, call(x)); };
      return SemValue::fun(std::move(f));
    }
  }
  throw std::logic_error("unreachable");
}

inline bool sem_equal(const SemValue& a, const SemValue& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SemValue::Kind::Scalar:
      return a.as_scalar() == b.as_scalar();
    case SemValue::Kind::Vec:
      return a.as_vec() == b.as_vec();
    case SemValue::Kind::Dist:
      return a.as_dist() == b.as_dist();
    case SemValue::Kind::Tensor:
      return a.as_tensor() == b.as_tensor();
    case SemValue::Kind::TensorSum: {
      const auto& pa = a.parts();
      const auto& pb = b.parts();
      if (pa.size() != pb.size()) return false;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        if (!sem_equal(pa[i].first, pb[i].first) || !sem_equal(pa[i].second, pb[i].second)) return false;
      }
      return true;
    }
    case SemValue::Kind::Pair:
      return sem_equal(a.first(), b.first()) && sem_equal(a.second(), b.second());
    case SemValue::Kind::Fun:
      throw std::invalid_argument("maps cannot be compared for equality");
  }
  return false;
}

inline bool both_bang(const TypeExpr& t) {
  return t.kind() == TypeExpr::Kind::Tensor && t.left().kind() == TypeExpr::Kind::Bang &&
         t.right().kind() == TypeExpr::Kind::Bang;
}

inline SemValue zero_value(const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      return SemValue::scalar(0);
    case TypeExpr::Kind::Real:
      return SemValue::vec(Vector::zero(Space::real(t.dim())));
    case TypeExpr::Kind::Bang:
      return SemValue::dist(Distribution(type_space(t.inner())));
    case TypeExpr::Kind::With:
      return SemValue::pair(zero_value(t.left()), zero_value(t.right()));
    case TypeExpr::Kind::Tensor: {
      if (both_bang(t)) {
        return SemValue::tensor(
            TensorElem({type_space(t.left().inner()), type_space(t.right().inner())}));
      }
      return SemValue::tensor_sum({});
    }
    case TypeExpr::Kind::Lolli: {
      SemValue::FunData f;
      f.type = t;
      TypeExpr cod = t.right();
      f.call = [cod](const SemValue&) { return zero_value(cod); };
      return SemValue::fun(std::move(f));
    }
    case TypeExpr::Kind::Meta:
      break;
  }
  throw std::invalid_argument("no zero value for type " + t.to_string());
}

// Values of point-like types (everything built without tensor or arrow)
// convert to and from module points.
inline Point sem_to_point(const SemValue& v, const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      return Point::from_vector(Vector(Space::unit(), {v.as_scalar()}));
    case TypeExpr::Kind::Real:
      return Point::from_vector(v.as_vec());
    case TypeExpr::Kind::Bang:
      return Point::from_distribution(v.as_dist());
    case TypeExpr::Kind::With:
      return Point::pair(sem_to_point(v.first(), t.left()), sem_to_point(v.second(), t.right()));
    default:
      throw std::invalid_argument("values of type " + t.to_string() + " have no point form");
  }
}

inline SemValue point_to_sem(const Point& p, const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      return SemValue::scalar(p.vector()[0]);
    case TypeExpr::Kind::Real:
      return SemValue::vec(p.vector());
    case TypeExpr::Kind::Bang:
      return SemValue::dist(p.distribution());
    case TypeExpr::Kind::With:
      return SemValue::pair(point_to_sem(p.left(), t.left()), point_to_sem(p.right(), t.right()));
    default:
      throw std::invalid_argument("values of type " + t.to_string() + " have no point form");
  }
}

// Checks that a finished value has the shape its type promises.
inline void sem_check_type(const SemValue& v, const TypeExpr& t) {
  auto fail = [&]() {
    throw std::logic_error("value of kind " + v.kind_name() + " does not inhabit " + t.to_string());
  };
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      if (v.kind() != SemValue::Kind::Scalar) fail();
      return;
    case TypeExpr::Kind::Real:
      if (v.kind() != SemValue::Kind::Vec || v.as_vec().space() != Space::real(t.dim())) fail();
      return;
    case TypeExpr::Kind::Bang:
      if (v.kind() != SemValue::Kind::Dist || v.as_dist().space() != type_space(t.inner())) fail();
      return;
    case TypeExpr::Kind::With:
      if (v.kind() != SemValue::Kind::Pair) fail();
      sem_check_type(v.first(), t.left());
      sem_check_type(v.second(), t.right());
      return;
    case TypeExpr::Kind::Tensor:
      if (both_bang(t)) {
        if (v.kind() != SemValue::Kind::Tensor) fail();
        const auto& spaces = v.as_tensor().factor_spaces();
        if (spaces.size() != 2 || spaces[0] != type_space(t.left().inner()) ||
            spaces[1] != type_space(t.right().inner()))
          fail();
        return;
      }
      if (v.kind() != SemValue::Kind::TensorSum) fail();
      for (const auto& p : v.parts()) {
        sem_check_type(p.first, t.left());
        sem_check_type(p.second, t.right());
      }
      return;
    case TypeExpr::Kind::Lolli:
      if (v.kind() != SemValue::Kind::Fun || !(v.as_fun().type == t)) fail();
      return;
    case TypeExpr::Kind::Meta:
      fail();
  }
}

using Env = std::map<std::string, SemValue>;

namespace detail {

inline const TypeExpr& checked(const Term& t) {
  if (!t.checked_type) throw std::logic_error("evaluation needs a typechecked term");
  return *t.checked_type;
}

inline std::vector<std::pair<SemValue, SemValue>> tensor_parts(const SemValue& v, const Span& sp) {
  if (v.kind() == SemValue::Kind::TensorSum) return v.parts();
  if (v.kind() == SemValue::Kind::Tensor) {
    const TensorElem& te = v.as_tensor();
    if (te.arity() != 2) throw LangError("eval", sp, "tensor value has arity " + std::to_string(te.arity()));
    std::vector<std::pair<SemValue, SemValue>> out;
    for (const auto& [factors, c] : te.entries()) {
      out.emplace_back(SemValue::dist(te.factor_distribution(factors, 0).scale(c)),
                       SemValue::dist(te.factor_distribution(factors, 1)));
    }
    return out;
  }
  throw LangError("eval", sp, "expected a tensor value, got a " + v.kind_name());
}

}  // namespace detail

inline SemValue evaluate(const Term& t, const Env& env);

namespace detail {

inline SemValue eval_node(const Term& t, const Env& env) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) throw LangError("eval", t.span, "no value bound to '" + t.name + "'");
      return it->second;
    }

    case Term::Kind::ScalarLit:
      return SemValue::scalar(t.scalar);

    case Term::Kind::Lambda: {
      SemValue::FunData f;
      f.type = checked(t);
      TermPtr body = t.a;
      std::string name = t.name;
      Env captured = env;
      f.call = [body, name, captured](const SemValue& arg) {
        Env e = captured;
        e.insert_or_assign(name, arg);
        return evaluate(*body, e);
      };
      return SemValue::fun(std::move(f));
    }

    case Term::Kind::App: {
      SemValue f = evaluate(*t.a, env);
      SemValue x = evaluate(*t.b, env);
      if (f.kind() != SemValue::Kind::Fun)
        throw LangError("eval", t.span, "applied a " + f.kind_name() + " as a map");
      return f.as_fun().call(x);
    }

    case Term::Kind::Sum:
      return sem_add(evaluate(*t.a, env), evaluate(*t.b, env));

    case Term::Kind::WithPair:
      return SemValue::pair(evaluate(*t.a, env), evaluate(*t.b, env));

    case Term::Kind::Fst:
      return evaluate(*t.a, env).first();

    case Term::Kind::Snd:
      return evaluate(*t.a, env).second();

    case Term::Kind::TensorPair: {
      SemValue a = evaluate(*t.a, env);
      SemValue b = evaluate(*t.b, env);
      if (both_bang(checked(t))) return SemValue::tensor(tensor_of({a.as_dist(), b.as_dist()}));
      std::vector<std::pair<SemValue, SemValue>> parts;
      parts.emplace_back(std::move(a), std::move(b));
      return SemValue::tensor_sum(std::move(parts));
    }

    case Term::Kind::TensorLet: {
      SemValue rhs = evaluate(*t.a, env);
      auto parts = tensor_parts(rhs, t.span);
      SemValue acc = zero_value(checked(*t.b));
      for (const auto& [l, r] : parts) {
        Env e = env;
        e.insert_or_assign(t.let_left, l);
        e.insert_or_assign(t.let_right, r);
        acc = sem_add(acc, evaluate(*t.b, e));
      }
      return acc;
    }

    case Term::Kind::BangLit: {
      SemValue::FunData f;
      f.type = checked(t);
      PolyMap p = *t.poly;
      f.call = [p](const SemValue& arg) { return SemValue::vec(lift_apply(p, arg.as_dist())); };
      f.poly = std::move(p);
      return SemValue::fun(std::move(f));
    }

    case Term::Kind::Derelict: {
      SemValue a = evaluate(*t.a, env);
      return point_to_sem(eps(a.as_dist()), checked(t));
    }

    case Term::Kind::Coder: {
      SemValue a = evaluate(*t.a, env);
      return SemValue::dist(coder(sem_to_point(a, checked(*t.a))));
    }

    case Term::Kind::Weaken: {
      SemValue a = evaluate(*t.a, env);
      return SemValue::scalar(counit_e(a.as_dist()));
    }

    case Term::Kind::Coweaken:
      return SemValue::dist(unit_nu(type_space(checked(t).inner())));

    case Term::Kind::Contract: {
      SemValue a = evaluate(*t.a, env);
      return SemValue::tensor(comul_delta(a.as_dist()));
    }

    case Term::Kind::Cocontract: {
      SemValue a = evaluate(*t.a, env);
      SemValue b = evaluate(*t.b, env);
      return SemValue::dist(conv_nabla(a.as_dist(), b.as_dist()));
    }

    case Term::Kind::Diff: {
      SemValue g = evaluate(*t.a, env);
      if (g.kind() != SemValue::Kind::Fun)
        throw LangError("eval", t.span, "diff needs a map, got a " + g.kind_name());
      SemValue::FunData f;
      f.type = checked(t);
      TypeExpr arg_type = f.type.left();          // A (x) !A
      TypeExpr dir_type = arg_type.left();        // A
      TypeExpr res_type = f.type.right();         // B
      auto call = g.as_fun().call;
      Span sp = t.span;
      f.call = [call, dir_type, res_type, sp](const SemValue& arg) {
        SemValue acc = zero_value(res_type);
        for (const auto& [v, u] : tensor_parts(arg, sp)) {
          Point dir = sem_to_point(v, dir_type);
          acc = sem_add(acc, call(SemValue::dist(derive_dA(dir, u.as_dist()))));
        }
        return acc;
      };
      return SemValue::fun(std::move(f));
    }

    case Term::Kind::Seely: {
      SemValue a = evaluate(*t.a, env);
      return SemValue::tensor(seely_split(a.as_dist()));
    }

    case Term::Kind::Unseely: {
      SemValue a = evaluate(*t.a, env);
      return SemValue::dist(seely_merge(a.as_tensor()));
    }
  }
  throw std::logic_error("unreachable term kind");
}

}  // namespace detail

inline SemValue evaluate(const Term& t, const Env& env) { return detail::eval_node(t, env); }

// Evaluates and then verifies the value inhabits the checked type.
inline SemValue evaluate_checked(const Term& t, const Env& env = {}) {
  const TypeExpr& ty = detail::checked(t);
  SemValue v = evaluate(t, env);
  sem_check_type(v, ty);
  return v;
}

inline Json sem_to_json(const SemValue& v) {
  switch (v.kind()) {
    case SemValue::Kind::Scalar:
      return Json{{"scalar", to_string(v.as_scalar())}};
    case SemValue::Kind::Vec:
      return point_to_json(Point::from_vector(v.as_vec()));
    case SemValue::Kind::Dist:
      return Json{{"distribution", distribution_to_json(v.as_dist())}};
    case SemValue::Kind::Tensor:
      return Json{{"tensor", tensor_to_json(v.as_tensor())}};
    case SemValue::Kind::TensorSum: {
      Json arr = Json::array();
      for (const auto& p : v.parts())
        arr.push_back(Json{{"left", sem_to_json(p.first)}, {"right", sem_to_json(p.second)}});
      return Json{{"tensor_sum", arr}};
    }
    case SemValue::Kind::Pair:
      return Json{{"pair", Json::array({sem_to_json(v.first()), sem_to_json(v.second())})}};
    case SemValue::Kind::Fun: {
      Json j{{"map", v.as_fun().type.to_string()}};
      if (v.as_fun().poly) j["polynomial"] = poly_to_json(*v.as_fun().poly);
      return j;
    }
  }
  throw std::logic_error("unreachable");
}

inline SemValue sem_from_json(const Json& j, const TypeExpr& t) {
  if (!j.is_object()) throw std::invalid_argument("value must be a JSON object");
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      return SemValue::scalar(rational_from_json(expect_field(j, "scalar")));
    case TypeExpr::Kind::Real: {
      Point p = point_from_json(j, Space::real(t.dim()));
      return SemValue::vec(p.vector());
    }
    case TypeExpr::Kind::Bang: {
      Distribution d = distribution_from_json(expect_field(j, "distribution"));
      if (d.space() != type_space(t.inner()))
        throw std::invalid_argument("distribution is over " + d.space().to_string() + ", expected " +
                                    type_space(t.inner()).to_string());
      return SemValue::dist(std::move(d));
    }
    case TypeExpr::Kind::With: {
      const Json& pq = expect_field(j, "pair");
      if (!pq.is_array() || pq.size() != 2) throw std::invalid_argument("pair needs two entries");
      return SemValue::pair(sem_from_json(pq[0], t.left()), sem_from_json(pq[1], t.right()));
    }
    case TypeExpr::Kind::Tensor: {
      if (both_bang(t)) {
        TensorElem te = tensor_from_json(expect_field(j, "tensor"));
        if (te.arity() != 2 || te.factor_spaces()[0] != type_space(t.left().inner()) ||
            te.factor_spaces()[1] != type_space(t.right().inner()))
          throw std::invalid_argument("tensor factors do not match " + t.to_string());
        return SemValue::tensor(std::move(te));
      }
      const Json& arr = expect_field(j, "tensor_sum");
      if (!arr.is_array()) throw std::invalid_argument("tensor_sum must be an array");
      std::vector<std::pair<SemValue, SemValue>> parts;
      for (const Json& e : arr) {
        parts.emplace_back(sem_from_json(expect_field(e, "left"), t.left()),
                           sem_from_json(expect_field(e, "right"), t.right()));
      }
      return SemValue::tensor_sum(std::move(parts));
    }
    case TypeExpr::Kind::Lolli: {
      if (j.contains("polynomial") && t.left().kind() == TypeExpr::Kind::Bang &&
          t.left().inner().kind() == TypeExpr::Kind::Real && t.right().kind() == TypeExpr::Kind::Real) {
        PolyMap p = poly_from_json(j.at("polynomial"));
        if (p.domain() != type_space(t.left().inner()) || p.codomain() != type_space(t.right()))
          throw std::invalid_argument("polynomial dimensions do not match " + t.to_string());
        SemValue::FunData f;
        f.type = t;
        PolyMap pc = p;
        f.call = [pc](const SemValue& arg) { return SemValue::vec(lift_apply(pc, arg.as_dist())); };
        f.poly = std::move(p);
        return SemValue::fun(std::move(f));
      }
      throw std::invalid_argument("maps of type " + t.to_string() + " cannot be loaded from JSON");
    }
    case TypeExpr::Kind::Meta:
      break;
  }
  throw std::invalid_argument("cannot load a value of type " + t.to_string());
}

// Environment files map names to {"type": ..., "value": ...}.
struct LoadedEnv {
  Env values;
  std::map<std::string, TypeExpr> types;
};

inline LoadedEnv env_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("environment must be a JSON object");
  LoadedEnv out;
  for (const auto& [name, entry] : j.items()) {
    TypeExpr ty = parse_type_text(expect_field(entry, "type").get<std::string>());
    SemValue v = sem_from_json(expect_field(entry, "value"), ty);
    out.values.emplace(name, std::move(v));
    out.types.emplace(name, std::move(ty));
  }
  return out;
}

}  // namespace codelta::lang
