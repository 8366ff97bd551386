#pragma once

#include <codelta/space.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace codelta::lang {

// Types of the term language. Meta nodes are placeholders created by the
// checker for polymorphic primitives and are resolved by unification; a
// fully checked declaration has none left.
class TypeExpr {
 public:
  enum class Kind { Unit, Real, Tensor, Lolli, Bang, With, Meta };

  TypeExpr() : kind_(Kind::Unit) {}

  static TypeExpr unit() { return TypeExpr(Kind::Unit); }
  static TypeExpr real(int n) {
    if (n <= 0) throw std::invalid_argument("coordinate type needs a positive dimension");
    TypeExpr t(Kind::Real);
    t.dim_ = n;
    return t;
  }
  static TypeExpr tensor(TypeExpr a, TypeExpr b) { return binary(Kind::Tensor, std::move(a), std::move(b)); }
  static TypeExpr lolli(TypeExpr a, TypeExpr b) { return binary(Kind::Lolli, std::move(a), std::move(b)); }
  static TypeExpr bang(TypeExpr a) {
    TypeExpr t(Kind::Bang);
    t.left_ = std::make_shared<TypeExpr>(std::move(a));
    return t;
  }
  static TypeExpr with(TypeExpr a, TypeExpr b) { return binary(Kind::With, std::move(a), std::move(b)); }
  static TypeExpr meta(int id) {
    TypeExpr t(Kind::Meta);
    t.dim_ = id;
    return t;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int meta_id() const { return dim_; }
  const TypeExpr& left() const { return *left_; }
  const TypeExpr& right() const { return *right_; }
  const TypeExpr& inner() const { return *left_; }

  bool operator==(const TypeExpr& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case Kind::Unit:
        return true;
      case Kind::Real:
      case Kind::Meta:
        return dim_ == o.dim_;
      case Kind::Bang:
        return *left_ == *o.left_;
      default:
        return *left_ == *o.left_ && *right_ == *o.right_;
    }
  }
  bool operator!=(const TypeExpr& o) const { return !(*this == o); }

  // Precedence for printing: ! binds tightest, then (x), then &, then -o.
  // -o is right associative, (x) and & associate to the left.
  std::string to_string() const { return print(0); }

 private:
  explicit TypeExpr(Kind k) : kind_(k) {}
  static TypeExpr binary(Kind k, TypeExpr a, TypeExpr b) {
    TypeExpr t(k);
    t.left_ = std::make_shared<TypeExpr>(std::move(a));
    t.right_ = std::make_shared<TypeExpr>(std::move(b));
    return t;
  }

  std::string print(int level) const {
    switch (kind_) {
      case Kind::Unit:
        return "I";
      case Kind::Real:
        return "R^" + std::to_string(dim_);
      case Kind::Meta:
        return "?" + std::to_string(dim_);
      case Kind::Bang:
        return "!" + left_->print(3);
      case Kind::With: {
        std::string s = left_->print(1) + " & " + right_->print(2);
        return level > 1 ? "(" + s + ")" : s;
      }
      case Kind::Tensor: {
        std::string s = left_->print(2) + " (x) " + right_->print(3);
        return level > 2 ? "(" + s + ")" : s;
      }
      case Kind::Lolli: {
        std::string s = left_->print(1) + " -o " + right_->print(0);
        return level > 0 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  Kind kind_;
  int dim_ = 0;
  std::shared_ptr<TypeExpr> left_, right_;
};

// The semantic space of a type. Function types have no space; asking for one
// is an error surfaced to the caller.
inline Space type_space(const TypeExpr& t) {
  switch (t.kind()) {
    case TypeExpr::Kind::Unit:
      return Space::unit();
    case TypeExpr::Kind::Real:
      return Space::real(t.dim());
    case TypeExpr::Kind::Bang:
      return Space::dist(type_space(t.inner()));
    case TypeExpr::Kind::With:
      return Space::prod(type_space(t.left()), type_space(t.right()));
    case TypeExpr::Kind::Tensor:
      return Space::tensor(type_space(t.left()), type_space(t.right()));
    case TypeExpr::Kind::Lolli:
      throw std::invalid_argument("map type " + t.to_string() + " has no value space");
    case TypeExpr::Kind::Meta:
      throw std::invalid_argument("unresolved type " + t.to_string());
  }
  throw std::logic_error("unreachable");
}

// Union-find free substitution: meta ids map to types, applied recursively.
class Subst {
 public:
  TypeExpr apply(const TypeExpr& t) const {
    switch (t.kind()) {
      case TypeExpr::Kind::Meta: {
        auto it = map_.find(t.meta_id());
        return it == map_.end() ? t : apply(it->second);
      }
      case TypeExpr::Kind::Bang:
        return TypeExpr::bang(apply(t.inner()));
      case TypeExpr::Kind::Tensor:
        return TypeExpr::tensor(apply(t.left()), apply(t.right()));
      case TypeExpr::Kind::Lolli:
        return TypeExpr::lolli(apply(t.left()), apply(t.right()));
      case TypeExpr::Kind::With:
        return TypeExpr::with(apply(t.left()), apply(t.right()));
      default:
        return t;
    }
  }

  bool occurs(int id, const TypeExpr& t) const {
    TypeExpr r = apply(t);
    switch (r.kind()) {
      case TypeExpr::Kind::Meta:
        return r.meta_id() == id;
      case TypeExpr::Kind::Bang:
        return occurs(id, r.inner());
      case TypeExpr::Kind::Tensor:
      case TypeExpr::Kind::Lolli:
      case TypeExpr::Kind::With:
        return occurs(id, r.left()) || occurs(id, r.right());
      default:
        return false;
    }
  }

  // Unifies a with b, extending the substitution; returns false on clash.
  bool unify(const TypeExpr& a, const TypeExpr& b) {
    TypeExpr x = apply(a), y = apply(b);
    if (x.kind() == TypeExpr::Kind::Meta) {
      if (y.kind() == TypeExpr::Kind::Meta && y.meta_id() == x.meta_id()) return true;
      if (occurs(x.meta_id(), y)) return false;
      map_.emplace(x.meta_id(), y);
      return true;
    }
    if (y.kind() == TypeExpr::Kind::Meta) return unify(y, x);
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case TypeExpr::Kind::Unit:
        return true;
      case TypeExpr::Kind::Real:
        return x.dim() == y.dim();
      case TypeExpr::Kind::Bang:
        return unify(x.inner(), y.inner());
      default:
        return unify(x.left(), y.left()) && unify(x.right(), y.right());
    }
  }

  bool resolved(const TypeExpr& t) const {
    TypeExpr r = apply(t);
    switch (r.kind()) {
      case TypeExpr::Kind::Meta:
        return false;
      case TypeExpr::Kind::Bang:
        return resolved(r.inner());
      case TypeExpr::Kind::Tensor:
      case TypeExpr::Kind::Lolli:
      case TypeExpr::Kind::With:
        return resolved(r.left()) && resolved(r.right());
      default:
        return true;
    }
  }

 private:
  std::map<int, TypeExpr> map_;
};

}  // namespace codelta::lang
