#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

// Structural descriptor of the spaces the library computes in: finite
// dimensional coordinate spaces, distribution spaces over another space,
// binary products, tensor factors and the scalar unit.
class Space {
 public:
  enum class Kind { RealN, Dist, Prod, TensorSp, UnitSp };

  static Space real(int n) {
    if (n < 0) throw std::invalid_argument("negative dimension");
    Space s(Kind::RealN);
    s.dim_ = n;
    return s;
  }
  static Space unit() { return Space(Kind::UnitSp); }
  static Space dist(Space inner) {
    Space s(Kind::Dist);
    s.children_.push_back(std::make_shared<Space>(std::move(inner)));
    return s;
  }
  static Space prod(Space a, Space b) {
    Space s(Kind::Prod);
    s.children_.push_back(std::make_shared<Space>(std::move(a)));
    s.children_.push_back(std::make_shared<Space>(std::move(b)));
    return s;
  }
  static Space tensor(Space a, Space b) {
    Space s(Kind::TensorSp);
    s.children_.push_back(std::make_shared<Space>(std::move(a)));
    s.children_.push_back(std::make_shared<Space>(std::move(b)));
    return s;
  }

  Kind kind() const { return kind_; }
  int real_dim() const {
    if (kind_ != Kind::RealN) throw std::logic_error("real_dim on non-coordinate space");
    return dim_;
  }
  const Space& inner() const {
    if (kind_ != Kind::Dist) throw std::logic_error("inner on non-distribution space");
    return *children_[0];
  }
  const Space& left() const {
    if (kind_ != Kind::Prod && kind_ != Kind::TensorSp) throw std::logic_error("left on non-product space");
    return *children_[0];
  }
  const Space& right() const {
    if (kind_ != Kind::Prod && kind_ != Kind::TensorSp) throw std::logic_error("right on non-product space");
    return *children_[1];
  }

  // True when the space is built from coordinates only, so elements flatten
  // into one coordinate vector.
  bool is_flat() const {
    switch (kind_) {
      case Kind::RealN:
      case Kind::UnitSp:
        return true;
      case Kind::Prod:
        return left().is_flat() && right().is_flat();
      default:
        return false;
    }
  }

  int flat_dim() const {
    switch (kind_) {
      case Kind::RealN:
        return dim_;
      case Kind::UnitSp:
        return 1;
      case Kind::Prod:
        return left().flat_dim() + right().flat_dim();
      default:
        throw std::logic_error("flat_dim on space without coordinates: " + to_string());
    }
  }

  bool operator==(const Space& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
      case Kind::RealN:
        return dim_ == o.dim_;
      case Kind::UnitSp:
        return true;
      case Kind::Dist:
        return inner() == o.inner();
      case Kind::Prod:
      case Kind::TensorSp:
        return left() == o.left() && right() == o.right();
    }
    return false;
  }
  bool operator!=(const Space& o) const { return !(*this == o); }

  std::string to_string() const {
    switch (kind_) {
      case Kind::RealN:
        return "R^" + std::to_string(dim_);
      case Kind::UnitSp:
        return "I";
      case Kind::Dist:
        return "!" + inner().to_string();
      case Kind::Prod:
        return "(" + left().to_string() + " x " + right().to_string() + ")";
      case Kind::TensorSp:
        return "(" + left().to_string() + " (x) " + right().to_string() + ")";
    }
    return "?";
  }

  // Parses the to_string form: I, R^n, !S, (S x S), (S (x) S).
  static Space parse(const std::string& text) {
    std::size_t pos = 0;
    Space s = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw std::invalid_argument("trailing input in space: " + text);
    return s;
  }

 private:
  explicit Space(Kind k) : kind_(k) {}

  static void skip_ws(const std::string& t, std::size_t& pos) {
    while (pos < t.size() && (t[pos] == ' ' || t[pos] == '\t')) ++pos;
  }

  static Space parse_at(const std::string& t, std::size_t& pos) {
    skip_ws(t, pos);
    if (pos >= t.size()) throw std::invalid_argument("truncated space: " + t);
    char c = t[pos];
    if (c == 'I') {
      ++pos;
      return unit();
    }
    if (c == '!') {
      ++pos;
      return dist(parse_at(t, pos));
    }
    if (c == 'R') {
      ++pos;
      if (pos >= t.size() || t[pos] != '^') throw std::invalid_argument("expected ^ after R");
      ++pos;
      int n = 0;
      std::size_t digits = 0;
      while (pos < t.size() && t[pos] >= '0' && t[pos] <= '9') {
        n = n * 10 + (t[pos] - '0');
        ++pos;
        ++digits;
      }
      if (digits == 0) throw std::invalid_argument("expected dimension after R^");
      return real(n);
    }
    if (c == '(') {
      ++pos;
      Space a = parse_at(t, pos);
      skip_ws(t, pos);
      bool tensor_op = false;
      if (t.compare(pos, 3, "(x)") == 0) {
        tensor_op = true;
        pos += 3;
      } else if (pos < t.size() && t[pos] == 'x') {
        ++pos;
      } else {
        throw std::invalid_argument("expected x or (x) in product space");
      }
      Space b = parse_at(t, pos);
      skip_ws(t, pos);
      if (pos >= t.size() || t[pos] != ')') throw std::invalid_argument("expected ) in space");
      ++pos;
      return tensor_op ? tensor(std::move(a), std::move(b)) : prod(std::move(a), std::move(b));
    }
    throw std::invalid_argument("bad space syntax: " + t);
  }

  Kind kind_;
  int dim_ = 0;
  std::vector<std::shared_ptr<Space>> children_;
};

}  // namespace codelta
