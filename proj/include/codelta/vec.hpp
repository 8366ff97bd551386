#pragma once

#include <codelta/rational.hpp>
#include <codelta/space.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

// Coordinate vector over a flat space. Serves both as a point and as a
// tangent vector; the space tag travels with the data.
class Vector {
 public:
  Vector(Space space, std::vector<Rational> coords) : space_(std::move(space)), coords_(std::move(coords)) {
    if (!space_.is_flat()) throw std::invalid_argument("vector needs a coordinate space, got " + space_.to_string());
    if (static_cast<int>(coords_.size()) != space_.flat_dim())
      throw std::invalid_argument("coordinate count mismatch for " + space_.to_string());
  }

  static Vector zero(const Space& space) {
    return Vector(space, std::vector<Rational>(static_cast<std::size_t>(space.flat_dim()), Rational(0)));
  }
  static Vector basis(const Space& space, int i) {
    Vector v = zero(space);
    v.coords_.at(static_cast<std::size_t>(i)) = 1;
    return v;
  }

  const Space& space() const { return space_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Rational& operator[](int i) const { return coords_.at(static_cast<std::size_t>(i)); }
  Rational& operator[](int i) { return coords_.at(static_cast<std::size_t>(i)); }
  const std::vector<Rational>& coords() const { return coords_; }

  Vector operator+(const Vector& o) const {
    require_same(o);
    Vector r = *this;
    for (int i = 0; i < dim(); ++i) r.coords_[static_cast<std::size_t>(i)] += o[i];
    return r;
  }
  Vector operator-(const Vector& o) const {
    require_same(o);
    Vector r = *this;
    for (int i = 0; i < dim(); ++i) r.coords_[static_cast<std::size_t>(i)] -= o[i];
    return r;
  }
  Vector operator*(const Rational& c) const {
    Vector r = *this;
    for (auto& x : r.coords_) x *= c;
    return r;
  }
  Vector operator-() const { return *this * Rational(-1); }

  bool operator==(const Vector& o) const { return space_ == o.space_ && coords_ == o.coords_; }
  bool operator!=(const Vector& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : coords_)
      if (x != 0) return false;
    return true;
  }

  Rational norm2_squared() const {
    Rational s = 0;
    for (const auto& x : coords_) s += x * x;
    return s;
  }
  Rational norm_inf() const {
    Rational m = 0;
    for (const auto& x : coords_)
      if (rat_abs(x) > m) m = rat_abs(x);
    return m;
  }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < dim(); ++i) {
      if (i) s += ",";
      s += codelta::to_string((*this)[i]);
    }
    return s + ")";
  }

 private:
  void require_same(const Vector& o) const {
    if (space_ != o.space_) throw std::invalid_argument("vector space mismatch");
  }

  Space space_;
  std::vector<Rational> coords_;
};

inline Vector operator*(const Rational& c, const Vector& v) { return v * c; }

// Total order used to keep printed and serialized forms deterministic.
inline int compare(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace codelta
