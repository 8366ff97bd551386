#pragma once

#include <codelta/rational.hpp>
#include <codelta/space.hpp>
#include <codelta/vec.hpp>

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace codelta {

class Distribution;
class BasisDir;
struct DeltaKey;

// Element of an arbitrary space: coordinate vector on flat leaves, a
// distribution under a bang, a pair in a product. Carries its space and
// supports the linear structure every space here has.
class Point {
 public:
  static Point from_vector(const Vector& v);
  static Point from_distribution(Distribution d);
  static Point pair(Point left, Point right);
  static Point zero(const Space& space);

  const Space& space() const { return space_; }

  bool is_vector() const { return vec_ != nullptr; }
  bool is_distribution() const { return dist_ != nullptr; }
  bool is_pair() const { return left_ != nullptr; }
  const Vector& vector() const {
    if (!vec_) throw std::logic_error("point has no coordinate payload");
    return *vec_;
  }
  const Distribution& distribution() const {
    if (!dist_) throw std::logic_error("point has no distribution payload");
    return *dist_;
  }
  const Point& left() const {
    if (!left_) throw std::logic_error("point has no pair payload");
    return *left_;
  }
  const Point& right() const {
    if (!right_) throw std::logic_error("point has no pair payload");
    return *right_;
  }

  Point add(const Point& other) const;
  Point scale(const Rational& c) const;
  bool is_zero() const;

  bool operator==(const Point& o) const;
  bool operator!=(const Point& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  explicit Point(Space s) : space_(std::move(s)) {}

  Space space_;
  std::shared_ptr<const Vector> vec_;
  std::shared_ptr<const Distribution> dist_;
  std::shared_ptr<const Point> left_;
  std::shared_ptr<const Point> right_;
};

int compare(const Point& a, const Point& b);
int compare(const BasisDir& a, const BasisDir& b);
int compare(const DeltaKey& a, const DeltaKey& b);
int compare(const Distribution& a, const Distribution& b);

// Canonical unit tangent of a space: a coordinate axis on flat leaves, a pure
// delta term on a distribution space, a one-sided tangent on a product.
// General tangents expand into rational combinations of these, which is what
// makes equality of distributions decidable.
class BasisDir {
 public:
  enum class Kind { Axis, Delta, Left, Right };

  static BasisDir axis(Space space, int index) {
    if (!space.is_flat()) throw std::invalid_argument("axis tangent needs a flat space");
    if (index < 0 || index >= space.flat_dim()) throw std::invalid_argument("axis index out of range");
    BasisDir d(Kind::Axis, std::move(space));
    d.index_ = index;
    return d;
  }
  static BasisDir delta(Space dist_space, std::shared_ptr<const DeltaKey> term) {
    if (dist_space.kind() != Space::Kind::Dist) throw std::invalid_argument("delta tangent needs a bang space");
    BasisDir d(Kind::Delta, std::move(dist_space));
    d.term_ = std::move(term);
    return d;
  }
  static BasisDir left(Space prod_space, BasisDir inner) {
    BasisDir d(Kind::Left, std::move(prod_space));
    d.child_ = std::make_shared<BasisDir>(std::move(inner));
    return d;
  }
  static BasisDir right(Space prod_space, BasisDir inner) {
    BasisDir d(Kind::Right, std::move(prod_space));
    d.child_ = std::make_shared<BasisDir>(std::move(inner));
    return d;
  }

  Kind kind() const { return kind_; }
  const Space& space() const { return space_; }
  int index() const { return index_; }
  const DeltaKey& delta_term() const {
    if (!term_) throw std::logic_error("tangent has no delta payload");
    return *term_;
  }
  const BasisDir& child() const {
    if (!child_) throw std::logic_error("tangent has no child");
    return *child_;
  }

  bool operator==(const BasisDir& o) const { return compare(*this, o) == 0; }
  bool operator<(const BasisDir& o) const { return compare(*this, o) < 0; }

  // The tangent reinterpreted as an element of the space.
  Point to_point() const;

  std::string to_string() const;

 private:
  BasisDir(Kind k, Space s) : kind_(k), space_(std::move(s)) {}

  Kind kind_;
  Space space_;
  int index_ = 0;
  std::shared_ptr<const DeltaKey> term_;
  std::shared_ptr<const BasisDir> child_;
};

// Base point plus sorted directions: the identity of one delta term with the
// coefficient stripped.
struct DeltaKey {
  Point base;
  std::vector<BasisDir> dirs;

  int order() const { return static_cast<int>(dirs.size()); }
  std::string to_string() const;
};

struct DeltaKeyLess {
  bool operator()(const DeltaKey& a, const DeltaKey& b) const { return compare(a, b) < 0; }
};

// One term of a distribution, as handed to constructors.
struct DeltaTerm {
  Rational coeff;
  DeltaKey key;
};

// Finite combination of point evaluations and their directional derivatives
// over a common space. Canonical form: directions expanded over basis
// tangents and sorted, terms merged, zero coefficients dropped.
class Distribution {
 public:
  explicit Distribution(Space space) : space_(std::move(space)) {}

  const Space& space() const { return space_; }
  Space dist_space() const { return Space::dist(space_); }

  const std::map<DeltaKey, Rational, DeltaKeyLess>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t term_count() const { return entries_.size(); }

  int order() const {
    int m = 0;
    for (const auto& [k, c] : entries_) m = std::max(m, k.order());
    return m;
  }

  // Inserts coeff * D_dirs delta_base with the directions already in basis
  // form; sorts and merges.
  void add_term_basis(const Rational& coeff, Point base, std::vector<BasisDir> dirs);

  // Inserts a term whose directions are arbitrary tangent points, expanding
  // each by multilinearity.
  void add_term(const Rational& coeff, const Point& base, const std::vector<Point>& dirs);

  Distribution add(const Distribution& o) const {
    require_space(o);
    Distribution r = *this;
    for (const auto& [k, c] : o.entries_) r.add_term_basis(c, k.base, k.dirs);
    return r;
  }
  Distribution scale(const Rational& c) const {
    Distribution r(space_);
    if (c == 0) return r;
    r.entries_ = entries_;
    for (auto& [k, v] : r.entries_) v *= c;
    return r;
  }
  Distribution sub(const Distribution& o) const { return add(o.scale(-1)); }

  bool operator==(const Distribution& o) const { return space_ == o.space_ && compare(*this, o) == 0; }
  bool operator!=(const Distribution& o) const { return !(*this == o); }

  // Sum of absolute coefficients of the difference: an exact residual that is
  // zero exactly on equality.
  Rational residual(const Distribution& o) const {
    Rational s = 0;
    for (const auto& [k, c] : sub(o).entries_) s += rat_abs(c);
    return s;
  }

  std::string to_string() const;

 private:
  void require_space(const Distribution& o) const {
    if (space_ != o.space_) throw std::invalid_argument("distribution space mismatch");
  }

  Space space_;
  std::map<DeltaKey, Rational, DeltaKeyLess> entries_;
};

// Expansion of a tangent point into basis tangents with coefficients.
std::vector<std::pair<Rational, BasisDir>> expand_tangent(const Point& v);

// Element of a tensor power of bang spaces: terms are coefficient times a
// tuple of pure delta factors, expanded multilinearly and kept sorted.
class TensorElem {
 public:
  explicit TensorElem(std::vector<Space> factor_spaces) : spaces_(std::move(factor_spaces)) {
    if (spaces_.empty()) throw std::invalid_argument("tensor needs at least one factor");
  }

  int arity() const { return static_cast<int>(spaces_.size()); }
  const std::vector<Space>& factor_spaces() const { return spaces_; }

  struct FactorsLess {
    bool operator()(const std::vector<DeltaKey>& a, const std::vector<DeltaKey>& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      for (std::size_t i = 0; i < a.size(); ++i) {
        int c = compare(a[i], b[i]);
        if (c) return c < 0;
      }
      return false;
    }
  };

  const std::map<std::vector<DeltaKey>, Rational, FactorsLess>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  void add_term(const Rational& coeff, std::vector<DeltaKey> factors) {
    if (coeff == 0) return;
    if (static_cast<int>(factors.size()) != arity()) throw std::invalid_argument("tensor arity mismatch");
    auto it = entries_.find(factors);
    if (it == entries_.end()) {
      entries_.emplace(std::move(factors), coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) entries_.erase(it);
    }
  }

  TensorElem add(const TensorElem& o) const {
    require_shape(o);
    TensorElem r = *this;
    for (const auto& [f, c] : o.entries_) r.add_term(c, f);
    return r;
  }
  TensorElem scale(const Rational& c) const {
    TensorElem r(spaces_);
    if (c == 0) return r;
    r.entries_ = entries_;
    for (auto& [f, v] : r.entries_) v *= c;
    return r;
  }
  TensorElem sub(const TensorElem& o) const { return add(o.scale(-1)); }

  bool operator==(const TensorElem& o) const {
    if (spaces_.size() != o.spaces_.size()) return false;
    for (std::size_t i = 0; i < spaces_.size(); ++i)
      if (spaces_[i] != o.spaces_[i]) return false;
    if (entries_.size() != o.entries_.size()) return false;
    auto it = entries_.begin();
    auto jt = o.entries_.begin();
    for (; it != entries_.end(); ++it, ++jt) {
      if (it->second != jt->second) return false;
      if (FactorsLess{}(it->first, jt->first) || FactorsLess{}(jt->first, it->first)) return false;
    }
    return true;
  }
  bool operator!=(const TensorElem& o) const { return !(*this == o); }

  Rational residual(const TensorElem& o) const {
    Rational s = 0;
    for (const auto& [f, c] : sub(o).entries_) s += rat_abs(c);
    return s;
  }

  // The factor of one term as a distribution on its own space.
  Distribution factor_distribution(const std::vector<DeltaKey>& factors, int i) const {
    Distribution d(spaces_[static_cast<std::size_t>(i)]);
    d.add_term_basis(1, factors[static_cast<std::size_t>(i)].base, factors[static_cast<std::size_t>(i)].dirs);
    return d;
  }

  // Linear extension of a per-factor map that keeps the factor count.
  template <typename Fn>  // Fn: (const Distribution&) -> Distribution
  TensorElem map_factor(int i, Fn fn, const Space& new_space) const {
    std::vector<Space> spaces = spaces_;
    spaces[static_cast<std::size_t>(i)] = new_space;
    TensorElem out(spaces);
    for (const auto& [factors, c] : entries_) {
      Distribution mapped = fn(factor_distribution(factors, i));
      for (const auto& [k, mc] : mapped.entries()) {
        std::vector<DeltaKey> nf = factors;
        nf[static_cast<std::size_t>(i)] = k;
        out.add_term(c * mc, std::move(nf));
      }
    }
    return out;
  }

  // Linear extension of a map splitting factor i into two factors.
  template <typename Fn>  // Fn: (const Distribution&) -> TensorElem of arity 2
  TensorElem split_factor(int i, Fn fn, const Space& s1, const Space& s2) const {
    std::vector<Space> spaces;
    for (int j = 0; j < arity(); ++j) {
      if (j == i) {
        spaces.push_back(s1);
        spaces.push_back(s2);
      } else {
        spaces.push_back(spaces_[static_cast<std::size_t>(j)]);
      }
    }
    TensorElem out(spaces);
    for (const auto& [factors, c] : entries_) {
      TensorElem split = fn(factor_distribution(factors, i));
      for (const auto& [sf, sc] : split.entries()) {
        std::vector<DeltaKey> nf;
        for (int j = 0; j < arity(); ++j) {
          if (j == i) {
            nf.push_back(sf[0]);
            nf.push_back(sf[1]);
          } else {
            nf.push_back(factors[static_cast<std::size_t>(j)]);
          }
        }
        out.add_term(c * sc, std::move(nf));
      }
    }
    return out;
  }

  // Linear extension of a map collapsing adjacent factors i, i+1 into one.
  template <typename Fn>  // Fn: (const Distribution&, const Distribution&) -> Distribution
  TensorElem merge_factors(int i, Fn fn, const Space& new_space) const {
    std::vector<Space> spaces;
    for (int j = 0; j < arity(); ++j) {
      if (j == i) {
        spaces.push_back(new_space);
      } else if (j != i + 1) {
        spaces.push_back(spaces_[static_cast<std::size_t>(j)]);
      }
    }
    TensorElem out(spaces);
    for (const auto& [factors, c] : entries_) {
      Distribution merged = fn(factor_distribution(factors, i), factor_distribution(factors, i + 1));
      for (const auto& [k, mc] : merged.entries()) {
        std::vector<DeltaKey> nf;
        for (int j = 0; j < arity(); ++j) {
          if (j == i)
            nf.push_back(k);
          else if (j != i + 1)
            nf.push_back(factors[static_cast<std::size_t>(j)]);
        }
        out.add_term(c * mc, std::move(nf));
      }
    }
    return out;
  }

  // Linear extension of a scalar valued map on factor i.
  template <typename Fn>  // Fn: (const Distribution&) -> Rational
  TensorElem contract_factor(int i, Fn fn) const {
    if (arity() < 2) throw std::invalid_argument("contracting the last factor");
    std::vector<Space> spaces;
    for (int j = 0; j < arity(); ++j)
      if (j != i) spaces.push_back(spaces_[static_cast<std::size_t>(j)]);
    TensorElem out(spaces);
    for (const auto& [factors, c] : entries_) {
      Rational s = fn(factor_distribution(factors, i));
      if (s == 0) continue;
      std::vector<DeltaKey> nf;
      for (int j = 0; j < arity(); ++j)
        if (j != i) nf.push_back(factors[static_cast<std::size_t>(j)]);
      out.add_term(c * s, std::move(nf));
    }
    return out;
  }

  TensorElem swap_factors(int i, int j) const {
    std::vector<Space> spaces = spaces_;
    std::swap(spaces[static_cast<std::size_t>(i)], spaces[static_cast<std::size_t>(j)]);
    TensorElem out(spaces);
    for (const auto& [factors, c] : entries_) {
      std::vector<DeltaKey> nf = factors;
      std::swap(nf[static_cast<std::size_t>(i)], nf[static_cast<std::size_t>(j)]);
      out.add_term(c, std::move(nf));
    }
    return out;
  }

  // Arity one tensors are plain distributions.
  Distribution to_distribution() const {
    if (arity() != 1) throw std::invalid_argument("tensor has more than one factor");
    Distribution d(spaces_[0]);
    for (const auto& [f, c] : entries_) d.add_term_basis(c, f[0].base, f[0].dirs);
    return d;
  }

  std::string to_string() const;

 private:
  void require_shape(const TensorElem& o) const {
    if (spaces_.size() != o.spaces_.size()) throw std::invalid_argument("tensor arity mismatch");
    for (std::size_t i = 0; i < spaces_.size(); ++i)
      if (spaces_[i] != o.spaces_[i]) throw std::invalid_argument("tensor factor space mismatch");
  }

  std::vector<Space> spaces_;
  std::map<std::vector<DeltaKey>, Rational, FactorsLess> entries_;
};

// Tensor of distributions, expanded multilinearly.
inline TensorElem tensor_of(const std::vector<Distribution>& parts) {
  std::vector<Space> spaces;
  for (const auto& p : parts) spaces.push_back(p.space());
  TensorElem out(spaces);
  std::vector<std::pair<Rational, std::vector<DeltaKey>>> acc = {{Rational(1), {}}};
  for (const auto& p : parts) {
    std::vector<std::pair<Rational, std::vector<DeltaKey>>> next;
    for (const auto& [c, keys] : acc) {
      for (const auto& [k, pc] : p.entries()) {
        std::vector<DeltaKey> nk = keys;
        nk.push_back(k);
        next.emplace_back(c * pc, std::move(nk));
      }
    }
    acc = std::move(next);
  }
  for (auto& [c, keys] : acc) out.add_term(c, std::move(keys));
  return out;
}

inline TensorElem tensor_concat(const TensorElem& a, const TensorElem& b) {
  std::vector<Space> spaces = a.factor_spaces();
  for (const auto& s : b.factor_spaces()) spaces.push_back(s);
  TensorElem out(spaces);
  for (const auto& [fa, ca] : a.entries()) {
    for (const auto& [fb, cb] : b.entries()) {
      std::vector<DeltaKey> nf = fa;
      for (const auto& k : fb) nf.push_back(k);
      out.add_term(ca * cb, std::move(nf));
    }
  }
  return out;
}

// ---- Point ----

inline Point Point::from_vector(const Vector& v) {
  const Space& s = v.space();
  if (s.kind() == Space::Kind::Prod) {
    const Space& l = s.left();
    const Space& r = s.right();
    std::vector<Rational> lc(v.coords().begin(), v.coords().begin() + l.flat_dim());
    std::vector<Rational> rc(v.coords().begin() + l.flat_dim(), v.coords().end());
    return pair(from_vector(Vector(l, std::move(lc))), from_vector(Vector(r, std::move(rc))));
  }
  Point p(s);
  p.vec_ = std::make_shared<Vector>(v);
  return p;
}

inline Point Point::from_distribution(Distribution d) {
  Point p(d.dist_space());
  p.dist_ = std::make_shared<Distribution>(std::move(d));
  return p;
}

inline Point Point::pair(Point left, Point right) {
  Point p(Space::prod(left.space_, right.space_));
  p.left_ = std::make_shared<Point>(std::move(left));
  p.right_ = std::make_shared<Point>(std::move(right));
  return p;
}

inline Point Point::zero(const Space& space) {
  switch (space.kind()) {
    case Space::Kind::RealN:
    case Space::Kind::UnitSp:
      return from_vector(Vector::zero(space));
    case Space::Kind::Dist:
      return from_distribution(Distribution(space.inner()));
    case Space::Kind::Prod:
      return pair(zero(space.left()), zero(space.right()));
    default:
      throw std::invalid_argument("no point representation for " + space.to_string());
  }
}

inline Point Point::add(const Point& other) const {
  if (space_ != other.space_) throw std::invalid_argument("point space mismatch");
  if (vec_) return from_vector(*vec_ + other.vector());
  if (dist_) return from_distribution(dist_->add(other.distribution()));
  return pair(left_->add(other.left()), right_->add(other.right()));
}

inline Point Point::scale(const Rational& c) const {
  if (vec_) return from_vector(*vec_ * c);
  if (dist_) return from_distribution(dist_->scale(c));
  return pair(left_->scale(c), right_->scale(c));
}

inline bool Point::is_zero() const {
  if (vec_) return vec_->is_zero();
  if (dist_) return dist_->is_zero();
  return left_->is_zero() && right_->is_zero();
}

inline bool Point::operator==(const Point& o) const { return space_ == o.space_ && compare(*this, o) == 0; }

inline std::string Point::to_string() const {
  if (vec_) return vec_->to_string();
  if (dist_) return dist_->to_string();
  return "(" + left_->to_string() + ", " + right_->to_string() + ")";
}

// ---- comparisons ----

inline int compare(const Point& a, const Point& b) {
  if (a.space() != b.space()) throw std::invalid_argument("comparing points of different spaces");
  if (a.is_vector()) return compare(a.vector(), b.vector());
  if (a.space().kind() == Space::Kind::Dist) return compare(a.distribution(), b.distribution());
  int c = compare(a.left(), b.left());
  if (c) return c;
  return compare(a.right(), b.right());
}

inline int compare(const BasisDir& a, const BasisDir& b) {
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case BasisDir::Kind::Axis:
      if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
      return 0;
    case BasisDir::Kind::Delta:
      return compare(a.delta_term(), b.delta_term());
    case BasisDir::Kind::Left:
    case BasisDir::Kind::Right:
      return compare(a.child(), b.child());
  }
  return 0;
}

inline int compare(const DeltaKey& a, const DeltaKey& b) {
  if (a.dirs.size() != b.dirs.size()) return a.dirs.size() < b.dirs.size() ? -1 : 1;
  int c = compare(a.base, b.base);
  if (c) return c;
  for (std::size_t i = 0; i < a.dirs.size(); ++i) {
    c = compare(a.dirs[i], b.dirs[i]);
    if (c) return c;
  }
  return 0;
}

inline int compare(const Distribution& a, const Distribution& b) {
  auto it = a.entries().begin();
  auto jt = b.entries().begin();
  for (; it != a.entries().end() && jt != b.entries().end(); ++it, ++jt) {
    int c = compare(it->first, jt->first);
    if (c) return c;
    if (it->second != jt->second) return it->second < jt->second ? -1 : 1;
  }
  if (it != a.entries().end()) return 1;
  if (jt != b.entries().end()) return -1;
  return 0;
}

// ---- BasisDir ----

inline Point BasisDir::to_point() const {
  switch (kind_) {
    case Kind::Axis:
      return Point::from_vector(Vector::basis(space_, index_));
    case Kind::Delta: {
      Distribution d(space_.inner());
      d.add_term_basis(1, term_->base, term_->dirs);
      return Point::from_distribution(std::move(d));
    }
    case Kind::Left:
      return Point::pair(child_->to_point(), Point::zero(space_.right()));
    case Kind::Right:
      return Point::pair(Point::zero(space_.left()), child_->to_point());
  }
  throw std::logic_error("unreachable");
}

inline std::string BasisDir::to_string() const {
  switch (kind_) {
    case Kind::Axis:
      return "e" + std::to_string(index_);
    case Kind::Delta:
      return term_->to_string();
    case Kind::Left:
      return "inl " + child_->to_string();
    case Kind::Right:
      return "inr " + child_->to_string();
  }
  return "?";
}

// Flat points flatten to a single coordinate vector and back.
inline Vector flatten_point(const Point& p) {
  if (!p.space().is_flat()) throw std::invalid_argument("point does not flatten: " + p.space().to_string());
  std::vector<Rational> coords;
  std::function<void(const Point&)> walk = [&](const Point& q) {
    if (q.is_vector()) {
      for (const auto& c : q.vector().coords()) coords.push_back(c);
    } else {
      walk(q.left());
      walk(q.right());
    }
  };
  walk(p);
  return Vector(p.space(), std::move(coords));
}

// ---- expansion and insertion ----

inline std::vector<std::pair<Rational, BasisDir>> expand_tangent(const Point& v) {
  std::vector<std::pair<Rational, BasisDir>> out;
  const Space& s = v.space();
  switch (s.kind()) {
    case Space::Kind::RealN:
    case Space::Kind::UnitSp: {
      const Vector& vec = v.vector();
      for (int i = 0; i < vec.dim(); ++i)
        if (vec[i] != 0) out.emplace_back(vec[i], BasisDir::axis(s, i));
      break;
    }
    case Space::Kind::Dist: {
      for (const auto& [k, c] : v.distribution().entries())
        out.emplace_back(c, BasisDir::delta(s, std::make_shared<DeltaKey>(k)));
      break;
    }
    case Space::Kind::Prod: {
      for (auto& [c, d] : expand_tangent(v.left())) out.emplace_back(c, BasisDir::left(s, std::move(d)));
      for (auto& [c, d] : expand_tangent(v.right())) out.emplace_back(c, BasisDir::right(s, std::move(d)));
      break;
    }
    default:
      throw std::invalid_argument("no tangent expansion for " + s.to_string());
  }
  return out;
}

inline void Distribution::add_term_basis(const Rational& coeff, Point base, std::vector<BasisDir> dirs) {
  if (coeff == 0) return;
  if (base.space() != space_) throw std::invalid_argument("delta base lives in " + base.space().to_string() +
                                                          ", expected " + space_.to_string());
  for (const auto& d : dirs)
    if (d.space() != space_) throw std::invalid_argument("tangent lives in the wrong space");
  std::sort(dirs.begin(), dirs.end());
  DeltaKey key{std::move(base), std::move(dirs)};
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    entries_.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) entries_.erase(it);
  }
}

inline void Distribution::add_term(const Rational& coeff, const Point& base, const std::vector<Point>& dirs) {
  if (coeff == 0) return;
  std::vector<std::pair<Rational, std::vector<BasisDir>>> acc = {{coeff, {}}};
  for (const Point& v : dirs) {
    if (v.space() != space_) throw std::invalid_argument("tangent lives in the wrong space");
    std::vector<std::pair<Rational, BasisDir>> expansion = expand_tangent(v);
    std::vector<std::pair<Rational, std::vector<BasisDir>>> next;
    for (const auto& [c, ds] : acc) {
      for (const auto& [ec, ed] : expansion) {
        std::vector<BasisDir> nd = ds;
        nd.push_back(ed);
        next.emplace_back(c * ec, std::move(nd));
      }
    }
    acc = std::move(next);
  }
  for (auto& [c, ds] : acc) add_term_basis(c, base, std::move(ds));
}

// ---- printing ----

inline std::string DeltaKey::to_string() const {
  std::string s;
  for (const auto& d : dirs) s += "D[" + d.to_string() + "]";
  return s + "d{" + base.to_string() + "}";
}

inline std::string Distribution::to_string() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : entries_) {
    if (!s.empty()) s += " + ";
    s += codelta::to_string(c) + "*" + k.to_string();
  }
  return s;
}

inline std::string TensorElem::to_string() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (const auto& [f, c] : entries_) {
    if (!s.empty()) s += " + ";
    s += codelta::to_string(c);
    for (const auto& k : f) s += " (x) " + k.to_string();
  }
  return s;
}

}  // namespace codelta
