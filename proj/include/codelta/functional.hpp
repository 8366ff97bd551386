#pragma once

#include <codelta/distribution.hpp>
#include <codelta/poly.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

class TestFunctional;

// Linear coordinate of a test functional: what the polynomial head consumes.
// On flat spaces a coordinate projection; on bang spaces the pairing against
// an inner functional, which makes cylinder functionals on nested spaces
// expressible; on products a one-sided probe.
class Probe {
 public:
  enum class Kind { Coord, Pairing, Left, Right };

  static Probe coord(int j) {
    Probe p(Kind::Coord);
    p.index_ = j;
    return p;
  }
  static Probe pairing(TestFunctional inner);
  static Probe left(Probe inner) {
    Probe p(Kind::Left);
    p.child_ = std::make_shared<Probe>(std::move(inner));
    return p;
  }
  static Probe right(Probe inner) {
    Probe p(Kind::Right);
    p.child_ = std::make_shared<Probe>(std::move(inner));
    return p;
  }

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  const TestFunctional& inner() const;
  const Probe& child() const { return *child_; }

 private:
  explicit Probe(Kind k) : kind_(k) {}

  Kind kind_;
  int index_ = 0;
  std::shared_ptr<const TestFunctional> inner_;
  std::shared_ptr<const Probe> child_;
};

// Smooth test function on a space: a polynomial head applied to finitely many
// linear probes. These are the functions distributions are paired against;
// every probe is linear, so directional derivatives of a pairing reduce to
// derivatives of the head along the probe images of the tangents.
class TestFunctional {
 public:
  TestFunctional(Space space, PolyMap head, std::vector<Probe> probes)
      : space_(std::move(space)), head_(std::move(head)), probes_(std::move(probes)) {
    if (head_.outputs() != 1) throw std::invalid_argument("functional head must be scalar valued");
    if (head_.vars() != static_cast<int>(probes_.size()))
      throw std::invalid_argument("head arity must match the probe count");
  }

  // Polynomial functional on a flat space: coordinates feed the head.
  static TestFunctional polynomial(const PolyMap& p) {
    if (p.outputs() != 1) throw std::invalid_argument("functional head must be scalar valued");
    std::vector<Probe> probes;
    for (int j = 0; j < p.vars(); ++j) probes.push_back(Probe::coord(j));
    return TestFunctional(p.domain(), p, std::move(probes));
  }

  static TestFunctional constant(const Space& space, const Rational& c) {
    PolyMap head(Space::real(0), Space::real(1));
    head.add_term(0, {}, c);
    return TestFunctional(space, std::move(head), {});
  }

  // Cylinder functional on a bang space: pair against the inner functionals,
  // then apply the head.
  static TestFunctional cylinder(const Space& dist_space, const PolyMap& head,
                                 const std::vector<TestFunctional>& inner) {
    if (dist_space.kind() != Space::Kind::Dist) throw std::invalid_argument("cylinder needs a bang space");
    std::vector<Probe> probes;
    for (const auto& g : inner) {
      if (g.space() != dist_space.inner()) throw std::invalid_argument("inner functional on the wrong space");
      probes.push_back(Probe::pairing(g));
    }
    return TestFunctional(dist_space, head, std::move(probes));
  }

  // Functional on a product that only looks at one side.
  static TestFunctional on_left(const Space& prod, const TestFunctional& f) {
    if (prod.kind() != Space::Kind::Prod || prod.left() != f.space())
      throw std::invalid_argument("left lift space mismatch");
    std::vector<Probe> probes;
    for (const auto& p : f.probes_) probes.push_back(Probe::left(p));
    return TestFunctional(prod, f.head_, std::move(probes));
  }
  static TestFunctional on_right(const Space& prod, const TestFunctional& f) {
    if (prod.kind() != Space::Kind::Prod || prod.right() != f.space())
      throw std::invalid_argument("right lift space mismatch");
    std::vector<Probe> probes;
    for (const auto& p : f.probes_) probes.push_back(Probe::right(p));
    return TestFunctional(prod, f.head_, std::move(probes));
  }

  const Space& space() const { return space_; }
  const PolyMap& head() const { return head_; }
  const std::vector<Probe>& probes() const { return probes_; }

  // A purely coordinate-probed functional is an ordinary polynomial.
  bool is_polynomial() const {
    for (const auto& p : probes_)
      if (p.kind() != Probe::Kind::Coord) return false;
    return space_.is_flat();
  }
  PolyMap as_polynomial() const {
    if (!is_polynomial()) throw std::invalid_argument("functional has non-coordinate probes");
    std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(probes_.size()),
                                            std::vector<Rational>(static_cast<std::size_t>(space_.flat_dim()), Rational(0)));
    for (std::size_t i = 0; i < probes_.size(); ++i)
      rows[i][static_cast<std::size_t>(probes_[i].index())] = 1;
    PolyMap select = PolyMap::linear(space_, Space::real(static_cast<int>(probes_.size())), rows);
    return poly_compose(head_, select);
  }

 private:
  Space space_;
  PolyMap head_;
  std::vector<Probe> probes_;
};

inline Probe Probe::pairing(TestFunctional inner) {
  Probe p(Kind::Pairing);
  p.inner_ = std::make_shared<TestFunctional>(std::move(inner));
  return p;
}

inline const TestFunctional& Probe::inner() const {
  if (!inner_) throw std::logic_error("probe has no inner functional");
  return *inner_;
}

Rational pair(const Distribution& u, const TestFunctional& f);

namespace detail {

inline Rational probe_point(const Probe& p, const Point& x) {
  switch (p.kind()) {
    case Probe::Kind::Coord:
      return x.vector()[p.index()];
    case Probe::Kind::Pairing:
      return pair(x.distribution(), p.inner());
    case Probe::Kind::Left:
      return probe_point(p.child(), x.left());
    case Probe::Kind::Right:
      return probe_point(p.child(), x.right());
  }
  throw std::logic_error("unreachable");
}

inline Rational probe_tangent(const Probe& p, const BasisDir& d) {
  switch (p.kind()) {
    case Probe::Kind::Coord:
      if (d.kind() != BasisDir::Kind::Axis) throw std::invalid_argument("coordinate probe against non-axis tangent");
      return d.index() == p.index() ? 1 : 0;
    case Probe::Kind::Pairing: {
      if (d.kind() != BasisDir::Kind::Delta) throw std::invalid_argument("pairing probe against non-delta tangent");
      Distribution one(d.space().inner());
      one.add_term_basis(1, d.delta_term().base, d.delta_term().dirs);
      return pair(one, p.inner());
    }
    case Probe::Kind::Left:
      if (d.kind() == BasisDir::Kind::Right) return 0;
      if (d.kind() != BasisDir::Kind::Left) throw std::invalid_argument("probe and tangent shapes disagree");
      return probe_tangent(p.child(), d.child());
    case Probe::Kind::Right:
      if (d.kind() == BasisDir::Kind::Left) return 0;
      if (d.kind() != BasisDir::Kind::Right) throw std::invalid_argument("probe and tangent shapes disagree");
      return probe_tangent(p.child(), d.child());
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

// The bracket <u, f>: evaluate and differentiate f against the distribution.
// Each term c * D_{d1..dk} delta_x contributes c times the k-fold directional
// derivative of the head along the probe images of the tangents, evaluated at
// the probe image of the base.
inline Rational pair(const Distribution& u, const TestFunctional& f) {
  if (f.space() != u.space())
    throw std::invalid_argument("pairing space mismatch: " + u.space().to_string() + " vs " + f.space().to_string());
  const int m = static_cast<int>(f.probes().size());
  const Space head_dom = Space::real(m);
  Rational acc = 0;
  for (const auto& [key, coeff] : u.entries()) {
    std::vector<Rational> base_img;
    base_img.reserve(static_cast<std::size_t>(m));
    for (const auto& p : f.probes()) base_img.push_back(detail::probe_point(p, key.base));
    PolyMap q = f.head();
    for (const auto& d : key.dirs) {
      std::vector<Rational> dir_img;
      dir_img.reserve(static_cast<std::size_t>(m));
      for (const auto& p : f.probes()) dir_img.push_back(detail::probe_tangent(p, d));
      q = q.dir_derivative(Vector(head_dom, dir_img));
      if (q.is_zero()) break;
    }
    if (q.is_zero()) continue;
    acc += coeff * poly_eval(q, Vector(head_dom, base_img))[0];
  }
  return acc;
}

// Bracket against a tensor: one functional per factor, multiplied out.
inline Rational pair_tensor(const TensorElem& t, const std::vector<TestFunctional>& fs) {
  if (static_cast<int>(fs.size()) != t.arity()) throw std::invalid_argument("one functional per tensor factor");
  for (int i = 0; i < t.arity(); ++i)
    if (fs[static_cast<std::size_t>(i)].space() != t.factor_spaces()[static_cast<std::size_t>(i)])
      throw std::invalid_argument("tensor pairing space mismatch");
  Rational acc = 0;
  for (const auto& [factors, c] : t.entries()) {
    Rational prod = c;
    for (int i = 0; i < t.arity() && prod != 0; ++i)
      prod *= pair(t.factor_distribution(factors, i), fs[static_cast<std::size_t>(i)]);
    acc += prod;
  }
  return acc;
}

// Pointwise product of functionals on the same space: probes concatenate and
// the heads multiply on renumbered variables.
inline TestFunctional tf_mul(const TestFunctional& f, const TestFunctional& g) {
  if (f.space() != g.space()) throw std::invalid_argument("product of functionals on different spaces");
  const int mf = static_cast<int>(f.probes().size());
  const int mg = static_cast<int>(g.probes().size());
  const Space dom = Space::real(mf + mg);
  PolyMap fh(dom, Space::real(1));
  for (const auto& [k, c] : f.head().terms()) {
    std::vector<unsigned> e = k.exps;
    e.resize(static_cast<std::size_t>(mf + mg), 0);
    fh.add_term(0, std::move(e), c);
  }
  PolyMap gh(dom, Space::real(1));
  for (const auto& [k, c] : g.head().terms()) {
    std::vector<unsigned> e(static_cast<std::size_t>(mf), 0);
    for (unsigned x : k.exps) e.push_back(x);
    gh.add_term(0, std::move(e), c);
  }
  std::vector<Probe> probes = f.probes();
  for (const auto& p : g.probes()) probes.push_back(p);
  return TestFunctional(f.space(), poly_mul(fh, gh), std::move(probes));
}

inline TestFunctional tf_add(const TestFunctional& f, const TestFunctional& g) {
  if (f.space() != g.space()) throw std::invalid_argument("sum of functionals on different spaces");
  const int mf = static_cast<int>(f.probes().size());
  const int mg = static_cast<int>(g.probes().size());
  const Space dom = Space::real(mf + mg);
  PolyMap h(dom, Space::real(1));
  for (const auto& [k, c] : f.head().terms()) {
    std::vector<unsigned> e = k.exps;
    e.resize(static_cast<std::size_t>(mf + mg), 0);
    h.add_term(0, std::move(e), c);
  }
  for (const auto& [k, c] : g.head().terms()) {
    std::vector<unsigned> e(static_cast<std::size_t>(mf), 0);
    for (unsigned x : k.exps) e.push_back(x);
    h.add_term(0, std::move(e), c);
  }
  std::vector<Probe> probes = f.probes();
  for (const auto& p : g.probes()) probes.push_back(p);
  return TestFunctional(f.space(), std::move(h), std::move(probes));
}

}  // namespace codelta
