#pragma once

#include <codelta/distribution.hpp>
#include <codelta/functional.hpp>
#include <codelta/jet.hpp>
#include <codelta/partitions.hpp>
#include <codelta/poly.hpp>

#include <functional>
#include <stdexcept>
#include <vector>

namespace codelta {

// Point evaluation.
inline Distribution dirac(const Point& x) {
  Distribution d(x.space());
  d.add_term_basis(1, x, {});
  return d;
}

inline Distribution dirac(const Vector& x) { return dirac(Point::from_vector(x)); }

// Tangent at the origin: the derivative of the dirac embedding at zero. This
// is the linear route into the exponential.
inline Distribution coder(const Point& v) {
  Distribution d(v.space());
  d.add_term(1, Point::zero(v.space()), {v});
  return d;
}

inline Distribution coder(const Vector& v) { return coder(Point::from_vector(v)); }

// Monoid unit: evaluation at the origin.
inline Distribution unit_nu(const Space& space) { return dirac(Point::zero(space)); }

// Comonoid counit: total mass. Derivative terms carry none.
inline Rational counit_e(const Distribution& u) {
  Rational s = 0;
  for (const auto& [k, c] : u.entries())
    if (k.order() == 0) s += c;
  return s;
}

// Comultiplication: deltas are set-like, so each term splits its directions
// over the two legs in every way.
inline TensorElem comul_delta(const Distribution& u) {
  TensorElem out({u.space(), u.space()});
  for (const auto& [key, coeff] : u.entries()) {
    const int k = key.order();
    for_each_subset(k, [&](const std::vector<int>& in, const std::vector<int>& rest) {
      std::vector<BasisDir> dl, dr;
      for (int i : in) dl.push_back(key.dirs[static_cast<std::size_t>(i)]);
      for (int i : rest) dr.push_back(key.dirs[static_cast<std::size_t>(i)]);
      Distribution l(u.space()), r(u.space());
      l.add_term_basis(1, key.base, std::move(dl));
      r.add_term_basis(1, key.base, std::move(dr));
      out.add_term(coeff, {l.entries().begin()->first, r.entries().begin()->first});
    });
  }
  return out;
}

// Convolution: bases add, directions concatenate.
inline Distribution conv_nabla(const TensorElem& t) {
  if (t.arity() != 2 || t.factor_spaces()[0] != t.factor_spaces()[1])
    throw std::invalid_argument("convolution needs two factors on one space");
  Distribution out(t.factor_spaces()[0]);
  for (const auto& [factors, c] : t.entries()) {
    std::vector<BasisDir> dirs = factors[0].dirs;
    for (const auto& d : factors[1].dirs) dirs.push_back(d);
    out.add_term_basis(c, factors[0].base.add(factors[1].base), std::move(dirs));
  }
  return out;
}

inline Distribution conv_nabla(const Distribution& a, const Distribution& b) {
  return conv_nabla(tensor_of({a, b}));
}

// Counit of the comonad: a delta evaluates to its base point, a first
// derivative to its direction, higher orders vanish.
inline Point eps(const Distribution& u) {
  Point acc = Point::zero(u.space());
  for (const auto& [key, c] : u.entries()) {
    if (key.order() == 0)
      acc = acc.add(key.base.scale(c));
    else if (key.order() == 1)
      acc = acc.add(key.dirs[0].to_point().scale(c));
  }
  return acc;
}

// Appends one derivative along a tangent: the module action that interprets
// the differential rule.
inline Distribution derive_dA(const Point& v, const Distribution& u) {
  if (v.space() != u.space()) throw std::invalid_argument("tangent space mismatch");
  Distribution out(u.space());
  for (const auto& [key, c] : u.entries()) {
    for (const auto& [ec, ed] : expand_tangent(v)) {
      std::vector<BasisDir> dirs = key.dirs;
      dirs.push_back(ed);
      out.add_term_basis(c * ec, key.base, std::move(dirs));
    }
  }
  return out;
}

// Functorial action on a polynomial map between flat spaces, by the
// multilinear chain rule: each set partition of a term's derivative slots
// differentiates the map once per block.
inline Distribution pushforward(const PolyMap& f, const Distribution& u) {
  if (f.domain().flat_dim() != u.space().flat_dim() || !u.space().is_flat())
    throw std::invalid_argument("pushforward needs a flat domain matching the distribution");
  const Space& cod = f.codomain();
  Distribution out(cod);
  for (const auto& [key, coeff] : u.entries()) {
    Vector base = flatten_point(key.base);
    const int k = key.order();
    std::vector<int> coords;
    for (const auto& d : key.dirs) {
      // flat-space tangents are axes, possibly nested through products
      const BasisDir* cur = &d;
      int offset = 0;
      while (cur->kind() != BasisDir::Kind::Axis) {
        if (cur->kind() == BasisDir::Kind::Right) offset += cur->space().left().flat_dim();
        cur = &cur->child();
      }
      coords.push_back(offset + cur->index());
    }
    Jet jet = jet_at(f, base, k);
    for_each_set_partition(k, [&](const std::vector<std::vector<int>>& blocks) {
      std::vector<Point> dirs;
      dirs.reserve(blocks.size());
      bool dead = false;
      for (const auto& block : blocks) {
        std::vector<int> idx;
        for (int s : block) idx.push_back(coords[static_cast<std::size_t>(s)]);
        std::sort(idx.begin(), idx.end());
        Vector dv = Vector::zero(cod);
        for (int o = 0; o < cod.flat_dim(); ++o) dv[o] = jet.entry(static_cast<int>(idx.size()), JetKey{o, idx});
        if (dv.is_zero()) {
          dead = true;
          break;
        }
        dirs.push_back(Point::from_vector(dv));
      }
      if (!dead) out.add_term(coeff, Point::from_vector(jet.value()), dirs);
    });
  }
  return out;
}

// Linear map between spaces, given by its action on points.
struct LinearPointMap {
  Space domain;
  Space codomain;
  std::function<Point(const Point&)> apply;
};

// Functorial action on a linear map: bases and tangents both go through.
inline Distribution pushforward_linear(const LinearPointMap& L, const Distribution& u) {
  if (u.space() != L.domain) throw std::invalid_argument("pushforward domain mismatch");
  Distribution out(L.codomain);
  for (const auto& [key, c] : u.entries()) {
    std::vector<Point> dirs;
    dirs.reserve(key.dirs.size());
    for (const auto& d : key.dirs) dirs.push_back(L.apply(d.to_point()));
    out.add_term(c, L.apply(key.base), dirs);
  }
  return out;
}

// Comonad comultiplication: the pushforward along the dirac embedding. Each
// partition block becomes one pure delta tangent at the base.
inline Distribution comultiplication_rho(const Distribution& u) {
  Distribution out(u.dist_space());
  for (const auto& [key, coeff] : u.entries()) {
    const int k = key.order();
    for_each_set_partition(k, [&](const std::vector<std::vector<int>>& blocks) {
      std::vector<BasisDir> dirs;
      dirs.reserve(blocks.size());
      for (const auto& block : blocks) {
        std::vector<BasisDir> bd;
        for (int s : block) bd.push_back(key.dirs[static_cast<std::size_t>(s)]);
        std::sort(bd.begin(), bd.end());
        dirs.push_back(BasisDir::delta(u.dist_space(), std::make_shared<DeltaKey>(DeltaKey{key.base, std::move(bd)})));
      }
      out.add_term_basis(coeff, Point::from_distribution(dirac(key.base)), std::move(dirs));
    });
  }
  return out;
}

// Linear interpretation of a polynomial map against distributions:
// lift(f)(delta_e) = f(e), derivative terms take iterated partials. This is
// one side of the exponential adjunction; the other is lower below.
inline Vector lift_apply(const PolyMap& f, const Distribution& u) {
  if (!u.space().is_flat() || f.domain().flat_dim() != u.space().flat_dim())
    throw std::invalid_argument("lift needs a flat domain matching the distribution");
  Vector acc = Vector::zero(f.codomain());
  for (const auto& [key, c] : u.entries()) {
    PolyMap q = f;
    for (const auto& d : key.dirs) {
      const BasisDir* cur = &d;
      int offset = 0;
      while (cur->kind() != BasisDir::Kind::Axis) {
        if (cur->kind() == BasisDir::Kind::Right) offset += cur->space().left().flat_dim();
        cur = &cur->child();
      }
      q = q.partial(offset + cur->index());
      if (q.is_zero()) break;
    }
    if (q.is_zero()) continue;
    acc = acc + poly_eval(q, flatten_point(key.base)) * c;
  }
  return acc;
}

// The other adjunction direction, pointwise: a linear functional on
// distributions becomes the smooth map e -> phi(delta_e).
inline Vector lower_point(const std::function<Vector(const Distribution&)>& phi, const Vector& e) {
  return phi(dirac(e));
}

// Seely splitting: a delta on a product splits its base and sorts each
// tangent to its side, giving the tensor of the two marginals.
inline TensorElem seely_split(const Distribution& u) {
  if (u.space().kind() != Space::Kind::Prod) throw std::invalid_argument("seely split needs a product space");
  const Space& e = u.space().left();
  const Space& f = u.space().right();
  TensorElem out({e, f});
  for (const auto& [key, c] : u.entries()) {
    std::vector<BasisDir> dl, dr;
    for (const auto& d : key.dirs) {
      if (d.kind() == BasisDir::Kind::Left)
        dl.push_back(d.child());
      else if (d.kind() == BasisDir::Kind::Right)
        dr.push_back(d.child());
      else
        throw std::logic_error("product tangent with no side");
    }
    Distribution l(e), r(f);
    l.add_term_basis(1, key.base.left(), std::move(dl));
    r.add_term_basis(1, key.base.right(), std::move(dr));
    out.add_term(c, {l.entries().begin()->first, r.entries().begin()->first});
  }
  return out;
}

inline Distribution seely_merge(const TensorElem& t) {
  if (t.arity() != 2) throw std::invalid_argument("seely merge needs two factors");
  const Space& e = t.factor_spaces()[0];
  const Space& f = t.factor_spaces()[1];
  Space prod = Space::prod(e, f);
  Distribution out(prod);
  for (const auto& [factors, c] : t.entries()) {
    std::vector<BasisDir> dirs;
    for (const auto& d : factors[0].dirs) dirs.push_back(BasisDir::left(prod, d));
    for (const auto& d : factors[1].dirs) dirs.push_back(BasisDir::right(prod, d));
    out.add_term_basis(c, Point::pair(factors[0].base, factors[1].base), std::move(dirs));
  }
  return out;
}

}  // namespace codelta
