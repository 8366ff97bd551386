#pragma once

#include <codelta/rational.hpp>
#include <codelta/space.hpp>
#include <codelta/vec.hpp>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

// Syntactic certificate that a set is bounded: closed balls, finite samples,
// and the closure operations a convex bornology admits.
class BoundedCert {
 public:
  enum class Kind { Ball, FiniteSample, Hull, Union, Scale, Negate };

  static BoundedCert ball(Space space, Rational radius) {
    if (radius < 0) throw std::invalid_argument("negative ball radius");
    BoundedCert c(Kind::Ball, std::move(space));
    c.radius_ = std::move(radius);
    return c;
  }
  static BoundedCert finite_sample(Space space, std::vector<Vector> points) {
    BoundedCert c(Kind::FiniteSample, std::move(space));
    for (const auto& p : points)
      if (p.space() != c.space_) throw std::invalid_argument("sample point in wrong space");
    c.points_ = std::move(points);
    return c;
  }
  static BoundedCert hull(BoundedCert inner) {
    BoundedCert c(Kind::Hull, inner.space());
    c.children_.push_back(std::make_shared<BoundedCert>(std::move(inner)));
    return c;
  }
  static BoundedCert union_of(std::vector<BoundedCert> parts) {
    if (parts.empty()) throw std::invalid_argument("union of no certificates");
    BoundedCert c(Kind::Union, parts.front().space());
    for (auto& p : parts) {
      if (p.space() != c.space_) throw std::invalid_argument("union across spaces");
      c.children_.push_back(std::make_shared<BoundedCert>(std::move(p)));
    }
    return c;
  }
  static BoundedCert scale(Rational factor, BoundedCert inner) {
    BoundedCert c(Kind::Scale, inner.space());
    c.radius_ = std::move(factor);
    c.children_.push_back(std::make_shared<BoundedCert>(std::move(inner)));
    return c;
  }
  static BoundedCert negate(BoundedCert inner) {
    BoundedCert c(Kind::Negate, inner.space());
    c.children_.push_back(std::make_shared<BoundedCert>(std::move(inner)));
    return c;
  }

  Kind kind() const { return kind_; }
  const Space& space() const { return space_; }
  const Rational& scalar() const { return radius_; }
  const std::vector<Vector>& points() const { return points_; }
  const std::vector<std::shared_ptr<BoundedCert>>& children() const { return children_; }

 private:
  BoundedCert(Kind k, Space s) : kind_(k), space_(std::move(s)) {}

  Kind kind_;
  Space space_;
  Rational radius_ = 0;
  std::vector<Vector> points_;
  std::vector<std::shared_ptr<BoundedCert>> children_;
};

// Euclidean radius kept as its exact square, so comparisons and scaling stay
// exact; printing falls back to a sqrt form when the root is irrational.
struct RadiusBound {
  Rational r2;

  bool operator==(const RadiusBound& o) const { return r2 == o.r2; }
  bool operator<(const RadiusBound& o) const { return r2 < o.r2; }

  double value() const { return std::sqrt(to_double(r2)); }

  // Exact root when it exists.
  bool exact_value(Rational& out) const {
    Integer n = numerator(r2), d = denominator(r2);
    if (n < 0) return false;
    Integer sn = sqrt(n), sd = sqrt(d);
    if (sn * sn != n || sd * sd != d) return false;
    out = Rational(sn, sd);
    return true;
  }

  std::string to_string() const {
    Rational r;
    if (exact_value(r)) return codelta::to_string(r);
    return "sqrt(" + codelta::to_string(r2) + ")";
  }
};

// Radius of the enclosing ball implied by a certificate.
inline RadiusBound radius_of(const BoundedCert& c) {
  switch (c.kind()) {
    case BoundedCert::Kind::Ball:
      return {c.scalar() * c.scalar()};
    case BoundedCert::Kind::FiniteSample: {
      Rational m = 0;
      for (const auto& p : c.points()) {
        Rational s = p.norm2_squared();
        if (s > m) m = s;
      }
      return {m};
    }
    case BoundedCert::Kind::Hull:
    case BoundedCert::Kind::Negate:
      return radius_of(*c.children()[0]);
    case BoundedCert::Kind::Union: {
      RadiusBound m{Rational(0)};
      for (const auto& ch : c.children()) {
        RadiusBound r = radius_of(*ch);
        if (m < r) m = r;
      }
      return m;
    }
    case BoundedCert::Kind::Scale:
      return {c.scalar() * c.scalar() * radius_of(*c.children()[0]).r2};
  }
  throw std::logic_error("unreachable");
}

// Stability report of the certificate operations on one finite family.
struct CbsAxiomReport {
  struct Check {
    std::string name;
    bool ok;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_ok = true;

  void add(std::string name, bool ok, std::string detail = "") {
    all_ok = all_ok && ok;
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

inline CbsAxiomReport cbs_axioms_check(const std::vector<BoundedCert>& family) {
  CbsAxiomReport rep;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const BoundedCert& c = family[i];
    const std::string tag = "cert" + std::to_string(i);
    RadiusBound r = radius_of(c);
    rep.add(tag + ".hull", radius_of(BoundedCert::hull(c)) == r, "convex hull keeps the radius");
    rep.add(tag + ".negate", radius_of(BoundedCert::negate(c)) == r, "negation keeps the radius");
    rep.add(tag + ".double", radius_of(BoundedCert::scale(2, c)).r2 == Rational(4) * r.r2,
            "doubling scales the radius by two");
    if (c.kind() == BoundedCert::Kind::FiniteSample && !c.points().empty()) {
      // downward closure: subsets of a sample stay inside the same ball
      std::vector<Vector> sub(c.points().begin(), c.points().end() - 1);
      RadiusBound rs = radius_of(BoundedCert::finite_sample(c.space(), sub));
      rep.add(tag + ".subset", !(r < rs), "subsets do not grow the radius");
    }
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (family[j].space() != c.space()) continue;
      RadiusBound ru = radius_of(BoundedCert::union_of({c, family[j]}));
      RadiusBound rj = radius_of(family[j]);
      rep.add(tag + ".union" + std::to_string(j), ru == (r < rj ? rj : r), "union takes the larger radius");
    }
  }
  return rep;
}

// Scalar boundedness of an indexed sample under a family of linear
// functionals. The running sup of |l(x_k)| must settle: its last strict
// increase has to happen in the first three quarters of the index range.
struct ScalarBoundReport {
  struct PerFunctional {
    std::string label;
    Rational sup = 0;
    int last_increase = -1;
    bool stabilized = true;
  };
  bool vacuous = false;
  bool bounded = true;
  int witness = -1;  // first functional that failed, if any
  std::string note;
  std::vector<PerFunctional> functionals;
};

inline ScalarBoundReport scalarly_bounded(const std::vector<Vector>& sample,
                                          const std::vector<std::vector<Rational>>& functionals) {
  ScalarBoundReport rep;
  if (functionals.empty()) {
    rep.vacuous = true;
    rep.note = "no functionals supplied; boundedness holds vacuously";
    return rep;
  }
  const int K = static_cast<int>(sample.size());
  const int cutoff = (3 * K + 3) / 4;  // ceil(3K/4)
  for (std::size_t fi = 0; fi < functionals.size(); ++fi) {
    const auto& row = functionals[fi];
    ScalarBoundReport::PerFunctional pf;
    pf.label = "l" + std::to_string(fi);
    for (int k = 0; k < K; ++k) {
      const Vector& x = sample[static_cast<std::size_t>(k)];
      if (static_cast<int>(row.size()) != x.dim()) throw std::invalid_argument("functional arity mismatch");
      Rational v = 0;
      for (int d = 0; d < x.dim(); ++d) v += row[static_cast<std::size_t>(d)] * x[d];
      v = rat_abs(v);
      if (v > pf.sup) {
        pf.sup = v;
        pf.last_increase = k;
      }
    }
    pf.stabilized = pf.last_increase < cutoff;
    if (!pf.stabilized && rep.witness < 0) rep.witness = static_cast<int>(fi);
    rep.bounded = rep.bounded && pf.stabilized;
    rep.functionals.push_back(std::move(pf));
  }
  return rep;
}

// Componentwise boundedness in a product, via the two projections with their
// coordinate functionals.
struct ProductBoundReport {
  RadiusBound left_radius{Rational(0)};
  RadiusBound right_radius{Rational(0)};
  ScalarBoundReport left;
  ScalarBoundReport right;
  bool bounded = true;
};

inline ProductBoundReport product_bounded(const Space& space, const std::vector<Vector>& flat_samples) {
  if (space.kind() != Space::Kind::Prod) throw std::invalid_argument("product_bounded needs a product space");
  const Space& e = space.left();
  const Space& f = space.right();
  const int a = e.flat_dim();
  const int b = f.flat_dim();
  std::vector<Vector> ls, rs;
  for (const Vector& x : flat_samples) {
    if (x.dim() != a + b) throw std::invalid_argument("sample has wrong dimension");
    std::vector<Rational> lc(x.coords().begin(), x.coords().begin() + a);
    std::vector<Rational> rc(x.coords().begin() + a, x.coords().end());
    ls.emplace_back(e, std::move(lc));
    rs.emplace_back(f, std::move(rc));
  }
  auto coord_rows = [](int n) {
    std::vector<std::vector<Rational>> rows;
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> row(static_cast<std::size_t>(n), Rational(0));
      row[static_cast<std::size_t>(j)] = 1;
      rows.push_back(std::move(row));
    }
    return rows;
  };
  ProductBoundReport rep;
  rep.left = scalarly_bounded(ls, coord_rows(a));
  rep.right = scalarly_bounded(rs, coord_rows(b));
  rep.left_radius = radius_of(BoundedCert::finite_sample(e, ls));
  rep.right_radius = radius_of(BoundedCert::finite_sample(f, rs));
  rep.bounded = (rep.left.bounded || rep.left.vacuous) && (rep.right.bounded || rep.right.vacuous);
  return rep;
}

}  // namespace codelta
