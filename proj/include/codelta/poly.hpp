#pragma once

#include <codelta/rational.hpp>
#include <codelta/space.hpp>
#include <codelta/vec.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace codelta {

// Key of one polynomial term: output coordinate plus exponent vector.
// Ordered by output first, then lexicographically on exponents, which fixes
// the printed form.
struct Monomial {
  int out = 0;
  std::vector<unsigned> exps;

  unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned e : exps) d += e;
    return d;
  }
  bool operator<(const Monomial& o) const {
    if (out != o.out) return out < o.out;
    return std::lexicographical_compare(exps.begin(), exps.end(), o.exps.begin(), o.exps.end());
  }
  bool operator==(const Monomial& o) const { return out == o.out && exps == o.exps; }
};

// Polynomial map between flat spaces with exact rational coefficients.
// Canonical form: no stored zero coefficients, terms ordered by Monomial.
class PolyMap {
 public:
  PolyMap(Space domain, Space codomain) : domain_(std::move(domain)), codomain_(std::move(codomain)) {
    if (!domain_.is_flat() || !codomain_.is_flat())
      throw std::invalid_argument("polynomial maps need coordinate spaces");
  }

  static PolyMap zero(const Space& domain, const Space& codomain) { return PolyMap(domain, codomain); }

  static PolyMap constant(const Space& domain, const Vector& value) {
    PolyMap p(domain, value.space());
    std::vector<unsigned> e(static_cast<std::size_t>(domain.flat_dim()), 0);
    for (int i = 0; i < value.dim(); ++i) p.add_term(i, e, value[i]);
    return p;
  }

  static PolyMap identity(const Space& space) {
    PolyMap p(space, space);
    for (int i = 0; i < space.flat_dim(); ++i) {
      std::vector<unsigned> e(static_cast<std::size_t>(space.flat_dim()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      p.add_term(i, e, 1);
    }
    return p;
  }

  // The scalar valued map x -> x_j.
  static PolyMap coordinate(const Space& domain, int j) {
    PolyMap p(domain, Space::real(1));
    std::vector<unsigned> e(static_cast<std::size_t>(domain.flat_dim()), 0);
    e.at(static_cast<std::size_t>(j)) = 1;
    p.add_term(0, e, 1);
    return p;
  }

  // Linear map from a dense matrix, rows indexed by outputs.
  static PolyMap linear(const Space& domain, const Space& codomain, const std::vector<std::vector<Rational>>& rows) {
    PolyMap p(domain, codomain);
    if (static_cast<int>(rows.size()) != codomain.flat_dim()) throw std::invalid_argument("row count mismatch");
    for (int i = 0; i < codomain.flat_dim(); ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (static_cast<int>(row.size()) != domain.flat_dim()) throw std::invalid_argument("column count mismatch");
      for (int j = 0; j < domain.flat_dim(); ++j) {
        std::vector<unsigned> e(static_cast<std::size_t>(domain.flat_dim()), 0);
        e[static_cast<std::size_t>(j)] = 1;
        p.add_term(i, e, row[static_cast<std::size_t>(j)]);
      }
    }
    return p;
  }

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  int vars() const { return domain_.flat_dim(); }
  int outputs() const { return codomain_.flat_dim(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void add_term(int out, std::vector<unsigned> exps, const Rational& coeff) {
    if (out < 0 || out >= outputs()) throw std::invalid_argument("output index out of range");
    if (static_cast<int>(exps.size()) != vars()) throw std::invalid_argument("exponent arity mismatch");
    if (coeff == 0) return;
    Monomial key{out, std::move(exps)};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), coeff);
    } else {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  PolyMap operator+(const PolyMap& o) const {
    require_shape(o);
    PolyMap r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k.out, k.exps, c);
    return r;
  }
  PolyMap operator-(const PolyMap& o) const { return *this + o * Rational(-1); }
  PolyMap operator*(const Rational& c) const {
    PolyMap r(domain_, codomain_);
    if (c == 0) return r;
    r.terms_ = terms_;
    for (auto& [k, v] : r.terms_) v *= c;
    return r;
  }

  bool operator==(const PolyMap& o) const {
    return domain_ == o.domain_ && codomain_ == o.codomain_ && terms_ == o.terms_;
  }
  bool operator!=(const PolyMap& o) const { return !(*this == o); }

  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.total_degree());
    return d;
  }

  // Linear means every term has total degree exactly one; the zero map
  // qualifies vacuously.
  bool is_linear() const {
    for (const auto& [k, c] : terms_)
      if (k.total_degree() != 1) return false;
    return true;
  }

  Vector eval(const Vector& x) const {
    if (x.space().flat_dim() != vars()) throw std::invalid_argument("evaluation point has wrong dimension");
    Vector out = Vector::zero(codomain_);
    for (const auto& [k, c] : terms_) {
      Rational m = c;
      for (int j = 0; j < vars(); ++j) {
        unsigned e = k.exps[static_cast<std::size_t>(j)];
        if (e) m *= rat_pow(x[j], e);
      }
      out[k.out] += m;
    }
    return out;
  }

  // Single output selected as a scalar valued map.
  PolyMap component(int out) const {
    PolyMap p(domain_, Space::real(1));
    for (const auto& [k, c] : terms_)
      if (k.out == out) p.add_term(0, k.exps, c);
    return p;
  }

  // Symbolic partial derivative in variable j, componentwise.
  PolyMap partial(int j) const {
    if (j < 0 || j >= vars()) throw std::invalid_argument("partial index out of range");
    PolyMap p(domain_, codomain_);
    for (const auto& [k, c] : terms_) {
      unsigned e = k.exps[static_cast<std::size_t>(j)];
      if (e == 0) continue;
      std::vector<unsigned> ex = k.exps;
      ex[static_cast<std::size_t>(j)] = e - 1;
      p.add_term(k.out, std::move(ex), c * Rational(e));
    }
    return p;
  }

  // Symbolic directional derivative along a constant vector.
  PolyMap dir_derivative(const Vector& v) const {
    if (v.dim() != vars()) throw std::invalid_argument("direction has wrong dimension");
    PolyMap p(domain_, codomain_);
    for (int j = 0; j < vars(); ++j) {
      if (v[j] == 0) continue;
      p = p + partial(j) * v[j];
    }
    return p;
  }

  std::string to_string() const;

 private:
  void require_shape(const PolyMap& o) const {
    if (domain_ != o.domain_ || codomain_ != o.codomain_) throw std::invalid_argument("polynomial shape mismatch");
  }

  Space domain_;
  Space codomain_;
  std::map<Monomial, Rational> terms_;
};

inline PolyMap operator*(const Rational& c, const PolyMap& p) { return p * c; }

// Product of scalar valued maps over the same domain.
inline PolyMap poly_mul(const PolyMap& a, const PolyMap& b) {
  if (a.domain() != b.domain()) throw std::invalid_argument("product over different domains");
  if (a.outputs() != 1 || b.outputs() != 1) throw std::invalid_argument("product needs scalar valued maps");
  PolyMap r(a.domain(), Space::real(1));
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      std::vector<unsigned> e = ka.exps;
      for (std::size_t j = 0; j < e.size(); ++j) e[j] += kb.exps[j];
      r.add_term(0, std::move(e), ca * cb);
    }
  }
  return r;
}

inline PolyMap poly_pow(const PolyMap& p, unsigned e) {
  PolyMap acc = PolyMap::constant(p.domain(), Vector(Space::real(1), {Rational(1)}));
  for (unsigned i = 0; i < e; ++i) acc = poly_mul(acc, p);
  return acc;
}

inline Vector poly_eval(const PolyMap& p, const Vector& x) { return p.eval(x); }

// g after f, expanded symbolically.
inline PolyMap poly_compose(const PolyMap& g, const PolyMap& f) {
  if (g.domain().flat_dim() != f.codomain().flat_dim())
    throw std::invalid_argument("composition arity mismatch: " + g.domain().to_string() + " vs " +
                                f.codomain().to_string());
  PolyMap r(f.domain(), g.codomain());
  // Cache powers of each component of f as they are needed.
  std::vector<std::vector<PolyMap>> powers(static_cast<std::size_t>(f.outputs()));
  auto f_power = [&](int j, unsigned e) -> const PolyMap& {
    auto& cache = powers[static_cast<std::size_t>(j)];
    if (cache.empty()) cache.push_back(PolyMap::constant(f.domain(), Vector(Space::real(1), {Rational(1)})));
    while (cache.size() <= e) cache.push_back(poly_mul(cache.back(), f.component(j)));
    return cache[e];
  };
  for (const auto& [k, c] : g.terms()) {
    PolyMap term = PolyMap::constant(f.domain(), Vector(Space::real(1), {c}));
    for (int j = 0; j < g.vars(); ++j) {
      unsigned e = k.exps[static_cast<std::size_t>(j)];
      if (e) term = poly_mul(term, f_power(j, e));
    }
    for (const auto& [kt, ct] : term.terms()) r.add_term(k.out, kt.exps, ct);
  }
  return r;
}

// Directional derivative of p at x along v, evaluated exactly from the
// monomials; the symbolic route through partial() is kept separate so the two
// can be checked against each other.
inline Vector poly_diff(const PolyMap& p, const Vector& x, const Vector& v) {
  if (x.dim() != p.vars() || v.dim() != p.vars()) throw std::invalid_argument("poly_diff dimension mismatch");
  Vector out = Vector::zero(p.codomain());
  for (const auto& [k, c] : p.terms()) {
    for (int j = 0; j < p.vars(); ++j) {
      unsigned e = k.exps[static_cast<std::size_t>(j)];
      if (e == 0 || v[j] == 0) continue;
      Rational m = c * Rational(e) * v[j];
      for (int l = 0; l < p.vars(); ++l) {
        unsigned el = k.exps[static_cast<std::size_t>(l)];
        if (l == j) el -= 1;
        if (el) m *= rat_pow(x[l], el);
      }
      out[k.out] += m;
    }
  }
  return out;
}

// Fixes the first block of variables of a map on a product domain, giving a
// polynomial family in the remaining variables.
inline PolyMap poly_curry(const PolyMap& p, const Vector& x1) {
  if (p.domain().kind() != Space::Kind::Prod)
    throw std::invalid_argument("curry needs a product domain, got " + p.domain().to_string());
  const Space& e1 = p.domain().left();
  const Space& e2 = p.domain().right();
  if (x1.space() != e1) throw std::invalid_argument("curry point lives in " + x1.space().to_string());
  int a = e1.flat_dim();
  PolyMap r(e2, p.codomain());
  for (const auto& [k, c] : p.terms()) {
    Rational m = c;
    for (int j = 0; j < a; ++j) {
      unsigned e = k.exps[static_cast<std::size_t>(j)];
      if (e) m *= rat_pow(x1[j], e);
    }
    std::vector<unsigned> rest(k.exps.begin() + a, k.exps.end());
    r.add_term(k.out, std::move(rest), m);
  }
  return r;
}

inline std::string PolyMap::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += codelta::to_string(c);
    s += "*y" + std::to_string(k.out);
    for (int j = 0; j < vars(); ++j) {
      unsigned e = k.exps[static_cast<std::size_t>(j)];
      if (e) s += "*x" + std::to_string(j) + (e > 1 ? "^" + std::to_string(e) : "");
    }
  }
  return s;
}

}  // namespace codelta
