#pragma once

#include <codelta/bang.hpp>
#include <codelta/gen.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace codelta {

// ---- random elements of the exponential world ----

inline Point gen_point(Rng& rng, const Space& space, int max_order = 1, int max_terms = 2);

inline Distribution gen_distribution(Rng& rng, const Space& space, int max_order, int max_terms) {
  Distribution u(space);
  int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < terms; ++t) {
    Point base = gen_point(rng, space, std::max(0, max_order - 1), max_terms);
    int order = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_order) + 1));
    std::vector<Point> dirs;
    for (int d = 0; d < order; ++d) {
      Point v = gen_point(rng, space, std::max(0, max_order - 1), max_terms);
      if (v.is_zero()) continue;
      dirs.push_back(std::move(v));
    }
    u.add_term(rng.rational(), base, dirs);
  }
  return u;
}

inline Point gen_point(Rng& rng, const Space& space, int max_order, int max_terms) {
  switch (space.kind()) {
    case Space::Kind::RealN:
    case Space::Kind::UnitSp:
      return Point::from_vector(rng.vector(space));
    case Space::Kind::Dist:
      return Point::from_distribution(gen_distribution(rng, space.inner(), max_order, max_terms));
    case Space::Kind::Prod:
      return Point::pair(gen_point(rng, space.left(), max_order, max_terms),
                         gen_point(rng, space.right(), max_order, max_terms));
    default:
      throw std::invalid_argument("no random points for " + space.to_string());
  }
}

// Random polynomial functional of bounded degree on a flat space.
inline TestFunctional gen_functional(Rng& rng, const Space& space, unsigned max_deg, int terms = 4) {
  return TestFunctional::polynomial(rng.polymap(space, Space::real(1), max_deg, terms));
}

// ---- law results ----

struct LawFailure {
  std::string inputs;
  std::string detail;
};

struct LawResult {
  std::string name;
  std::string anchor;
  int cases = 0;
  int failures = 0;
  Rational max_residual = 0;
  std::vector<LawFailure> samples;

  void record(bool ok, const Rational& residual, const std::string& inputs, const std::string& detail) {
    ++cases;
    if (residual > max_residual) max_residual = residual;
    if (!ok) {
      ++failures;
      if (samples.size() < 3) samples.push_back({inputs, detail});
    }
  }
  bool passed() const { return failures == 0; }
};

struct RunConfig {
  Space space = Space::real(2);
  int order = 2;
  int cases = 100;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

struct LawReport {
  RunConfig config;
  std::vector<LawResult> laws;

  bool all_passed() const {
    for (const auto& l : laws)
      if (!l.passed()) return false;
    return true;
  }
  int total_failures() const {
    int n = 0;
    for (const auto& l : laws) n += l.failures;
    return n;
  }
};

// ---- the differential axioms ----

// Tangent into the exponential, then total mass: must vanish.
inline LawResult law_coder_counit(const RunConfig& cfg) {
  LawResult r{"coder-then-counit", "dC.1", 0, 0, 0, {}};
  Rng rng(cfg.seed);
  for (int i = 0; i < cfg.cases; ++i) {
    Vector v = rng.vector(cfg.space);
    Rational got = counit_e(coder(v));
    r.record(got == 0, rat_abs(got), "v=" + v.to_string(), "e(coder v)=" + to_string(got));
  }
  return r;
}

// Tangent into the exponential, then comultiplication: primitive element law.
inline LawResult law_coder_comul(const RunConfig& cfg) {
  LawResult r{"coder-then-comul", "dC.2", 0, 0, 0, {}};
  Rng rng(cfg.seed + 1);
  for (int i = 0; i < cfg.cases; ++i) {
    Vector v = rng.vector(cfg.space);
    TensorElem lhs = comul_delta(coder(v));
    Distribution nu = unit_nu(cfg.space);
    TensorElem rhs = tensor_of({coder(v), nu}).add(tensor_of({nu, coder(v)}));
    Rational res = lhs.residual(rhs);
    r.record(res == 0, res, "v=" + v.to_string(), "residual=" + to_string(res));
  }
  return r;
}

// Tangent into the exponential, then the counit of the comonad: identity.
inline LawResult law_coder_eps(const RunConfig& cfg) {
  LawResult r{"coder-then-eps", "dC.3", 0, 0, 0, {}};
  Rng rng(cfg.seed + 2);
  for (int i = 0; i < cfg.cases; ++i) {
    Vector v = rng.vector(cfg.space);
    Vector got = flatten_point(eps(coder(v)));
    Rational res = 0;
    for (int j = 0; j < got.dim(); ++j) res += rat_abs(got[j] - v[j]);
    r.record(res == 0, res, "v=" + v.to_string(), "eps(coder v)=" + got.to_string());
  }
  return r;
}

// ---- comonad laws ----

inline LawResult law_comonad_counit_outer(const RunConfig& cfg) {
  LawResult r{"rho-then-eps", "comonad counit (outer)", 0, 0, 0, {}};
  Rng rng(cfg.seed + 3);
  for (int i = 0; i < cfg.cases; ++i) {
    Distribution u = gen_distribution(rng, cfg.space, cfg.order, 3);
    Point back = eps(comultiplication_rho(u));
    Rational res = back.distribution().residual(u);
    r.record(res == 0, res, "u=" + u.to_string(), "eps(rho u) residual=" + to_string(res));
  }
  return r;
}

inline LawResult law_comonad_counit_inner(const RunConfig& cfg) {
  LawResult r{"rho-then-bang-eps", "comonad counit (inner)", 0, 0, 0, {}};
  Rng rng(cfg.seed + 4);
  LinearPointMap eps_map{Space::dist(cfg.space), cfg.space,
                         [](const Point& p) { return eps(p.distribution()); }};
  for (int i = 0; i < cfg.cases; ++i) {
    Distribution u = gen_distribution(rng, cfg.space, cfg.order, 3);
    Distribution back = pushforward_linear(eps_map, comultiplication_rho(u));
    Rational res = back.residual(u);
    r.record(res == 0, res, "u=" + u.to_string(), "bang(eps)(rho u) residual=" + to_string(res));
  }
  return r;
}

inline LawResult law_comonad_coassoc(const RunConfig& cfg) {
  LawResult r{"rho-coassociativity", "comonad coassociativity", 0, 0, 0, {}};
  Rng rng(cfg.seed + 5);
  const int order = std::min(cfg.order, 2);
  LinearPointMap rho_map{Space::dist(cfg.space), Space::dist(Space::dist(cfg.space)),
                         [](const Point& p) { return Point::from_distribution(comultiplication_rho(p.distribution())); }};
  for (int i = 0; i < cfg.cases; ++i) {
    Distribution u = gen_distribution(rng, cfg.space, order, 2);
    Distribution once = comultiplication_rho(u);
    Distribution lhs = comultiplication_rho(once);
    Distribution rhs = pushforward_linear(rho_map, once);
    Rational res = lhs.residual(rhs);
    r.record(res == 0, res, "u=" + u.to_string(), "coassoc residual=" + to_string(res));
  }
  return r;
}

// ---- bialgebra laws ----

inline LawResult law_bialgebra(const RunConfig& cfg) {
  LawResult r{"bialgebra-laws", "bialgebra on the exponential", 0, 0, 0, {}};
  Rng rng(cfg.seed + 6);
  const Space& E = cfg.space;
  auto comul = [](const Distribution& d) { return comul_delta(d); };
  auto conv = [](const Distribution& a, const Distribution& b) { return conv_nabla(tensor_of({a, b})); };
  for (int i = 0; i < cfg.cases; ++i) {
    Distribution u = gen_distribution(rng, E, cfg.order, 2);
    Distribution w = gen_distribution(rng, E, cfg.order, 2);
    Rational res = 0;
    // comultiplication is coassociative and counital
    TensorElem cu = comul_delta(u);
    res += cu.split_factor(0, comul, E, E).residual(cu.split_factor(1, comul, E, E));
    res += cu.contract_factor(0, [](const Distribution& d) { return counit_e(d); }).to_distribution().residual(u);
    res += cu.contract_factor(1, [](const Distribution& d) { return counit_e(d); }).to_distribution().residual(u);
    // convolution is associative, commutative, unital
    Distribution uw = conv(u, w);
    res += conv(uw, u).residual(conv(u, conv(w, u)));
    res += uw.residual(conv(w, u));
    res += conv(unit_nu(E), u).residual(u);
    // counit is a convolution morphism, comultiplication is a unit morphism
    res += rat_abs(counit_e(uw) - counit_e(u) * counit_e(w));
    res += comul_delta(unit_nu(E)).residual(tensor_of({unit_nu(E), unit_nu(E)}));
    res += rat_abs(counit_e(unit_nu(E)) - 1);
    // compatibility: comul after conv equals conv pairwise after comuls
    TensorElem four = tensor_concat(comul_delta(u), comul_delta(w)).swap_factors(1, 2);
    TensorElem paired = four.merge_factors(0, conv, E);
    paired = paired.merge_factors(1, conv, E);
    res += comul_delta(uw).residual(paired);
    r.record(res == 0, res, "u=" + u.to_string() + "; w=" + w.to_string(), "residual=" + to_string(res));
  }
  return r;
}

// ---- pairing duality of the pushforward ----

inline LawResult law_pairing_duality(const RunConfig& cfg, unsigned max_deg = 4) {
  LawResult r{"pushforward-duality", "bang functor against test functions", 0, 0, 0, {}};
  Rng rng(cfg.seed + 7);
  for (int i = 0; i < cfg.cases; ++i) {
    int n = cfg.space.flat_dim();
    int m = 1 + static_cast<int>(rng.below(3));
    PolyMap f = rng.polymap(cfg.space, Space::real(m), max_deg, 3);
    TestFunctional g = gen_functional(rng, Space::real(m), max_deg);
    Distribution u = gen_distribution(rng, cfg.space, cfg.order, 3);
    Rational lhs = pair(pushforward(f, u), g);
    Rational rhs = pair(u, TestFunctional::polynomial(poly_compose(g.as_polynomial(), f)));
    Rational res = rat_abs(lhs - rhs);
    r.record(res == 0, res,
             "n=" + std::to_string(n) + " f=" + f.to_string() + " u=" + u.to_string(),
             "lhs=" + to_string(lhs) + " rhs=" + to_string(rhs));
  }
  return r;
}

// The comultiplication into the double exponential, characterized through
// cylinder functionals: pairing rho(u) against a cylinder over g_1..g_m
// equals pairing u against the head applied to the running pairings.
inline LawResult law_rho_characterization(const RunConfig& cfg, unsigned max_deg = 3) {
  LawResult r{"rho-cylinder-characterization", "comultiplication against cylinder functionals", 0, 0, 0, {}};
  Rng rng(cfg.seed + 8);
  const Space dspace = Space::dist(cfg.space);
  for (int i = 0; i < cfg.cases; ++i) {
    int m = 1 + static_cast<int>(rng.below(2));
    std::vector<TestFunctional> inner;
    for (int j = 0; j < m; ++j) inner.push_back(gen_functional(rng, cfg.space, max_deg, 3));
    PolyMap head = rng.polymap(Space::real(m), Space::real(1), 2, 3);
    TestFunctional F = TestFunctional::cylinder(dspace, head, inner);
    Distribution u = gen_distribution(rng, cfg.space, std::min(cfg.order, 2), 2);
    Rational lhs = pair(comultiplication_rho(u), F);
    // compose the head with the tuple of inner functionals as polynomials
    PolyMap stacked(cfg.space, Space::real(m));
    for (int j = 0; j < m; ++j) {
      PolyMap gj = inner[static_cast<std::size_t>(j)].as_polynomial();
      for (const auto& [k, c] : gj.terms()) stacked.add_term(j, k.exps, c);
    }
    Rational rhs = pair(u, TestFunctional::polynomial(poly_compose(head, stacked)));
    Rational res = rat_abs(lhs - rhs);
    r.record(res == 0, res, "u=" + u.to_string(), "lhs=" + to_string(lhs) + " rhs=" + to_string(rhs));
  }
  return r;
}

// ---- seely equivalence ----

inline LawResult law_seely(const RunConfig& cfg, const Space& left, const Space& right) {
  LawResult r{"seely-round-trip", "product exponentials against tensor exponentials", 0, 0, 0, {}};
  Rng rng(cfg.seed + 9);
  Space prod = Space::prod(left, right);
  for (int i = 0; i < cfg.cases; ++i) {
    Distribution u = gen_distribution(rng, prod, cfg.order, 3);
    Rational res = seely_merge(seely_split(u)).residual(u);
    TensorElem t = tensor_of({gen_distribution(rng, left, cfg.order, 2), gen_distribution(rng, right, cfg.order, 2)});
    res += seely_split(seely_merge(t)).residual(t);
    // base case: the split of a point evaluation is the tensor of the two
    // point evaluations
    Point x = gen_point(rng, left, 0, 1);
    Point y = gen_point(rng, right, 0, 1);
    res += seely_split(dirac(Point::pair(x, y))).residual(tensor_of({dirac(x), dirac(y)}));
    r.record(res == 0, res, "u=" + u.to_string(), "residual=" + to_string(res));
  }
  return r;
}

// ---- adjunction between polynomial maps and linear maps on distributions ----

inline LawResult law_adjunction_lower_lift(const RunConfig& cfg, int points_per_map = 100) {
  LawResult r{"lower-after-lift", "smooth maps from linear maps, one direction", 0, 0, 0, {}};
  Rng rng(cfg.seed + 10);
  for (int i = 0; i < cfg.cases; ++i) {
    PolyMap f = rng.polymap(cfg.space, Space::real(1 + static_cast<int>(rng.below(2))), 4, 3);
    Rational res = 0;
    for (int k = 0; k < points_per_map; ++k) {
      Vector e = rng.vector(cfg.space);
      Vector back = lower_point([&](const Distribution& d) { return lift_apply(f, d); }, e);
      Vector direct = poly_eval(f, e);
      for (int j = 0; j < back.dim(); ++j) res += rat_abs(back[j] - direct[j]);
    }
    r.record(res == 0, res, "f=" + f.to_string(), "residual=" + to_string(res));
  }
  return r;
}

inline LawResult law_adjunction_lift_lower(const RunConfig& cfg, unsigned max_deg = 3) {
  LawResult r{"lift-after-lower", "smooth maps from linear maps, other direction", 0, 0, 0, {}};
  Rng rng(cfg.seed + 11);
  for (int i = 0; i < cfg.cases; ++i) {
    // a linear functional on distributions, built from pairings
    int m = 1 + static_cast<int>(rng.below(2));
    std::vector<TestFunctional> gs;
    for (int j = 0; j < m; ++j) gs.push_back(gen_functional(rng, cfg.space, max_deg, 3));
    auto phi = [&](const Distribution& d) {
      std::vector<Rational> out;
      for (const auto& g : gs) out.push_back(pair(d, g));
      return Vector(Space::real(m), out);
    };
    // lower it to a polynomial map, stacking the functionals
    PolyMap lowered(cfg.space, Space::real(m));
    for (int j = 0; j < m; ++j) {
      PolyMap gj = gs[static_cast<std::size_t>(j)].as_polynomial();
      for (const auto& [k, c] : gj.terms()) lowered.add_term(j, k.exps, c);
    }
    Distribution u = gen_distribution(rng, cfg.space, cfg.order, 3);
    Vector via_lift = lift_apply(lowered, u);
    Vector via_phi = phi(u);
    Rational res = 0;
    for (int j = 0; j < m; ++j) res += rat_abs(via_lift[j] - via_phi[j]);
    r.record(res == 0, res, "u=" + u.to_string(), "residual=" + to_string(res));
  }
  return r;
}

// ---- codereliction as a limit ----

struct CoderLimitCase {
  std::vector<double> steps;
  std::vector<double> residuals;
  double fitted_order = 0;
  bool exact = false;  // residuals vanished identically
};

// Residual of (bang f applied to the dirac chord) against the derivative
// along v, at shrinking t: || (f(tv) - f(0))/t - df(0)v ||. The fitted slope
// against t is the convergence order of the chord to the codereliction.
inline CoderLimitCase codereliction_limit(const PolyMap& f, const Vector& v, int k_lo = 3, int k_hi = 12) {
  CoderLimitCase out;
  Vector at0 = poly_eval(f, Vector::zero(f.domain()));
  Vector dfv = poly_diff(f, Vector::zero(f.domain()), v);
  std::vector<double> lx, ly;
  for (int k = k_lo; k <= k_hi; ++k) {
    Rational t = rat_pow(rat(1, 2), static_cast<unsigned>(k));
    Vector chord = (poly_eval(f, v * t) - at0) * (Rational(1) / t);
    Rational res = (chord - dfv).norm_inf();
    out.steps.push_back(to_double(t));
    out.residuals.push_back(to_double(res));
    if (res > 0) {
      lx.push_back(std::log(to_double(t)));
      ly.push_back(std::log(to_double(res)));
    }
  }
  if (lx.size() < 2) {
    out.exact = true;
    out.fitted_order = 1.0;
    return out;
  }
  // The asymptotic slope only shows once the steps are past the coarse
  // transient, and a max norm can switch components at isolated steps. Fit
  // every trailing window of at least 4 steps and keep the best slope.
  std::size_t min_len = std::min<std::size_t>(lx.size(), 4);
  double best = std::numeric_limits<double>::lowest();
  for (std::size_t len = min_len; len <= lx.size(); ++len) {
    std::size_t from = lx.size() - len;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = from; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    double n = static_cast<double>(len);
    best = std::max(best, (n * sxy - sx * sy) / (n * sxx - sx * sx));
  }
  out.fitted_order = best;
  return out;
}

// ---- assembled suites ----

inline LawReport check_differential_axioms(const RunConfig& cfg) {
  if (cfg.space.kind() != Space::Kind::RealN || cfg.space.flat_dim() > 6)
    throw std::invalid_argument("axiom suite runs over R^n with n at most 6");
  if (cfg.cases < 0 || cfg.order < 0) throw std::invalid_argument("negative case or order count");
  LawReport rep;
  rep.config = cfg;
  rep.laws.push_back(law_coder_counit(cfg));
  rep.laws.push_back(law_coder_comul(cfg));
  rep.laws.push_back(law_coder_eps(cfg));
  rep.laws.push_back(law_comonad_counit_outer(cfg));
  rep.laws.push_back(law_comonad_counit_inner(cfg));
  rep.laws.push_back(law_comonad_coassoc(cfg));
  rep.laws.push_back(law_bialgebra(cfg));
  return rep;
}

// The batch runner's full menu: the axioms plus duality, the double
// exponential, the product/tensor exchange, and the adjunction.
inline LawReport check_full_suite(const RunConfig& cfg) {
  LawReport rep = check_differential_axioms(cfg);
  rep.laws.push_back(law_pairing_duality(cfg));
  rep.laws.push_back(law_rho_characterization(cfg));
  rep.laws.push_back(law_seely(cfg, cfg.space, cfg.space));
  rep.laws.push_back(law_adjunction_lower_lift(cfg, 100));
  rep.laws.push_back(law_adjunction_lift_lower(cfg));
  return rep;
}

}  // namespace codelta
