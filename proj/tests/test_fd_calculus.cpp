#include <codelta/bornology.hpp>
#include <codelta/curve.hpp>
#include <codelta/delta_quotient.hpp>
#include <codelta/gen.hpp>
#include <codelta/mackey.hpp>
#include <codelta/smoothness.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace codelta;

namespace {

PolyMap poly1(std::initializer_list<std::pair<long long, unsigned>> terms) {
  PolyMap p(Space::real(1), Space::real(1));
  for (auto& [c, e] : terms) p.add_term(0, {e}, Rational(c));
  return p;
}

CurveOracle abs_curve() {
  return CurveOracle::exact(1, [](const Rational& t) { return std::vector<Rational>{rat_abs(t)}; });
}

std::vector<Rational> rats(std::initializer_list<long long> xs) {
  std::vector<Rational> out;
  for (long long x : xs) out.push_back(Rational(x));
  return out;
}

}  // namespace

TEST_CASE("first quotient of t squared on (3,1)") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 2}}));
  CHECK(delta_quotient(c, rats({3, 1}))[0] == 4);
}

TEST_CASE("second quotient of t squared is constantly 2") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 2}}));
  Rng rng(201);
  for (int i = 0; i < 100; ++i) {
    Rational a = rng.rational(20, 6);
    Rational b = rng.rational(20, 6);
    Rational d = rng.rational(20, 6);
    if (a == b || b == d || a == d) continue;
    std::vector<Rational> got = delta_quotient(c, {a, b, d}, 2);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == 2);
  }
}

TEST_CASE("quotient input validation") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 2}}));
  CHECK_THROWS_AS(delta_quotient(c, rats({1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(delta_quotient(c, rats({1, 2, 3}), 1), std::invalid_argument);
  CHECK_THROWS_AS(delta_quotient(c, {}), std::invalid_argument);
  CurveOracle num = CurveOracle::numeric(1, [](double t) { return std::vector<double>{t * t}; });
  CHECK_THROWS_AS(delta_quotient(num, rats({0, 1})), std::logic_error);
  CHECK(delta_quotient_d(num, {3.0, 1.0})[0] == 4.0);
}

TEST_CASE("quotients are symmetric under point permutation") {
  Rng rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    PolyMap p = rng.polymap(Space::real(1), Space::real(2), 4);
    CurveOracle c = CurveOracle::polynomial(p);
    std::vector<Rational> pts;
    while (pts.size() < 4) {
      Rational t = rng.rational(8, 4);
      if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
    }
    std::vector<Rational> base = delta_quotient(c, pts);
    for (int s = 0; s < 5; ++s) {
      std::vector<Rational> perm = pts;
      for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      CHECK(delta_quotient(c, perm) == base);
    }
  }
}

TEST_CASE("degree-d quotient of a degree-d polynomial is d! times the leading coefficient") {
  Rng rng(203);
  for (int trial = 0; trial < 50; ++trial) {
    unsigned d = 1 + static_cast<unsigned>(rng.below(4));
    PolyMap p(Space::real(1), Space::real(1));
    Rational lead = rng.nonzero_rational();
    p.add_term(0, {d}, lead);
    for (unsigned e = 0; e < d; ++e) p.add_term(0, {e}, rng.rational());
    CurveOracle c = CurveOracle::polynomial(p);
    std::vector<Rational> pts;
    while (pts.size() < d + 2) {
      Rational t = rng.rational(8, 4);
      if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
    }
    std::vector<Rational> full(pts.begin(), pts.begin() + d + 1);
    CHECK(delta_quotient(c, full)[0] == Rational(factorial(d)) * lead);
    CHECK(delta_quotient(c, pts)[0] == 0);
  }
}

TEST_CASE("quotients are linear in the curve") {
  Rng rng(204);
  for (int trial = 0; trial < 50; ++trial) {
    PolyMap p = rng.polymap(Space::real(1), Space::real(2), 4);
    PolyMap q = rng.polymap(Space::real(1), Space::real(2), 4);
    Rational a = rng.rational();
    Rational b = rng.rational();
    PolyMap combo = p * a + q * b;
    std::vector<Rational> pts;
    while (pts.size() < 3) {
      Rational t = rng.rational(8, 4);
      if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
    }
    std::vector<Rational> dp = delta_quotient(CurveOracle::polynomial(p), pts);
    std::vector<Rational> dq = delta_quotient(CurveOracle::polynomial(q), pts);
    std::vector<Rational> dc = delta_quotient(CurveOracle::polynomial(combo), pts);
    for (int i = 0; i < 2; ++i) CHECK(dc[static_cast<std::size_t>(i)] == a * dp[static_cast<std::size_t>(i)] + b * dq[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("quotients commute with linear functionals") {
  Rng rng(205);
  for (int trial = 0; trial < 50; ++trial) {
    PolyMap p = rng.polymap(Space::real(1), Space::real(3), 4);
    CurveOracle c = CurveOracle::polynomial(p);
    std::vector<Rational> row = {rng.rational(), rng.rational(), rng.rational()};
    std::vector<Rational> pts;
    while (pts.size() < 4) {
      Rational t = rng.rational(8, 4);
      if (std::find(pts.begin(), pts.end(), t) == pts.end()) pts.push_back(t);
    }
    std::vector<Rational> vec = delta_quotient(c, pts);
    Rational applied = row[0] * vec[0] + row[1] * vec[1] + row[2] * vec[2];
    CHECK(delta_quotient(c.compose_functional(row), pts)[0] == applied);
  }
}

TEST_CASE("absolute value diverges at second order with exponent near minus one") {
  SmoothnessReport rep = smooth_certificate(abs_curve(), 2);
  CHECK(rep.orders[0].bounded);
  CHECK_FALSE(rep.smooth);
  CHECK(rep.first_bad_order == 2);
  const OrderDiagnostics& o2 = rep.orders[1];
  CHECK_FALSE(o2.bounded);
  CHECK(std::fabs(o2.growth_exponent + 1.0) < 0.1);
  // worst window at the finest level straddles the kink: value 2/h
  CHECK(o2.witness_value == Catch::Approx(2.0 / o2.level_h.back()));
}

TEST_CASE("polynomial curves certify as smooth") {
  Rng rng(206);
  for (int trial = 0; trial < 20; ++trial) {
    PolyMap p = rng.polymap(Space::real(1), Space::real(2), 4);
    SmoothnessReport rep = smooth_certificate(CurveOracle::polynomial(p), 5);
    CHECK(rep.smooth);
    for (const auto& o : rep.orders) {
      CHECK(o.bounded);
      // bounded verdicts come with a level beyond which maxima stop growing
      CHECK(o.stable_from >= 0);
    }
  }
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.shrink = rat(3, 2);
  CHECK_THROWS_AS(smooth_certificate(abs_curve(), 2, g), std::invalid_argument);
  g = GridSpec{};
  g.offsets = {rat(1), rat(1)};
  CHECK_THROWS_AS(smooth_certificate(abs_curve(), 1, g), std::invalid_argument);
  g = GridSpec{};
  g.offsets = {rat(0), rat(1)};
  CHECK_THROWS_AS(smooth_certificate(abs_curve(), 2, g), std::invalid_argument);
  g = GridSpec{};
  g.levels = 1;
  CHECK_THROWS_AS(smooth_certificate(abs_curve(), 2, g), std::invalid_argument);
  CHECK_THROWS_AS(smooth_certificate(abs_curve(), 0), std::invalid_argument);
}

TEST_CASE("scalar probes detect the kink through the second coordinate") {
  CurveOracle c = CurveOracle::exact(2, [](const Rational& t) { return std::vector<Rational>{t, rat_abs(t)}; });
  SmoothnessReport bad = boman_scalar_test(c, {{rat(1), rat(0)}, {rat(0), rat(1)}}, 2);
  CHECK_FALSE(bad.smooth);
  REQUIRE(bad.probes.size() == 2);
  CHECK(bad.probes[0].smooth);
  CHECK_FALSE(bad.probes[1].smooth);
  CHECK(bad.probes[1].first_bad_order == 2);
  CHECK(bad.note.find("coordinate functionals") != std::string::npos);

  SmoothnessReport partial = boman_scalar_test(c, {{rat(1), rat(0)}}, 2);
  CHECK(partial.smooth);

  SmoothnessReport empty = boman_scalar_test(c, {}, 2);
  CHECK(empty.vacuous);
  CHECK(empty.smooth);
  CHECK(empty.note.find("vacuous") != std::string::npos);
}

TEST_CASE("forward estimates converge at the shrink rate") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 3}}));
  std::vector<Rational> steps;
  for (int k = 4; k <= 10; ++k) steps.push_back(rat_pow(rat(1, 2), static_cast<unsigned>(k)));
  auto est = derivative_estimate(c, Rational(1), 1, steps);
  REQUIRE(est.size() == steps.size());
  std::vector<Rational> errs;
  for (const auto& e : est) errs.push_back(rat_abs(e[0] - 3));
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    double ratio = to_double(errs[i + 1] / errs[i]);
    CHECK(std::fabs(ratio - 0.5) < 0.05);
  }
}

TEST_CASE("second forward estimate of t squared is exact") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 2}}));
  auto est = derivative_estimate(c, rat(5, 3), 2, {rat(1, 2), rat(1, 64), rat(3, 7)});
  for (const auto& e : est) CHECK(e[0] == 2);
}

TEST_CASE("order zero estimate returns the curve value") {
  CurveOracle c = CurveOracle::polynomial(poly1({{1, 3}, {2, 0}}));
  auto est = derivative_estimate(c, rat(2), 0, {rat(1, 4)});
  CHECK(est[0][0] == 10);
  CHECK_THROWS_AS(derivative_estimate(c, rat(2), 1, {rat(0)}), std::invalid_argument);
  CHECK_THROWS_AS(derivative_estimate(c, rat(2), -1, {rat(1)}), std::invalid_argument);
}

TEST_CASE("halving sequences are Mackey convergent") {
  Space r2 = Space::real(2);
  Vector v(r2, {rat(3), rat(4)});
  std::vector<Vector> seq;
  for (unsigned n = 0; n < 12; ++n) seq.push_back(v * rat_pow(rat(1, 2), n));
  BoundedCert ball = BoundedCert::ball(r2, rat(10));
  MackeyReport rep = mackey_cauchy_test(seq, ball);
  CHECK(rep.cauchy);
  CHECK_FALSE(rep.trivial);
  REQUIRE(rep.tail_sup.size() == 11);
  // early tail sups halve; the very tail flattens as the window empties
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(rep.tail_sup[k + 1] / rep.tail_sup[k] == Catch::Approx(0.5).margin(0.02));
  CHECK(rep.tail_sup.back() < rep.tail_sup.front() / 500.0);
}

TEST_CASE("constant sequences pass trivially") {
  Space r1 = Space::real(1);
  std::vector<Vector> seq(5, Vector(r1, {rat(7)}));
  MackeyReport rep = mackey_cauchy_test(seq, BoundedCert::ball(r1, rat(1)));
  CHECK(rep.cauchy);
  CHECK(rep.trivial);
  for (double t : rep.tail_sup) CHECK(t == 0.0);
}

TEST_CASE("alternating sequences stall") {
  Space r2 = Space::real(2);
  Vector v(r2, {rat(1), rat(2)});
  std::vector<Vector> seq;
  for (int n = 0; n < 10; ++n) seq.push_back(n % 2 ? v : Vector::zero(r2));
  MackeyReport rep = mackey_cauchy_test(seq, BoundedCert::ball(r2, rat(5)));
  CHECK_FALSE(rep.cauchy);
  CHECK(rep.note.find("stalled") != std::string::npos);
  CHECK(rep.decay_ratio == Catch::Approx(1.0));
}

TEST_CASE("mackey verdicts are scale invariant") {
  Space r2 = Space::real(2);
  Rng rng(207);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vector> seq;
    Vector v = rng.nonzero_vector(r2);
    bool make_cauchy = rng.flip();
    for (unsigned n = 0; n < 8; ++n)
      seq.push_back(make_cauchy ? v * rat_pow(rat(1, 2), n) : v * Rational(n % 3));
    BoundedCert ball = BoundedCert::ball(r2, rat(20));
    bool base = mackey_cauchy_test(seq, ball).cauchy;
    Rational lambda = rng.nonzero_rational(50, 3);
    std::vector<Vector> scaled;
    for (const auto& x : seq) scaled.push_back(x * lambda);
    CHECK(mackey_cauchy_test(scaled, BoundedCert::scale(lambda, ball)).cauchy == base);
    CHECK(mackey_cauchy_test(scaled, ball).cauchy == base);
  }
}

TEST_CASE("mackey edge cases") {
  Space r1 = Space::real(1);
  MackeyReport one = mackey_cauchy_test({Vector(r1, {rat(1)})}, BoundedCert::ball(r1, rat(1)));
  CHECK(one.cauchy);
  CHECK(one.trivial);
  std::vector<Vector> seq = {Vector(r1, {rat(0)}), Vector(r1, {rat(1)})};
  MackeyReport zero_r = mackey_cauchy_test(seq, BoundedCert::ball(r1, rat(0)));
  CHECK_FALSE(zero_r.cauchy);
  CHECK(zero_r.note.find("zero radius") != std::string::npos);
}

TEST_CASE("CSV curves load exactly and refuse interpolation") {
  std::string csv = "t,x1,x2\n-1,1,-0.5\n0,0,0\n1/2,1/4,0.125\n";
  SampledCurve data = curve_from_csv_text(csv);
  CHECK(data.dim == 2);
  REQUIRE(data.times.size() == 3);
  CHECK(data.times[2] == rat(1, 2));
  CHECK(data.values[0][1] == rat(-1, 2));
  CurveOracle c = CurveOracle::sampled(data);
  CHECK(c.at(rat(1, 2))[0] == rat(1, 4));
  CHECK_THROWS_AS(c.at(rat(1, 3)), std::domain_error);
  try {
    c.at(rat(1, 3));
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("1/3") != std::string::npos);
  }
}

TEST_CASE("CSV validation") {
  CHECK_THROWS_AS(curve_from_csv_text(""), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("x,t\n"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("t,x2\n0,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("t,x1\n"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("t,x1\n0,1\n0,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("t,x1\n1,1\n0,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(curve_from_csv_text("t,x1\n0,1,2\n"), std::invalid_argument);
}

TEST_CASE("sampled curves feed the quotient engine") {
  // t^2 sampled on a coarse grid
  std::string csv = "t,x1\n-2,4\n-1,1\n0,0\n1,1\n2,4\n";
  CurveOracle c = CurveOracle::sampled(curve_from_csv_text(csv));
  CHECK(delta_quotient(c, rats({-2, 0, 2}))[0] == 2);
  CHECK(delta_quotient(c, rats({1, 0}))[0] == 1);
}
