#include <codelta/gen.hpp>
#include <codelta/jet.hpp>
#include <codelta/poly.hpp>
#include <codelta/poly_json.hpp>
#include <codelta/rational.hpp>
#include <codelta/space.hpp>
#include <codelta/vec.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace codelta;

namespace {

// Scalar polynomial in one variable from (coeff, exponent) pairs.
PolyMap poly1(std::initializer_list<std::pair<long long, unsigned>> terms) {
  PolyMap p(Space::real(1), Space::real(1));
  for (auto& [c, e] : terms) p.add_term(0, {e}, Rational(c));
  return p;
}

Vector v1(long long x) { return Vector(Space::real(1), {Rational(x)}); }

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/4") == rat(3, 4));
  CHECK(parse_rational("-3/4") == rat(-3, 4));
  CHECK(parse_rational("7") == rat(7));
  CHECK(parse_rational("0.125") == rat(1, 8));
  CHECK(parse_rational("-2.5") == rat(-5, 2));
  CHECK(to_string(rat(6, 8)) == "3/4");
  CHECK(to_string(rat(-6, 3)) == "-2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
  CHECK(rational_from_double(0.25) == rat(1, 4));
  CHECK(rat_pow(rat(2, 3), 3) == rat(8, 27));
  CHECK(factorial(5) == 120);
}

TEST_CASE("space descriptors") {
  Space s = Space::prod(Space::real(2), Space::dist(Space::real(1)));
  CHECK(s.to_string() == "(R^2 x !R^1)");
  CHECK(Space::parse("(R^2 x !R^1)") == s);
  CHECK(Space::parse("I") == Space::unit());
  CHECK(Space::parse("(R^1 (x) R^2)") == Space::tensor(Space::real(1), Space::real(2)));
  CHECK(Space::real(3).flat_dim() == 3);
  CHECK(Space::prod(Space::real(2), Space::real(3)).flat_dim() == 5);
  CHECK(Space::unit().flat_dim() == 1);
  CHECK_FALSE(Space::dist(Space::real(1)).is_flat());
  CHECK(Space::real(2) != Space::real(3));
  CHECK_THROWS_AS(Space::parse("R^"), std::invalid_argument);
  CHECK_THROWS_AS(Space::parse("(R^1 x R^2"), std::invalid_argument);
}

TEST_CASE("vector arithmetic") {
  Space r3 = Space::real(3);
  Vector a(r3, {rat(1), rat(2), rat(3)});
  Vector b(r3, {rat(0), rat(1, 2), rat(-1)});
  CHECK((a + b)[1] == rat(5, 2));
  CHECK((a - b)[2] == rat(4));
  CHECK((a * rat(2))[0] == rat(2));
  CHECK(Vector::basis(r3, 1)[1] == 1);
  CHECK(Vector::zero(r3).is_zero());
  CHECK(a.norm2_squared() == rat(14));
  CHECK(b.norm_inf() == rat(1));
  CHECK_THROWS_AS(Vector(r3, {rat(1)}), std::invalid_argument);
}

TEST_CASE("evaluation of t squared at 3") {
  PolyMap p = poly1({{1, 2}});
  CHECK(poly_eval(p, v1(3))[0] == 9);
}

TEST_CASE("composition of t squared with t plus one") {
  PolyMap g = poly1({{1, 2}});
  PolyMap f = poly1({{1, 1}, {1, 0}});
  PolyMap gf = poly_compose(g, f);
  CHECK(gf == poly1({{1, 2}, {2, 1}, {1, 0}}));
}

TEST_CASE("directional derivative of x squared y") {
  PolyMap p(Space::real(2), Space::real(1));
  p.add_term(0, {2, 1}, 1);
  Vector x(Space::real(2), {rat(1), rat(2)});
  Vector v(Space::real(2), {rat(1), rat(0)});
  CHECK(poly_diff(p, x, v)[0] == 4);
}

TEST_CASE("jet of t squared at 1") {
  PolyMap p = poly1({{1, 2}});
  Jet j = jet_at(p, v1(1), 2);
  CHECK(j.entry(0, JetKey{0, {}}) == 1);
  CHECK(j.entry(1, JetKey{0, {0}}) == 2);
  CHECK(j.entry(2, JetKey{0, {0, 0}}) == 2);
}

TEST_CASE("derivative is linear in the direction") {
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    Space dom = Space::real(1 + static_cast<int>(rng.below(3)));
    Space cod = Space::real(1 + static_cast<int>(rng.below(2)));
    PolyMap p = rng.polymap(dom, cod, 4);
    Vector x = rng.vector(dom);
    Vector v = rng.vector(dom);
    Vector w = rng.vector(dom);
    Rational a = rng.rational();
    Rational b = rng.rational();
    CHECK(poly_diff(p, x, v * a + w * b) == poly_diff(p, x, v) * a + poly_diff(p, x, w) * b);
  }
}

TEST_CASE("chain rule") {
  Rng rng(102);
  for (int i = 0; i < 200; ++i) {
    Space a = Space::real(1 + static_cast<int>(rng.below(3)));
    Space b = Space::real(1 + static_cast<int>(rng.below(2)));
    Space c = Space::real(1 + static_cast<int>(rng.below(2)));
    PolyMap f = rng.polymap(a, b, 3);
    PolyMap g = rng.polymap(b, c, 3);
    Vector x = rng.vector(a, 3, 4);
    Vector v = rng.vector(a, 3, 4);
    Vector lhs = poly_diff(poly_compose(g, f), x, v);
    Vector rhs = poly_diff(g, Vector(b, poly_eval(f, x).coords()), Vector(b, poly_diff(f, x, v).coords()));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("product rule") {
  Rng rng(103);
  for (int i = 0; i < 200; ++i) {
    Space dom = Space::real(1 + static_cast<int>(rng.below(3)));
    PolyMap p = rng.polymap(dom, Space::real(1), 3);
    PolyMap q = rng.polymap(dom, Space::real(1), 3);
    Vector x = rng.vector(dom, 5, 4);
    Vector v = rng.vector(dom, 5, 4);
    Rational lhs = poly_diff(poly_mul(p, q), x, v)[0];
    Rational rhs = poly_diff(p, x, v)[0] * poly_eval(q, x)[0] + poly_eval(p, x)[0] * poly_diff(q, x, v)[0];
    CHECK(lhs == rhs);
  }
}

TEST_CASE("symbolic and pointwise derivatives agree") {
  Rng rng(104);
  for (int i = 0; i < 200; ++i) {
    Space dom = Space::real(1 + static_cast<int>(rng.below(3)));
    PolyMap p = rng.polymap(dom, Space::real(2), 4);
    Vector x = rng.vector(dom);
    Vector v = rng.vector(dom);
    CHECK(poly_diff(p, x, v) == poly_eval(p.dir_derivative(v), x));
  }
}

TEST_CASE("currying fixes the first factor") {
  Space e1 = Space::real(2);
  Space e2 = Space::real(1);
  Space dom = Space::prod(e1, e2);
  Rng rng(105);
  for (int i = 0; i < 100; ++i) {
    PolyMap p = rng.polymap(dom, Space::real(2), 4);
    Vector x1 = rng.vector(e1);
    Vector x2 = rng.vector(e2);
    std::vector<Rational> both = x1.coords();
    for (const auto& c : x2.coords()) both.push_back(c);
    Vector x(dom, both);
    CHECK(poly_eval(poly_curry(p, x1), x2) == poly_eval(p, x));
  }
  PolyMap p = rng.polymap(dom, Space::real(1), 2);
  CHECK_THROWS_AS(poly_curry(p, Vector(Space::real(1), {rat(0)})), std::invalid_argument);
  CHECK_THROWS_AS(poly_curry(poly1({{1, 1}}), v1(0)), std::invalid_argument);
}

TEST_CASE("linearity predicate") {
  CHECK(poly1({{3, 1}}).is_linear());
  CHECK_FALSE(poly1({{3, 1}, {1, 0}}).is_linear());
  CHECK_FALSE(poly1({{1, 2}}).is_linear());
  CHECK(PolyMap::zero(Space::real(2), Space::real(1)).is_linear());
  CHECK(PolyMap::identity(Space::real(3)).is_linear());
}

TEST_CASE("canonical term storage") {
  PolyMap p(Space::real(1), Space::real(1));
  p.add_term(0, {1}, rat(2));
  p.add_term(0, {1}, rat(-2));
  CHECK(p.is_zero());
  p.add_term(0, {2}, rat(0));
  CHECK(p.terms().empty());
  CHECK_THROWS_AS(p.add_term(1, {1}, rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(p.add_term(0, {1, 2}, rat(1)), std::invalid_argument);
}

TEST_CASE("jet reconstructs the polynomial") {
  Rng rng(106);
  for (int i = 0; i < 100; ++i) {
    Space dom = Space::real(1 + static_cast<int>(rng.below(3)));
    PolyMap p = rng.polymap(dom, Space::real(2), 3);
    Vector x = rng.vector(dom, 3, 4);
    Jet j = jet_at(p, x, static_cast<int>(p.degree()));
    PolyMap taylor = jet_to_poly(j);
    // taylor(h) must equal p(x + h)
    for (int trial = 0; trial < 5; ++trial) {
      Vector h = rng.vector(dom, 2, 3);
      CHECK(poly_eval(taylor, h) == poly_eval(p, x + h));
    }
  }
}

TEST_CASE("jet composition matches composing then taking the jet") {
  Rng rng(107);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Space a = Space::real(1 + static_cast<int>(rng.below(3)));
    Space b = Space::real(1 + static_cast<int>(rng.below(3)));
    Space c = Space::real(1 + static_cast<int>(rng.below(3)));
    PolyMap f = rng.polymap(a, b, 4, 3);
    PolyMap g = rng.polymap(b, c, 4, 3);
    int order = static_cast<int>(rng.below(4));
    Vector x = rng.vector(a, 2, 3);
    Jet fj = jet_at(f, x, order);
    Jet gj = jet_at(g, Vector(b, poly_eval(f, x).coords()), order);
    Jet direct = jet_at(poly_compose(g, f), x, order);
    if (jet_compose(gj, fj) == direct) ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("jet composition rejects mismatched bases") {
  PolyMap f = poly1({{1, 1}, {1, 0}});
  PolyMap g = poly1({{1, 2}});
  Jet fj = jet_at(f, v1(1), 2);
  Jet gj_wrong = jet_at(g, v1(0), 2);
  CHECK_THROWS_AS(jet_compose(gj_wrong, fj), std::invalid_argument);
  Jet gj_short = jet_at(g, v1(2), 1);
  CHECK_THROWS_AS(jet_compose(gj_short, fj), std::invalid_argument);
}

TEST_CASE("polynomial JSON round trip") {
  Rng rng(108);
  for (int i = 0; i < 50; ++i) {
    Space dom = Space::real(1 + static_cast<int>(rng.below(4)));
    PolyMap p = rng.polymap(dom, Space::real(1 + static_cast<int>(rng.below(3))), 4);
    Json j = poly_to_json(p);
    PolyMap q = poly_from_json(j);
    CHECK(p == q);
    CHECK(poly_to_json(q).dump() == j.dump());
  }
}

TEST_CASE("polynomial JSON validation") {
  CHECK_THROWS_AS(parse_json_strict(R"({"vars":1,"vars":2})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_json_strict("{"), std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json_text(R"({"vars":1,"outputs":1})"), std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json_text(R"({"vars":1,"outputs":1,"terms":[{"out":0,"exps":[1,2],"coeff":"1"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json_text(R"({"vars":1,"outputs":1,"terms":[{"out":0,"exps":[-1],"coeff":"1"}]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json_text(R"({"vars":1,"outputs":1,"terms":[{"out":1,"exps":[1],"coeff":"1"}]})"),
                  std::invalid_argument);
  // duplicate term keys merge into canonical form
  PolyMap p = poly_from_json_text(
      R"({"vars":1,"outputs":1,"terms":[{"out":0,"exps":[1],"coeff":"1/2"},{"out":0,"exps":[1],"coeff":"1/2"}]})");
  CHECK(p == poly1({{1, 1}}));
}

TEST_CASE("deterministic printing") {
  PolyMap p(Space::real(2), Space::real(1));
  p.add_term(0, {0, 1}, rat(3));
  p.add_term(0, {1, 0}, rat(1, 2));
  CHECK(p.to_string() == "3*y0*x1 + 1/2*y0*x0");
  CHECK(poly1({}).to_string() == "0");
}
