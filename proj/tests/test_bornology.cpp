#include <codelta/bornology.hpp>
#include <codelta/gen.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace codelta;

namespace {

Vector v2(long long x, long long y) { return Vector(Space::real(2), {Rational(x), Rational(y)}); }

Vector v2r(const Rational& x, const Rational& y) { return Vector(Space::real(2), {x, y}); }

}  // namespace

TEST_CASE("radius of a ball is its radius") {
  BoundedCert b = BoundedCert::ball(Space::real(2), rat(3));
  CHECK(radius_of(b).r2 == 9);
  CHECK(radius_of(b).to_string() == "3");
}

TEST_CASE("radius of a union is the maximum") {
  Space r2 = Space::real(2);
  BoundedCert u = BoundedCert::union_of(
      {BoundedCert::ball(r2, rat(1)), BoundedCert::ball(r2, rat(5)), BoundedCert::ball(r2, rat(2))});
  CHECK(radius_of(u).to_string() == "5");
}

TEST_CASE("scaling scales the radius") {
  BoundedCert b = BoundedCert::ball(Space::real(1), rat(7, 2));
  CHECK(radius_of(BoundedCert::scale(rat(2), b)).to_string() == "7");
  CHECK(radius_of(BoundedCert::scale(rat(-2), b)).to_string() == "7");
  CHECK(radius_of(BoundedCert::scale(rat(0), b)).r2 == 0);
}

TEST_CASE("hull and negation keep the radius") {
  BoundedCert s = BoundedCert::finite_sample(Space::real(2), {v2(1, 0), v2(3, 4)});
  CHECK(radius_of(s).to_string() == "5");
  CHECK(radius_of(BoundedCert::hull(s)) == radius_of(s));
  CHECK(radius_of(BoundedCert::negate(s)) == radius_of(s));
}

TEST_CASE("irrational radii print as square roots") {
  BoundedCert s = BoundedCert::finite_sample(Space::real(2), {v2(1, 1)});
  CHECK(radius_of(s).to_string() == "sqrt(2)");
  CHECK(radius_of(s).value() == Catch::Approx(std::sqrt(2.0)));
  BoundedCert empty = BoundedCert::finite_sample(Space::real(2), {});
  CHECK(radius_of(empty).r2 == 0);
}

TEST_CASE("certificate construction validation") {
  CHECK_THROWS_AS(BoundedCert::ball(Space::real(1), rat(-1)), std::invalid_argument);
  CHECK_THROWS_AS(BoundedCert::union_of({}), std::invalid_argument);
  CHECK_THROWS_AS(BoundedCert::union_of({BoundedCert::ball(Space::real(1), rat(1)),
                                         BoundedCert::ball(Space::real(2), rat(1))}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BoundedCert::finite_sample(Space::real(2), {Vector(Space::real(1), {rat(1)})}),
                  std::invalid_argument);
}

TEST_CASE("certificate operations satisfy the closure axioms") {
  Space r2 = Space::real(2);
  std::vector<BoundedCert> family = {
      BoundedCert::ball(r2, rat(2)),
      BoundedCert::finite_sample(r2, {v2(0, 1), v2(3, 4), v2(-1, -1)}),
      BoundedCert::scale(rat(3, 2), BoundedCert::ball(r2, rat(4))),
      BoundedCert::hull(BoundedCert::finite_sample(r2, {v2(6, 8)})),
  };
  CbsAxiomReport rep = cbs_axioms_check(family);
  CHECK(rep.all_ok);
  CHECK(rep.checks.size() >= family.size() * 3);
  for (const auto& c : rep.checks) CHECK(c.ok);
}

TEST_CASE("random certificates satisfy the closure axioms") {
  Rng rng(301);
  for (int trial = 0; trial < 50; ++trial) {
    Space space = Space::real(1 + static_cast<int>(rng.below(3)));
    std::vector<BoundedCert> family;
    for (int i = 0; i < 3; ++i) {
      switch (rng.below(3)) {
        case 0:
          family.push_back(BoundedCert::ball(space, rat_abs(rng.rational())));
          break;
        case 1: {
          std::vector<Vector> pts;
          for (int k = 0; k < 4; ++k) pts.push_back(rng.vector(space));
          family.push_back(BoundedCert::finite_sample(space, pts));
          break;
        }
        default:
          family.push_back(BoundedCert::scale(rng.rational(), BoundedCert::ball(space, rat_abs(rng.rational()))));
      }
    }
    CHECK(cbs_axioms_check(family).all_ok);
  }
}

TEST_CASE("unit circle samples are scalarly bounded with sup one per coordinate") {
  std::vector<Vector> circle = {v2(1, 0),  v2(0, 1),        v2(-1, 0),         v2(0, -1),
                                v2r(rat(3, 5), rat(4, 5)),  v2r(rat(-4, 5), rat(3, 5)),
                                v2r(rat(-3, 5), rat(-4, 5)), v2r(rat(5, 13), rat(-12, 13))};
  ScalarBoundReport rep = scalarly_bounded(circle, {{rat(1), rat(0)}, {rat(0), rat(1)}});
  CHECK(rep.bounded);
  CHECK_FALSE(rep.vacuous);
  REQUIRE(rep.functionals.size() == 2);
  CHECK(rep.functionals[0].sup == 1);
  CHECK(rep.functionals[1].sup == 1);
}

TEST_CASE("linearly growing samples are flagged unbounded") {
  Space r2 = Space::real(2);
  Vector v = v2(1, 2);
  std::vector<Vector> sample;
  for (int k = 0; k < 16; ++k) sample.push_back(v * Rational(k));
  ScalarBoundReport rep = scalarly_bounded(sample, {{rat(1), rat(0)}, {rat(0), rat(1)}});
  CHECK_FALSE(rep.bounded);
  CHECK(rep.witness == 0);
  CHECK(rep.functionals[0].last_increase == 15);
  CHECK(rep.functionals[0].sup == 15);
}

TEST_CASE("empty functional families give a flagged vacuous verdict") {
  ScalarBoundReport rep = scalarly_bounded({v2(1, 1)}, {});
  CHECK(rep.vacuous);
  CHECK(rep.bounded);
  CHECK(rep.note.find("vacuous") != std::string::npos);
}

TEST_CASE("scalar boundedness agrees with the certificate radius on random samples") {
  Rng rng(302);
  for (int trial = 0; trial < 30; ++trial) {
    Space space = Space::real(2);
    std::vector<Vector> sample;
    for (int k = 0; k < 12; ++k) sample.push_back(rng.vector(space, 5, 4));
    ScalarBoundReport rep = scalarly_bounded(sample, {{rat(1), rat(0)}, {rat(0), rat(1)}});
    RadiusBound r = radius_of(BoundedCert::finite_sample(space, sample));
    // each coordinate sup is dominated by the Euclidean radius
    for (const auto& pf : rep.functionals) CHECK(pf.sup * pf.sup <= r.r2);
  }
}

TEST_CASE("product boundedness splits into the two projections") {
  Space prod = Space::prod(Space::real(2), Space::real(2));
  std::vector<Vector> sample;
  // product of two unit circles
  std::vector<std::pair<long long, long long>> pts = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (auto [a, b] : pts)
    for (auto [c, d] : pts)
      sample.push_back(Vector(prod, {Rational(a), Rational(b), Rational(c), Rational(d)}));
  ProductBoundReport rep = product_bounded(prod, sample);
  CHECK(rep.bounded);
  CHECK(rep.left_radius.to_string() == "1");
  CHECK(rep.right_radius.to_string() == "1");
  CHECK(rep.left.bounded);
  CHECK(rep.right.bounded);
}

TEST_CASE("empty product samples report zero radii") {
  Space prod = Space::prod(Space::real(1), Space::real(3));
  ProductBoundReport rep = product_bounded(prod, {});
  CHECK(rep.bounded);
  CHECK(rep.left_radius.r2 == 0);
  CHECK(rep.right_radius.r2 == 0);
}

TEST_CASE("unbounded factors are caught by their projection") {
  Space prod = Space::prod(Space::real(1), Space::real(1));
  std::vector<Vector> sample;
  for (int k = 0; k < 16; ++k) sample.push_back(Vector(prod, {rat(1), Rational(k)}));
  ProductBoundReport rep = product_bounded(prod, sample);
  CHECK_FALSE(rep.bounded);
  CHECK(rep.left.bounded);
  CHECK_FALSE(rep.right.bounded);
  CHECK_THROWS_AS(product_bounded(Space::real(2), sample), std::invalid_argument);
}
