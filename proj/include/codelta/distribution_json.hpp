#pragma once

#include <codelta/distribution.hpp>
#include <codelta/poly_json.hpp>

#include <memory>

namespace codelta {

// Point encoding: {"vector": ["1","2"]} on coordinate spaces,
// {"pair": [p, q]} on products, {"dist": [term...]} under a bang.
// The space is always supplied by context, never stored on the point.

inline Json point_to_json(const Point& p);
inline Json distribution_terms_to_json(const Distribution& d);

inline Json dir_to_json(const BasisDir& d) {
  switch (d.kind()) {
    case BasisDir::Kind::Axis:
      return Json{{"axis", d.index()}};
    case BasisDir::Kind::Delta: {
      Json t;
      t["coeff"] = "1";
      t["base"] = point_to_json(d.delta_term().base);
      Json dirs = Json::array();
      for (const auto& inner : d.delta_term().dirs) dirs.push_back(dir_to_json(inner));
      t["dirs"] = std::move(dirs);
      return Json{{"delta", std::move(t)}};
    }
    case BasisDir::Kind::Left:
      return Json{{"left", dir_to_json(d.child())}};
    case BasisDir::Kind::Right:
      return Json{{"right", dir_to_json(d.child())}};
  }
  throw std::logic_error("unreachable");
}

inline Json point_to_json(const Point& p) {
  if (p.is_vector()) {
    Json coords = Json::array();
    for (const auto& c : p.vector().coords()) coords.push_back(to_string(c));
    return Json{{"vector", std::move(coords)}};
  }
  if (p.is_pair()) return Json{{"pair", Json::array({point_to_json(p.left()), point_to_json(p.right())})}};
  return Json{{"dist", distribution_terms_to_json(p.distribution())}};
}

inline Json distribution_terms_to_json(const Distribution& d) {
  Json terms = Json::array();
  for (const auto& [k, c] : d.entries()) {
    Json t;
    t["coeff"] = to_string(c);
    t["base"] = point_to_json(k.base);
    Json dirs = Json::array();
    for (const auto& dir : k.dirs) dirs.push_back(dir_to_json(dir));
    t["dirs"] = std::move(dirs);
    terms.push_back(std::move(t));
  }
  return terms;
}

inline Json distribution_to_json(const Distribution& d) {
  return Json{{"space", d.space().to_string()}, {"terms", distribution_terms_to_json(d)}};
}

inline Point point_from_json(const Json& j, const Space& space);
inline void distribution_terms_from_json(const Json& terms, Distribution& out);

inline BasisDir dir_from_json(const Json& j, const Space& space) {
  if (!j.is_object() || j.size() != 1) throw std::invalid_argument("tangent encoding needs exactly one tag");
  if (j.contains("axis")) {
    const Json& v = j.at("axis");
    if (!v.is_number_integer()) throw std::invalid_argument("axis index must be an integer");
    return BasisDir::axis(space, v.get<int>());
  }
  if (j.contains("delta")) {
    if (space.kind() != Space::Kind::Dist) throw std::invalid_argument("delta tangent outside a bang space");
    const Json& t = j.at("delta");
    Rational c = rational_from_json(expect_field(t, "coeff"));
    if (c != 1) throw std::invalid_argument("delta tangent must carry coefficient 1; scale the term instead");
    Point base = point_from_json(expect_field(t, "base"), space.inner());
    std::vector<BasisDir> dirs;
    for (const Json& dj : expect_field(t, "dirs")) dirs.push_back(dir_from_json(dj, space.inner()));
    std::sort(dirs.begin(), dirs.end());
    auto key = std::make_shared<DeltaKey>(DeltaKey{std::move(base), std::move(dirs)});
    return BasisDir::delta(space, std::move(key));
  }
  if (j.contains("left")) return BasisDir::left(space, dir_from_json(j.at("left"), space.left()));
  if (j.contains("right")) return BasisDir::right(space, dir_from_json(j.at("right"), space.right()));
  throw std::invalid_argument("unknown tangent tag: " + j.begin().key());
}

inline Point point_from_json(const Json& j, const Space& space) {
  if (!j.is_object() || j.size() != 1) throw std::invalid_argument("point encoding needs exactly one tag");
  if (j.contains("vector")) {
    const Json& coords = j.at("vector");
    if (!coords.is_array()) throw std::invalid_argument("vector coordinates must be an array");
    if (!space.is_flat()) throw std::invalid_argument("coordinate point in non-coordinate space " + space.to_string());
    std::vector<Rational> cs;
    for (const Json& c : coords) cs.push_back(rational_from_json(c));
    return Point::from_vector(Vector(space, std::move(cs)));
  }
  if (j.contains("pair")) {
    const Json& pq = j.at("pair");
    if (space.kind() != Space::Kind::Prod) throw std::invalid_argument("pair point in non-product space " + space.to_string());
    if (!pq.is_array() || pq.size() != 2) throw std::invalid_argument("pair point needs two components");
    return Point::pair(point_from_json(pq[0], space.left()), point_from_json(pq[1], space.right()));
  }
  if (j.contains("dist")) {
    if (space.kind() != Space::Kind::Dist) throw std::invalid_argument("distribution point in non-bang space " + space.to_string());
    Distribution d(space.inner());
    distribution_terms_from_json(j.at("dist"), d);
    return Point::from_distribution(std::move(d));
  }
  throw std::invalid_argument("unknown point tag: " + j.begin().key());
}

inline void distribution_terms_from_json(const Json& terms, Distribution& out) {
  if (!terms.is_array()) throw std::invalid_argument("distribution terms must be an array");
  for (const Json& t : terms) {
    Rational coeff = rational_from_json(expect_field(t, "coeff"));
    Point base = point_from_json(expect_field(t, "base"), out.space());
    const Json& dirs_j = expect_field(t, "dirs");
    if (!dirs_j.is_array()) throw std::invalid_argument("tangent list must be an array");
    std::vector<BasisDir> dirs;
    for (const Json& dj : dirs_j) dirs.push_back(dir_from_json(dj, out.space()));
    out.add_term_basis(coeff, std::move(base), std::move(dirs));
  }
}

inline Distribution distribution_from_json(const Json& j) {
  Space space = Space::parse(expect_field(j, "space").get<std::string>());
  Distribution d(space);
  distribution_terms_from_json(expect_field(j, "terms"), d);
  return d;
}

inline Json tensor_to_json(const TensorElem& t) {
  Json spaces = Json::array();
  for (const auto& s : t.factor_spaces()) spaces.push_back(s.to_string());
  Json terms = Json::array();
  for (const auto& [factors, c] : t.entries()) {
    Json term;
    term["coeff"] = to_string(c);
    Json fac = Json::array();
    for (int i = 0; i < t.arity(); ++i) fac.push_back(distribution_terms_to_json(t.factor_distribution(factors, i)));
    term["factors"] = std::move(fac);
    terms.push_back(std::move(term));
  }
  return Json{{"factor_spaces", std::move(spaces)}, {"terms", std::move(terms)}};
}

inline TensorElem tensor_from_json(const Json& j) {
  std::vector<Space> spaces;
  for (const Json& s : expect_field(j, "factor_spaces")) spaces.push_back(Space::parse(s.get<std::string>()));
  TensorElem out(spaces);
  for (const Json& term : expect_field(j, "terms")) {
    Rational coeff = rational_from_json(expect_field(term, "coeff"));
    const Json& fac = expect_field(term, "factors");
    if (!fac.is_array() || static_cast<int>(fac.size()) != out.arity())
      throw std::invalid_argument("tensor term factor count mismatch");
    std::vector<Distribution> parts;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
      Distribution d(spaces[i]);
      distribution_terms_from_json(fac[i], d);
      parts.push_back(std::move(d));
    }
    out = out.add(tensor_of(parts).scale(coeff));
  }
  return out;
}

}  // namespace codelta
