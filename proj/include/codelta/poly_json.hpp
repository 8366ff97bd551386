#pragma once

#include <codelta/json_util.hpp>
#include <codelta/poly.hpp>

#include <string>

namespace codelta {

// Interchange form:
//   {"vars": n, "outputs": m,
//    "terms": [{"out": i, "exps": [e0,...], "coeff": "p/q"}, ...]}
// Terms are emitted in monomial order; loading canonicalizes (merges term
// duplicates, drops zeros) and rejects duplicate JSON keys upstream.

// Scalars travel as "p/q" strings; integers are accepted as plain numbers.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected a rational value");
}

inline Json poly_to_json(const PolyMap& p) {
  Json j;
  j["vars"] = p.vars();
  j["outputs"] = p.outputs();
  Json terms = Json::array();
  for (const auto& [k, c] : p.terms()) {
    Json t;
    t["out"] = k.out;
    t["exps"] = k.exps;
    t["coeff"] = to_string(c);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline PolyMap poly_from_json(const Json& j) {
  int vars = expect_field(j, "vars").get<int>();
  int outputs = expect_field(j, "outputs").get<int>();
  if (vars < 0 || outputs < 0) throw std::invalid_argument("negative arity in polynomial");
  PolyMap p(Space::real(vars), Space::real(outputs));
  const Json& terms = expect_field(j, "terms");
  if (!terms.is_array()) throw std::invalid_argument("\"terms\" must be an array");
  for (const Json& t : terms) {
    int out = expect_field(t, "out").get<int>();
    const Json& ej = expect_field(t, "exps");
    if (!ej.is_array() || static_cast<int>(ej.size()) != vars)
      throw std::invalid_argument("\"exps\" must list one exponent per variable");
    std::vector<unsigned> exps;
    exps.reserve(ej.size());
    for (const Json& e : ej) {
      long long v = e.get<long long>();
      if (v < 0) throw std::invalid_argument("negative exponent");
      exps.push_back(static_cast<unsigned>(v));
    }
    p.add_term(out, std::move(exps), rational_from_json(expect_field(t, "coeff")));
  }
  return p;
}

inline PolyMap poly_from_json_text(const std::string& text) { return poly_from_json(parse_json_strict(text)); }

inline Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (int i = 0; i < v.dim(); ++i) j.push_back(to_string(v[i]));
  return j;
}

inline Vector vector_from_json(const Json& j, const Space& space) {
  if (!j.is_array()) throw std::invalid_argument("vector must be a JSON array");
  if (static_cast<int>(j.size()) != space.flat_dim())
    throw std::invalid_argument("vector length does not match " + space.to_string());
  std::vector<Rational> coords;
  coords.reserve(j.size());
  for (const Json& c : j) coords.push_back(rational_from_json(c));
  return Vector(space, std::move(coords));
}

}  // namespace codelta
