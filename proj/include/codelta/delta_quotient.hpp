#pragma once

#include <codelta/curve.hpp>

#include <stdexcept>
#include <vector>

namespace codelta {

namespace detail {

// Iterated difference quotient table. With i+1 points the top entry is the
// order-i quotient
//   d^i c(t_0..t_i) = i/(t_0 - t_i) * (d^{i-1} c(t_0..t_{i-1}) - d^{i-1} c(t_1..t_i)),
// which equals i! times the classical divided difference.
template <typename T, typename Eval>
std::vector<T> delta_core(int dim, Eval eval, const std::vector<T>& pts) {
  if (pts.empty()) throw std::invalid_argument("difference quotient needs at least one point");
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (pts[a] == pts[b]) throw std::invalid_argument("difference quotient points must be distinct");
  const int k = static_cast<int>(pts.size()) - 1;
  std::vector<std::vector<T>> w;
  w.reserve(pts.size());
  for (const T& t : pts) {
    std::vector<T> v = eval(t);
    if (static_cast<int>(v.size()) != dim) throw std::logic_error("curve produced wrong dimension");
    w.push_back(std::move(v));
  }
  for (int j = 1; j <= k; ++j) {
    for (int l = 0; l + j <= k; ++l) {
      T scale = T(j) / (pts[static_cast<std::size_t>(l)] - pts[static_cast<std::size_t>(l + j)]);
      for (int d = 0; d < dim; ++d) {
        auto& cur = w[static_cast<std::size_t>(l)][static_cast<std::size_t>(d)];
        cur = (cur - w[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(d)]) * scale;
      }
    }
  }
  return w[0];
}

}  // namespace detail

// Exact order-(|points|-1) difference quotient of the curve.
inline std::vector<Rational> delta_quotient(const CurveOracle& c, const std::vector<Rational>& points) {
  return detail::delta_core<Rational>(c.dim(), [&](const Rational& t) { return c.at(t); }, points);
}

// Same with an explicit order, validated against the point count.
inline std::vector<Rational> delta_quotient(const CurveOracle& c, const std::vector<Rational>& points, int order) {
  if (static_cast<int>(points.size()) != order + 1)
    throw std::invalid_argument("order " + std::to_string(order) + " quotient needs " + std::to_string(order + 1) +
                                " points, got " + std::to_string(points.size()));
  return delta_quotient(c, points);
}

// Floating path; exact curves are evaluated through their derived double
// evaluator.
inline std::vector<double> delta_quotient_d(const CurveOracle& c, const std::vector<double>& points) {
  return detail::delta_core<double>(c.dim(), [&](double t) { return c.at(t); }, points);
}

// Forward-grid derivative estimates: for each step h the order-i quotient on
// t, t+h, ..., t+i*h. The error of the top quotient scales linearly in h, so
// shrinking h by a factor shrinks the error by the same factor.
inline std::vector<std::vector<Rational>> derivative_estimate(const CurveOracle& c, const Rational& t, int order,
                                                              const std::vector<Rational>& steps) {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  std::vector<std::vector<Rational>> out;
  out.reserve(steps.size());
  for (const Rational& h : steps) {
    if (h == 0) throw std::invalid_argument("zero step");
    std::vector<Rational> pts;
    pts.reserve(static_cast<std::size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) pts.push_back(t + Rational(j) * h);
    out.push_back(delta_quotient(c, pts));
  }
  return out;
}

}  // namespace codelta
