#pragma once

#include <codelta/poly.hpp>
#include <codelta/rational.hpp>
#include <codelta/vec.hpp>

#include <algorithm>
#include <functional>
#include <istream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

// Sampled data: strictly increasing times with one value row each. Lookups
// are exact; asking for a time that was never sampled is an error rather than
// an interpolation.
struct SampledCurve {
  int dim = 0;
  std::vector<Rational> times;
  std::vector<std::vector<Rational>> values;
};

// One curve R -> R^dim. Supports an exact path over rationals and a floating
// path; curves constructed from exact data serve both.
class CurveOracle {
 public:
  using ExactFn = std::function<std::vector<Rational>(const Rational&)>;
  using ApproxFn = std::function<std::vector<double>(double)>;

  static CurveOracle exact(int dim, ExactFn fn) {
    CurveOracle c;
    c.dim_ = dim;
    c.exact_ = true;
    c.exact_fn_ = fn;
    c.approx_fn_ = [fn](double t) {
      std::vector<Rational> v = fn(rational_from_double(t));
      std::vector<double> out;
      out.reserve(v.size());
      for (const auto& x : v) out.push_back(to_double(x));
      return out;
    };
    return c;
  }

  static CurveOracle numeric(int dim, ApproxFn fn) {
    CurveOracle c;
    c.dim_ = dim;
    c.exact_ = false;
    c.approx_fn_ = std::move(fn);
    return c;
  }

  // Polynomial curve from a map with a one dimensional domain.
  static CurveOracle polynomial(const PolyMap& p) {
    if (p.vars() != 1) throw std::invalid_argument("polynomial curve needs one variable");
    return exact(p.outputs(), [p](const Rational& t) {
      return poly_eval(p, Vector(Space::real(1), {t})).coords();
    });
  }

  static CurveOracle sampled(SampledCurve data) {
    auto shared = std::make_shared<SampledCurve>(std::move(data));
    return exact(shared->dim, [shared](const Rational& t) {
      auto it = std::lower_bound(shared->times.begin(), shared->times.end(), t);
      if (it == shared->times.end() || *it != t)
        throw std::domain_error("curve was not sampled at t = " + to_string(t));
      return shared->values[static_cast<std::size_t>(it - shared->times.begin())];
    });
  }

  int dim() const { return dim_; }
  bool is_exact() const { return exact_; }

  std::vector<Rational> at(const Rational& t) const {
    if (!exact_) throw std::logic_error("curve has no exact evaluation path");
    std::vector<Rational> v = exact_fn_(t);
    if (static_cast<int>(v.size()) != dim_) throw std::logic_error("curve produced wrong dimension");
    return v;
  }

  std::vector<double> at(double t) const {
    std::vector<double> v = approx_fn_(t);
    if (static_cast<int>(v.size()) != dim_) throw std::logic_error("curve produced wrong dimension");
    return v;
  }

  // Scalar curve l(c(t)) for a linear functional given by coefficients.
  CurveOracle compose_functional(const std::vector<Rational>& row) const {
    if (static_cast<int>(row.size()) != dim_) throw std::invalid_argument("functional arity mismatch");
    if (exact_) {
      ExactFn fn = exact_fn_;
      return exact(1, [fn, row](const Rational& t) {
        std::vector<Rational> v = fn(t);
        Rational s = 0;
        for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * v[i];
        return std::vector<Rational>{s};
      });
    }
    ApproxFn fn = approx_fn_;
    std::vector<double> drow;
    drow.reserve(row.size());
    for (const auto& r : row) drow.push_back(to_double(r));
    return numeric(1, [fn, drow](double t) {
      std::vector<double> v = fn(t);
      double s = 0;
      for (std::size_t i = 0; i < drow.size(); ++i) s += drow[i] * v[i];
      return std::vector<double>{s};
    });
  }

 private:
  CurveOracle() = default;

  int dim_ = 0;
  bool exact_ = false;
  ExactFn exact_fn_;
  ApproxFn approx_fn_;
};

// CSV layout: header "t,x1,...,xn", one sample per row, times strictly
// increasing. Cells are rationals or plain decimals, parsed exactly.
inline SampledCurve curve_from_csv(std::istream& in) {
  SampledCurve curve;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "t") throw std::invalid_argument("CSV header must start with \"t\"");
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "x" + std::to_string(i))
      throw std::invalid_argument("CSV header column " + std::to_string(i) + " must be x" + std::to_string(i));
  }
  curve.dim = static_cast<int>(header.size()) - 1;
  if (curve.dim < 1) throw std::invalid_argument("CSV needs at least one value column");
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<Rational> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(parse_rational(cell));
    if (static_cast<int>(cells.size()) != curve.dim + 1)
      throw std::invalid_argument("CSV row " + std::to_string(row_no) + " has wrong arity");
    if (!curve.times.empty() && cells[0] <= curve.times.back())
      throw std::invalid_argument("CSV times must be strictly increasing at row " + std::to_string(row_no));
    curve.times.push_back(cells[0]);
    curve.values.emplace_back(cells.begin() + 1, cells.end());
  }
  if (curve.times.empty()) throw std::invalid_argument("CSV has no samples");
  return curve;
}

inline SampledCurve curve_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  return curve_from_csv(in);
}

}  // namespace codelta
