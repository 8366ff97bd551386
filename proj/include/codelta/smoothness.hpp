#pragma once

#include <codelta/delta_quotient.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace codelta {

// Shrinking family of difference grids around a center: level l uses step
// base_h * shrink^l and nodes center + offset * step.
struct GridSpec {
  Rational center = 0;
  Rational base_h = rat(1, 4);
  Rational shrink = rat(1, 2);
  int levels = 8;
  std::vector<Rational> offsets = {rat(-3), rat(-2), rat(-1), rat(0), rat(1), rat(2), rat(3)};

  void validate(int max_order) const {
    if (!(shrink > 0 && shrink < 1)) throw std::invalid_argument("shrink factor must lie in (0,1)");
    if (base_h <= 0) throw std::invalid_argument("base step must be positive");
    if (levels < 2) throw std::invalid_argument("need at least two grid levels");
    for (std::size_t a = 0; a < offsets.size(); ++a)
      for (std::size_t b = a + 1; b < offsets.size(); ++b)
        if (offsets[a] == offsets[b]) throw std::invalid_argument("grid offsets must be distinct");
    if (static_cast<int>(offsets.size()) < max_order + 1)
      throw std::invalid_argument("grid needs at least order+1 offsets");
  }
};

struct SmoothnessOptions {
  // Fitted slope of log max against log step below which an order counts as
  // divergent.
  double exponent_threshold = -0.1;
  // Relative growth allowed between consecutive level maxima once settled.
  double stability_tol = 0.05;
};

// Diagnostics of one quotient order across the grid levels.
struct OrderDiagnostics {
  int order = 0;
  std::vector<double> level_h;
  std::vector<double> level_max;
  double growth_exponent = 0;
  bool bounded = true;
  bool identically_zero = false;
  int stable_from = -1;
  // worst window at the finest level
  std::vector<double> witness_points;
  double witness_value = 0;
};

struct ProbeDiagnostics {
  std::string label;
  bool smooth = true;
  int first_bad_order = -1;
  std::vector<OrderDiagnostics> orders;
};

struct SmoothnessReport {
  int max_order = 0;
  bool smooth = true;
  int first_bad_order = -1;
  bool vacuous = false;
  std::string note;
  std::vector<OrderDiagnostics> orders;
  std::vector<ProbeDiagnostics> probes;
};

namespace detail {

// Least squares slope of y against x with compensated sums.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0;
  double sums[4] = {0, 0, 0, 0};  // x, y, xx, xy
  double comp[4] = {0, 0, 0, 0};
  auto add = [&](int which, double v) {
    double t = v - comp[which];
    double s = sums[which] + t;
    comp[which] = (s - sums[which]) - t;
    sums[which] = s;
  };
  for (std::size_t i = 0; i < n; ++i) {
    add(0, x[i]);
    add(1, y[i]);
    add(2, x[i] * x[i]);
    add(3, x[i] * y[i]);
  }
  double dn = static_cast<double>(n);
  double denom = dn * sums[2] - sums[0] * sums[0];
  if (denom == 0) return 0;
  return (dn * sums[3] - sums[0] * sums[1]) / denom;
}

inline OrderDiagnostics analyze_order(const CurveOracle& c, const GridSpec& grid, int order,
                                      const SmoothnessOptions& opt) {
  OrderDiagnostics diag;
  diag.order = order;
  std::vector<Rational> offsets = grid.offsets;
  std::sort(offsets.begin(), offsets.end());
  const int windows = static_cast<int>(offsets.size()) - order;
  Rational h = grid.base_h;
  for (int level = 0; level < grid.levels; ++level) {
    Rational best = 0;
    std::vector<Rational> best_pts;
    for (int w = 0; w < windows; ++w) {
      std::vector<Rational> pts;
      pts.reserve(static_cast<std::size_t>(order) + 1);
      for (int j = 0; j <= order; ++j) pts.push_back(grid.center + offsets[static_cast<std::size_t>(w + j)] * h);
      Rational m = 0;
      if (c.is_exact()) {
        for (const Rational& v : delta_quotient(c, pts))
          if (rat_abs(v) > m) m = rat_abs(v);
      } else {
        std::vector<double> dpts;
        for (const Rational& p : pts) dpts.push_back(to_double(p));
        double dm = 0;
        for (double v : delta_quotient_d(c, dpts)) dm = std::max(dm, std::fabs(v));
        m = rational_from_double(dm);
      }
      if (best_pts.empty() || m > best) {
        best = m;
        best_pts = pts;
      }
    }
    diag.level_h.push_back(to_double(h));
    diag.level_max.push_back(to_double(best));
    if (level == grid.levels - 1) {
      for (const Rational& p : best_pts) diag.witness_points.push_back(to_double(p));
      diag.witness_value = to_double(best);
    }
    h *= grid.shrink;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < diag.level_max.size(); ++i) {
    if (diag.level_max[i] > 0) {
      lx.push_back(std::log(diag.level_h[i]));
      ly.push_back(std::log(diag.level_max[i]));
    }
  }
  diag.identically_zero = lx.empty();
  diag.growth_exponent = fit_slope(lx, ly);
  // last level from which the maxima stop growing beyond the tolerance
  int from = -1;
  for (int l = static_cast<int>(diag.level_max.size()) - 2; l >= 0; --l) {
    if (diag.level_max[static_cast<std::size_t>(l + 1)] <=
        diag.level_max[static_cast<std::size_t>(l)] * (1 + opt.stability_tol))
      from = l;
    else
      break;
  }
  diag.stable_from = diag.identically_zero ? 0 : from;
  diag.bounded = diag.identically_zero ||
                 (diag.growth_exponent > opt.exponent_threshold && diag.stable_from >= 0);
  return diag;
}

}  // namespace detail

// Certifies difference quotients of orders 1..max_order as bounded or
// divergent on the shrinking grids. This falsifies smoothness when a quotient
// blows up; a bounded answer is evidence on the sampled window, not a proof.
inline SmoothnessReport smooth_certificate(const CurveOracle& c, int max_order, const GridSpec& grid = {},
                                           const SmoothnessOptions& opt = {}) {
  if (max_order < 1) throw std::invalid_argument("max order must be at least one");
  grid.validate(max_order);
  SmoothnessReport rep;
  rep.max_order = max_order;
  for (int i = 1; i <= max_order; ++i) {
    OrderDiagnostics diag = detail::analyze_order(c, grid, i, opt);
    if (!diag.bounded && rep.smooth) {
      rep.smooth = false;
      rep.first_bad_order = i;
    }
    rep.orders.push_back(std::move(diag));
  }
  return rep;
}

// Scalar testing: probes the curve through linear functionals and certifies
// each composite scalar curve. On a finite dimensional target the coordinate
// functionals already separate points, so they are a sufficient family.
inline SmoothnessReport boman_scalar_test(const CurveOracle& c, const std::vector<std::vector<Rational>>& functionals,
                                          int max_order, const GridSpec& grid = {}, const SmoothnessOptions& opt = {}) {
  if (max_order < 1) throw std::invalid_argument("max order must be at least one");
  grid.validate(max_order);
  SmoothnessReport rep;
  rep.max_order = max_order;
  if (functionals.empty()) {
    rep.vacuous = true;
    rep.note = "no probes supplied; the verdict is vacuous";
    return rep;
  }
  rep.note = "coordinate functionals are a sufficient probe family on R^" + std::to_string(c.dim());
  for (std::size_t fi = 0; fi < functionals.size(); ++fi) {
    CurveOracle scalar = c.compose_functional(functionals[fi]);
    ProbeDiagnostics probe;
    probe.label = "l" + std::to_string(fi);
    for (int i = 1; i <= max_order; ++i) {
      OrderDiagnostics diag = detail::analyze_order(scalar, grid, i, opt);
      if (!diag.bounded && probe.smooth) {
        probe.smooth = false;
        probe.first_bad_order = i;
      }
      probe.orders.push_back(std::move(diag));
    }
    if (!probe.smooth && rep.smooth) {
      rep.smooth = false;
      rep.first_bad_order = probe.first_bad_order;
    }
    rep.probes.push_back(std::move(probe));
  }
  return rep;
}

}  // namespace codelta
