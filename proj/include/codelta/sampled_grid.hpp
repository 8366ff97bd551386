#pragma once

#include <codelta/curve.hpp>
#include <codelta/delta_quotient.hpp>
#include <codelta/smoothness.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace codelta {

// Raised when a quotient order asks for more samples than the file holds.
class InsufficientSamples : public std::runtime_error {
 public:
  InsufficientSamples(int order, int got)
      : std::runtime_error("order " + std::to_string(order) + " quotients need at least " +
                           std::to_string(order + 1) + " samples, got " + std::to_string(got)),
        required_(order + 1),
        got_(got) {}
  int required() const { return required_; }
  int got() const { return got_; }

 private:
  int required_;
  int got_;
};

struct SampleWindow {
  int stride = 1;
  std::vector<Rational> times;
  std::vector<Rational> values;  // one quotient per coordinate
  Rational max_abs = 0;
};

struct SampledOrderDiagnostics {
  int order = 0;
  std::vector<SampleWindow> windows;
  Rational max_abs = 0;
  double growth_exponent = 0;
  bool identically_zero = false;
  bool bounded = true;
};

struct SampledReport {
  int max_order = 0;
  int samples = 0;
  bool smooth = true;
  int first_bad_order = -1;
  std::vector<SampledOrderDiagnostics> orders;
};

// Quotient table over sample windows, one order at a time. Windows take every
// stride 1, 2, 4, ... so a corner is straddled at every available scale; the
// verdict fits log of the window maximum against log of the window width, so
// a corner only shows up when the sampling refines toward it.
inline SampledReport analyze_samples(const SampledCurve& data, int max_order,
                                     const SmoothnessOptions& opt = {}) {
  if (max_order < 1) throw std::invalid_argument("max order must be at least one");
  const int n = static_cast<int>(data.times.size());
  if (n < max_order + 1) throw InsufficientSamples(max_order, n);
  CurveOracle c = CurveOracle::sampled(data);
  SampledReport rep;
  rep.max_order = max_order;
  rep.samples = n;
  for (int order = 1; order <= max_order; ++order) {
    SampledOrderDiagnostics diag;
    diag.order = order;
    std::vector<double> lx, ly;
    for (int stride = 1; order * stride <= n - 1; stride *= 2) {
      for (int w = 0; w + order * stride < n; ++w) {
        SampleWindow win;
        win.stride = stride;
        win.times.reserve(static_cast<std::size_t>(order) + 1);
        for (int j = 0; j <= order; ++j)
          win.times.push_back(data.times[static_cast<std::size_t>(w + j * stride)]);
        win.values = delta_quotient(c, win.times);
        for (const Rational& v : win.values)
          if (rat_abs(v) > win.max_abs) win.max_abs = rat_abs(v);
        if (win.max_abs > diag.max_abs) diag.max_abs = win.max_abs;
        if (win.max_abs > 0) {
          lx.push_back(std::log(to_double(win.times.back() - win.times.front())));
          ly.push_back(std::log(to_double(win.max_abs)));
        }
        diag.windows.push_back(std::move(win));
      }
    }
    diag.identically_zero = lx.empty();
    diag.growth_exponent = detail::fit_slope(lx, ly);
    diag.bounded = diag.identically_zero || diag.growth_exponent > opt.exponent_threshold;
    if (!diag.bounded && rep.smooth) {
      rep.smooth = false;
      rep.first_bad_order = order;
    }
    rep.orders.push_back(std::move(diag));
  }
  return rep;
}

}  // namespace codelta
