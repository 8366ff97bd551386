#include <codelta/curve.hpp>
#include <codelta/sampled_grid.hpp>

#include <cstdio>
#include <vector>

using codelta::Rational;

// Dyadic grid -1, -1/2, ..., -1/128, 0, 1/128, ..., 1.
static std::vector<Rational> dyadic_times() {
  std::vector<Rational> ts;
  for (int k = 0; k <= 7; ++k) ts.push_back(-Rational(1, 1 << k));
  ts.push_back(Rational(0));
  for (int k = 7; k >= 0; --k) ts.push_back(Rational(1, 1 << k));
  return ts;
}

static void probe(const char* label, const codelta::SampledCurve& c) {
  codelta::SampledReport rep = codelta::analyze_samples(c, 3);
  std::printf("%s: %s", label, rep.smooth ? "smooth up to order 3" : "NOT smooth");
  if (!rep.smooth) std::printf(" (quotients blow up at order %d)", rep.first_bad_order);
  std::printf("\n");
  for (const auto& o : rep.orders)
    std::printf("  order %d  max quotient %-12s growth exponent %+.3f\n", o.order,
                codelta::to_string(o.max_abs).c_str(), o.growth_exponent);
}

int main() {
  codelta::SampledCurve parabola{1, dyadic_times(), {}};
  codelta::SampledCurve corner{1, dyadic_times(), {}};
  for (const Rational& t : parabola.times) {
    parabola.values.push_back({t * t});
    corner.values.push_back({t < 0 ? -t : t});
  }
  probe("t -> t^2", parabola);
  probe("t -> |t|", corner);
  return 0;
}
