#pragma once

#include <codelta/bornology.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace codelta {

// Convergence test of a sequence against a candidate bounded set: pairwise
// gaps are measured in multiples of the set radius and the tail sups must
// decay. The verdict only depends on ratios, so rescaling the sequence and
// the set together (or the sequence alone) cannot change it.
struct MackeyReport {
  bool cauchy = false;
  bool trivial = false;  // all gaps are zero
  std::vector<double> tail_sup;
  double decay_ratio = 0;  // last observed tail sup over the first
  std::string note;
};

struct MackeyOptions {
  // Required relative decay of the tail sup across the observed window.
  Rational decay = rat(1, 16);
};

inline MackeyReport mackey_cauchy_test(const std::vector<Vector>& seq, const BoundedCert& candidate,
                                       const MackeyOptions& opt = {}) {
  MackeyReport rep;
  const int K = static_cast<int>(seq.size());
  if (K < 2) {
    rep.cauchy = true;
    rep.trivial = true;
    rep.note = "fewer than two elements; nothing to compare";
    return rep;
  }
  const Rational r2 = radius_of(candidate).r2;
  // exact squared gaps, scaled by the squared radius
  std::vector<std::vector<Rational>> gap2(static_cast<std::size_t>(K), std::vector<Rational>(static_cast<std::size_t>(K), Rational(0)));
  bool moves = false;
  for (int n = 0; n < K; ++n) {
    for (int m = n + 1; m < K; ++m) {
      Rational g = (seq[static_cast<std::size_t>(n)] - seq[static_cast<std::size_t>(m)]).norm2_squared();
      if (g != 0) moves = true;
      gap2[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = g;
    }
  }
  if (!moves) {
    rep.cauchy = true;
    rep.trivial = true;
    rep.tail_sup.assign(static_cast<std::size_t>(K - 1), 0.0);
    rep.note = "all gaps vanish; the scale sequence is identically zero";
    return rep;
  }
  if (r2 == 0) {
    rep.cauchy = false;
    rep.note = "candidate set has zero radius but the sequence moves";
    return rep;
  }
  // tail sup over pairs with both indices >= k; the last window still holds
  // one genuine pair
  std::vector<Rational> tails;
  for (int k = 0; k + 1 < K; ++k) {
    Rational sup = 0;
    for (int n = k; n < K; ++n)
      for (int m = n + 1; m < K; ++m)
        if (gap2[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] > sup)
          sup = gap2[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
    tails.push_back(sup / r2);
  }
  for (const Rational& t : tails) rep.tail_sup.push_back(std::sqrt(to_double(t)));
  const Rational first = tails.front();
  const Rational last = tails.back();
  rep.decay_ratio = first == 0 ? 0.0 : std::sqrt(to_double(last / first));
  if (last == 0) {
    rep.cauchy = true;
    rep.note = "tail gaps vanish";
  } else if (first == 0) {
    rep.cauchy = false;
    rep.note = "gaps appear only in the tail";
  } else {
    rep.cauchy = last <= opt.decay * opt.decay * first;
    rep.note = rep.cauchy ? "tail sup decayed by the required factor"
                          : "tail sup stalled across the observed window";
  }
  return rep;
}

}  // namespace codelta
