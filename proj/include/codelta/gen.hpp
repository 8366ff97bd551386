#pragma once

#include <codelta/poly.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace codelta {

// Deterministic random source. Draws go through explicit modular reduction
// rather than std distributions, whose output is implementation defined; the
// same seed must produce the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }

  long long int_in(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool flip() { return (gen_() & 1u) != 0; }

  // Rational in [-bound, bound] with denominator at most max_den.
  Rational rational(long long bound = 10, long long max_den = 8) {
    long long den = int_in(1, max_den);
    long long num = int_in(-bound * den, bound * den);
    return Rational(Integer(num), Integer(den));
  }

  Rational nonzero_rational(long long bound = 10, long long max_den = 8) {
    while (true) {
      Rational r = rational(bound, max_den);
      if (r != 0) return r;
    }
  }

  Vector vector(const Space& space, long long bound = 10, long long max_den = 8) {
    std::vector<Rational> c;
    c.reserve(static_cast<std::size_t>(space.flat_dim()));
    for (int i = 0; i < space.flat_dim(); ++i) c.push_back(rational(bound, max_den));
    return Vector(space, std::move(c));
  }

  Vector nonzero_vector(const Space& space, long long bound = 10, long long max_den = 8) {
    while (true) {
      Vector v = vector(space, bound, max_den);
      if (!v.is_zero() || space.flat_dim() == 0) return v;
    }
  }

  // Sparse polynomial map of total degree at most max_deg.
  PolyMap polymap(const Space& domain, const Space& codomain, unsigned max_deg, int terms_per_output = 4) {
    PolyMap p(domain, codomain);
    int n = domain.flat_dim();
    for (int out = 0; out < codomain.flat_dim(); ++out) {
      for (int t = 0; t < terms_per_output; ++t) {
        std::vector<unsigned> exps(static_cast<std::size_t>(n), 0);
        unsigned budget = static_cast<unsigned>(below(max_deg + 1));
        for (unsigned d = 0; d < budget && n > 0; ++d) exps[static_cast<std::size_t>(below(static_cast<std::uint64_t>(n)))] += 1;
        p.add_term(out, std::move(exps), rational());
      }
    }
    return p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace codelta
