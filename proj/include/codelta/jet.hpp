#pragma once

#include <codelta/partitions.hpp>
#include <codelta/poly.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace codelta {

// Entry of one symmetric derivative tensor: output coordinate plus the sorted
// list of differentiated variables (repetitions allowed).
struct JetKey {
  int out = 0;
  std::vector<int> idx;

  bool operator<(const JetKey& o) const {
    if (out != o.out) return out < o.out;
    return idx < o.idx;
  }
  bool operator==(const JetKey& o) const { return out == o.out && idx == o.idx; }
};

// Finite jet of a polynomial map: value plus raw derivative tensors up to a
// fixed order. Tensors store plain iterated partials; no factorial scaling is
// folded in.
struct Jet {
  Space domain;
  Space codomain;
  Vector base;
  int order;
  // tensors[j] holds the order-j entries, j = 0 using an empty index list.
  std::vector<std::map<JetKey, Rational>> tensors;

  Jet(Space dom, Space cod, Vector basepoint, int k)
      : domain(std::move(dom)),
        codomain(std::move(cod)),
        base(std::move(basepoint)),
        order(k),
        tensors(static_cast<std::size_t>(k + 1)) {
    if (k < 0) throw std::invalid_argument("negative jet order");
  }

  Rational entry(int j, const JetKey& key) const {
    const auto& t = tensors.at(static_cast<std::size_t>(j));
    auto it = t.find(key);
    return it == t.end() ? Rational(0) : it->second;
  }

  Vector value() const {
    Vector v = Vector::zero(codomain);
    for (const auto& [k, c] : tensors[0]) v[k.out] = c;
    return v;
  }

  bool operator==(const Jet& o) const {
    return domain == o.domain && codomain == o.codomain && base == o.base && order == o.order && tensors == o.tensors;
  }
};

namespace detail {

// Sorted index tuples i_1 <= ... <= i_j drawn from {0..n-1}.
inline void for_each_sorted_tuple(int n, int j, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx;
  std::function<void(int)> rec = [&](int lo) {
    if (static_cast<int>(idx.size()) == j) {
      fn(idx);
      return;
    }
    for (int i = lo; i < n; ++i) {
      idx.push_back(i);
      rec(i);
      idx.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

// Jet of p at x to the given order, via iterated symbolic partials. Partial
// maps are shared along tuple prefixes, which keeps the work linear in the
// number of tensor entries.
inline Jet jet_at(const PolyMap& p, const Vector& x, int order) {
  if (x.space().flat_dim() != p.vars()) throw std::invalid_argument("jet basepoint dimension mismatch");
  Jet jet(p.domain(), p.codomain(), x, order);
  int n = p.vars();
  // derivative maps for the current sorted tuple, built incrementally
  std::function<void(const PolyMap&, std::vector<int>&, int)> rec = [&](const PolyMap& q, std::vector<int>& idx,
                                                                        int lo) {
    int j = static_cast<int>(idx.size());
    Vector v = q.eval(x);
    for (int out = 0; out < p.outputs(); ++out) {
      if (v[out] != 0) jet.tensors[static_cast<std::size_t>(j)][JetKey{out, idx}] = v[out];
    }
    if (j == order) return;
    for (int i = lo; i < n; ++i) {
      idx.push_back(i);
      PolyMap qi = q.partial(i);
      rec(qi, idx, i);
      idx.pop_back();
    }
  };
  std::vector<int> idx;
  rec(p, idx, 0);
  return jet;
}

// Composite jet from the jets of the two stages, by the multilinear chain
// rule: the order-j entry sums over set partitions of the j derivative slots,
// each block differentiating the inner map, the outer map taking one slot per
// block.
inline Jet jet_compose(const Jet& gj, const Jet& fj) {
  if (fj.order != gj.order) throw std::invalid_argument("jet orders differ");
  if (gj.domain.flat_dim() != fj.codomain.flat_dim()) throw std::invalid_argument("jet chain arity mismatch");
  if (gj.base != Vector(gj.domain, fj.value().coords()))
    throw std::invalid_argument("outer jet is not based at the inner value");
  int order = fj.order;
  int n = fj.domain.flat_dim();
  int mid = fj.codomain.flat_dim();
  int m = gj.codomain.flat_dim();
  Jet out(fj.domain, gj.codomain, fj.base, order);
  for (const auto& [k0, c0] : gj.tensors[0]) out.tensors[0][JetKey{k0.out, {}}] = c0;
  for (int j = 1; j <= order; ++j) {
    detail::for_each_sorted_tuple(n, j, [&](const std::vector<int>& slots) {
      std::vector<Rational> acc(static_cast<std::size_t>(m), Rational(0));
      for_each_set_partition(j, [&](const std::vector<std::vector<int>>& blocks) {
        int r = static_cast<int>(blocks.size());
        // inner derivative of each block, per mid coordinate
        std::vector<std::vector<Rational>> block_der(static_cast<std::size_t>(r),
                                                     std::vector<Rational>(static_cast<std::size_t>(mid)));
        for (int b = 0; b < r; ++b) {
          std::vector<int> bidx;
          for (int s : blocks[static_cast<std::size_t>(b)]) bidx.push_back(slots[static_cast<std::size_t>(s)]);
          std::sort(bidx.begin(), bidx.end());
          for (int c = 0; c < mid; ++c)
            block_der[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] =
                fj.entry(static_cast<int>(bidx.size()), JetKey{c, bidx});
        }
        // sum over assignments of mid coordinates to blocks
        std::vector<int> choice(static_cast<std::size_t>(r), 0);
        while (true) {
          Rational prod = 1;
          for (int b = 0; b < r && prod != 0; ++b)
            prod *= block_der[static_cast<std::size_t>(b)][static_cast<std::size_t>(choice[static_cast<std::size_t>(b)])];
          if (prod != 0) {
            std::vector<int> mididx(choice.begin(), choice.end());
            std::sort(mididx.begin(), mididx.end());
            for (int o = 0; o < m; ++o) {
              Rational g = gj.entry(r, JetKey{o, mididx});
              if (g != 0) acc[static_cast<std::size_t>(o)] += g * prod;
            }
          }
          int b = r - 1;
          while (b >= 0 && choice[static_cast<std::size_t>(b)] == mid - 1) {
            choice[static_cast<std::size_t>(b)] = 0;
            --b;
          }
          if (b < 0) break;
          ++choice[static_cast<std::size_t>(b)];
        }
      });
      for (int o = 0; o < m; ++o) {
        if (acc[static_cast<std::size_t>(o)] != 0)
          out.tensors[static_cast<std::size_t>(j)][JetKey{o, slots}] = acc[static_cast<std::size_t>(o)];
      }
    });
  }
  return out;
}

// Polynomial in the displacement h with p(x + h) = (jet_to_poly(jet))(h),
// exact when the jet order covers the degree. Inverts jet_at on polynomials.
inline PolyMap jet_to_poly(const Jet& jet) {
  PolyMap r(jet.domain, jet.codomain);
  int n = jet.domain.flat_dim();
  for (int j = 0; j <= jet.order; ++j) {
    for (const auto& [k, c] : jet.tensors[static_cast<std::size_t>(j)]) {
      std::vector<unsigned> exps(static_cast<std::size_t>(n), 0);
      for (int i : k.idx) exps[static_cast<std::size_t>(i)] += 1;
      Integer denom = 1;
      unsigned run = 1;
      for (std::size_t t = 1; t < k.idx.size(); ++t) {
        if (k.idx[t] == k.idx[t - 1])
          ++run;
        else
          run = 1;
        denom *= run;
      }
      r.add_term(k.out, std::move(exps), c / Rational(denom));
    }
  }
  return r;
}

}  // namespace codelta
