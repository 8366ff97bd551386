#pragma once

#include <functional>
#include <vector>

namespace codelta {

// Enumerates every partition of {0,...,n-1} into unordered nonempty blocks.
// Blocks are emitted sorted by their smallest element; n = 0 yields the empty
// partition. Uses restricted growth strings, so the order is deterministic.
inline void for_each_set_partition(int n, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  std::vector<std::vector<int>> blocks;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      fn(blocks);
      return;
    }
    // recursion grows and shrinks the block list, so iterate a snapshot count
    const std::size_t existing = blocks.size();
    for (std::size_t bi = 0; bi < existing; ++bi) {
      blocks[bi].push_back(i);
      rec(i + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({i});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

// Enumerates sub-multisets of {0,...,n-1} by index set; fn receives the
// chosen index list and its complement.
inline void for_each_subset(int n, const std::function<void(const std::vector<int>&, const std::vector<int>&)>& fn) {
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> in, out;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i))
        in.push_back(i);
      else
        out.push_back(i);
    }
    fn(in, out);
  }
}

}  // namespace codelta
