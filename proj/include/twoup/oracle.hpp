#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "twoup/detail/containers.hpp"
#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup {

// Smallest value whose bits avoid `mask` and which is not in `seen`.
//
// Walks a counter c = 0, 1, 2, ... and deposits the bits of c into the
// complement positions of the mask in ascending order; that visits exactly
// the mask-avoiding values in increasing numeric order.  The first power of
// 2 above everything produced so far always avoids the mask and is unseen,
// so the walk terminates; it skips at most one candidate per seen value.
inline TermValue smallest_avoiding(const detail::DynamicBitset& mask,
                                   const detail::SeenSet& seen) {
  std::vector<uint64_t> free_pos;
  auto ensure_free_pos = [&](std::size_t count) {
    uint64_t p = free_pos.empty() ? 0 : free_pos.back() + 1;
    while (free_pos.size() < count) {
      while (mask.test(p)) ++p;
      free_pos.push_back(p++);
    }
  };
  for (uint64_t c = 0;; ++c) {
    if (std::popcount(c) > TermValue::kMaxWeight)
      throw FalsificationError(
          "smallest_avoiding: every value of weight <= 3 below the frontier "
          "is taken; this contradicts the atom structure");
    std::array<uint64_t, 3> exps;
    std::size_t w = 0;
    for (uint64_t bits = c; bits != 0; bits &= bits - 1) {
      auto b = static_cast<std::size_t>(std::countr_zero(bits));
      ensure_free_pos(b + 1);
      exps[w++] = free_pos[b];
    }
    TermValue cand = TermValue::from_exponents({exps.data(), w});
    if (!seen.contains(cand)) return cand;
  }
}

// Generates A354169 straight from its definition: a(n) is the smallest
// nonnegative integer not yet in the sequence that is perpendicular to
// a(ceil(n/2)), ..., a(n-1).  Slow and trusted; the other engines are
// validated against it.
class OracleEngine {
 public:
  OracleEngine() = default;

  uint64_t next_index() const { return terms_.size(); }

  TermValue step() {
    uint64_t n = terms_.size();
    // Slide the window to [ceil(n/2), n-1].  Window terms are pairwise
    // perpendicular, so removing a term's bits is exact set subtraction.
    if (n >= 1)
      for (uint64_t e : terms_[n - 1].exponents()) mask_.set(e);
    if (n & 1)
      for (uint64_t e : terms_[(n - 1) / 2].exponents()) mask_.reset(e);

    TermValue t = smallest_avoiding(mask_, seen_);
    if (!t.is_zero() && t.weight() > 2)
      throw FalsificationError("oracle: a(" + std::to_string(n) +
                               ") has weight " + std::to_string(t.weight()));
    if (t.weight() == 1) {
      if (t.low() != power_frontier_)
        throw FalsificationError(
            "oracle: powers of 2 out of order at a(" + std::to_string(n) +
            "): got 2^" + std::to_string(t.low()) + ", expected 2^" +
            std::to_string(power_frontier_));
      ++power_frontier_;
    }
    seen_.insert(t);
    terms_.push_back(t);
    if (n > 0 && (n & 1023) == 0) check_window_mask(n);
    return t;
  }

  const std::vector<TermValue>& terms() const { return terms_; }

  static std::vector<TermValue> generate(uint64_t count) {
    if (count == 0) throw Error("oracle: count must be >= 1");
    OracleEngine e;
    e.terms_.reserve(count);
    while (e.terms_.size() < count) e.step();
    return std::move(e.terms_);
  }

 private:
  // The incremental mask must equal the recomputed union for the window
  // that produced a(n).  Spot-checked every 1024 steps.
  void check_window_mask(uint64_t n) const {
    detail::DynamicBitset fresh;
    for (uint64_t j = (n + 1) / 2; j < n; ++j)
      for (uint64_t e : terms_[j].exponents()) fresh.set(e);
    if (!(fresh == mask_))
      throw FalsificationError(
          "oracle: incremental window mask diverged at n=" +
          std::to_string(n));
  }

  std::vector<TermValue> terms_;
  detail::DynamicBitset mask_;
  detail::SeenSet seen_;
  uint64_t power_frontier_ = 0;
};

}  // namespace twoup
