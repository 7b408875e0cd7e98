#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "twoup/closed_form.hpp"
#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup {

// Integer-coefficient polynomial with sparse exponent->coefficient storage.
// The index generating functions here are lacunary: their support is thin
// even at degree 2^20, so a map beats a dense array by a wide margin.
class SparsePoly {
 public:
  SparsePoly() = default;

  static SparsePoly from_exponents(std::initializer_list<uint64_t> exps) {
    SparsePoly p;
    for (uint64_t e : exps) p.add(e, 1);
    return p;
  }

  void add(uint64_t exp, int64_t c) {
    if (c == 0) return;
    auto [it, fresh] = coef_.try_emplace(exp, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) coef_.erase(it);
    }
  }

  int64_t coeff(uint64_t exp) const {
    auto it = coef_.find(exp);
    return it == coef_.end() ? 0 : it->second;
  }

  SparsePoly& operator+=(const SparsePoly& o) {
    for (auto [e, c] : o.coef_) add(e, c);
    return *this;
  }

  SparsePoly shifted(uint64_t d) const {  // multiply by x^d
    SparsePoly p;
    for (auto [e, c] : coef_) p.coef_.emplace(e + d, c);
    return p;
  }

  SparsePoly times(const SparsePoly& o) const {
    SparsePoly p;
    for (auto [e1, c1] : coef_)
      for (auto [e2, c2] : o.coef_) p.add(e1 + e2, c1 * c2);
    return p;
  }

  void truncate(uint64_t max_exp) {
    coef_.erase(coef_.upper_bound(max_exp), coef_.end());
  }

  std::vector<uint64_t> support() const {
    std::vector<uint64_t> s;
    s.reserve(coef_.size());
    for (auto [e, c] : coef_) s.push_back(e);
    return s;
  }

  const std::map<uint64_t, int64_t>& terms() const { return coef_; }
  std::size_t term_count() const { return coef_.size(); }

  bool operator==(const SparsePoly&) const = default;

 private:
  std::map<uint64_t, int64_t> coef_;
};

// Weight-2 offsets inside a V W pair (12 terms) and an X U pair (12 terms).
// These are the polynomials P_VW and P_XU of the tau generating function.
inline constexpr uint64_t kVwWeight2Offsets[4] = {0, 4, 6, 10};
inline constexpr uint64_t kXuWeight2Offsets[4] = {0, 4, 6, 8};

// Indices of the weight-2 terms in the start block S.
inline constexpr uint64_t kSWeight2Indices[6] = {5, 9, 13, 15, 19, 21};

// tau(i): the index of the i-th weight-2 term of A (OEIS A354798).
// Computed from the block layout: R(k) holds 2^(k+2) weight-2 terms, at
// fixed offsets within its V W and X U groups.
inline uint64_t tau(uint64_t i) {
  if (i == 0) throw Error("tau: index must be >= 1");
  if (i <= 6) return kSWeight2Indices[i - 1];
  uint64_t k = 1;
  while ((uint64_t{1} << (k + 3)) - 2 < i) ++k;     // through R(k): 2^(k+3)-2
  uint64_t r = i - ((uint64_t{1} << (k + 2)) - 2) - 1;  // 0-based within R(k)
  uint64_t per_half = uint64_t{1} << (k + 1);
  uint64_t half = r / per_half;
  uint64_t h = r % per_half;
  uint64_t half_start = 12 * mu(2 * k) + 1 + half * (uint64_t{6} << k);
  uint64_t vw_pairs = (uint64_t{1} << (k - 1)) - 1;
  if (h < 4 * vw_pairs) return half_start + 12 * (h / 4) + kVwWeight2Offsets[h % 4];
  return half_start + 12 * vw_pairs + kXuWeight2Offsets[h - 4 * vw_pairs];
}

// Number of weight-2 indices <= n.
inline uint64_t count_tau_le(uint64_t n) {
  uint64_t count = 0;
  for (uint64_t s : kSWeight2Indices)
    if (s <= n) ++count;
  if (n <= 24) return count;
  for (uint64_t k = 1;; ++k) {
    uint64_t first = 12 * mu(2 * k) + 1;
    if (first > n) return count;
    uint64_t last = 12 * mu(2 * k + 2);
    if (last <= n) {
      count += uint64_t{1} << (k + 2);
      continue;
    }
    uint64_t vw_pairs = (uint64_t{1} << (k - 1)) - 1;
    uint64_t half_len = uint64_t{6} << k;
    uint64_t r = n - first;  // 0-based inclusive position within the block
    for (uint64_t half = 0; half < 2; ++half) {
      if (r >= half * half_len + half_len - 1) {
        count += uint64_t{1} << (k + 1);
        continue;
      }
      if (r < half * half_len) break;
      uint64_t hr = r - half * half_len;
      if (hr < 12 * vw_pairs) {
        count += 4 * (hr / 12);
        for (uint64_t o : kVwWeight2Offsets)
          if (o <= hr % 12) ++count;
      } else {
        count += 4 * vw_pairs;
        for (uint64_t o : kXuWeight2Offsets)
          if (o <= hr - 12 * vw_pairs) ++count;
      }
      break;
    }
    return count;
  }
}

// sigma(i): the index of the i-th weight-1 term (OEIS A354767); tau and
// sigma partition the positive integers.
inline uint64_t sigma(uint64_t i) {
  if (i == 0) throw Error("sigma: index must be >= 1");
  // Smallest n with n - count_tau_le(n) == i; the count is monotone.
  uint64_t lo = 1, hi = 2 * i + 16;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (mid - count_tau_le(mid) >= i) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// omega(n): the Hamming weight of a(n), n >= 1 (OEIS A355150).
inline int omega(uint64_t n) {
  if (n == 0) throw Error("omega: index must be >= 1");
  return count_tau_le(n) > count_tau_le(n - 1) ? 2 : 1;
}

// Exponents (e, f), e < f, of the i-th weight-2 term 2^e + 2^f
// (OEIS A354773 / A354774).
inline std::pair<uint64_t, uint64_t> weight2_exponents(uint64_t i,
                                                       const ClosedForm& cf) {
  TermValue t = cf.a(tau(i));
  if (t.weight() != 2)
    throw FalsificationError("weight2_exponents: a(tau(" + std::to_string(i) +
                             ")) has weight " + std::to_string(t.weight()));
  return {t.low(), t.high()};
}

// The generating function P(x) = sum_i x^tau(i), expanded through degree N:
//
//   P_S + sum_k x^(12*2^k+1) * (G_k * P_VW + x^(12*(2^(k-1)-1)) * P_XU)
//                            * (1 + x^(6*2^k))
//
// where P_S = x^5+x^9+x^13+x^15+x^19+x^21, P_VW = 1+x^4+x^6+x^10,
// P_XU = 1+x^4+x^6+x^8, and G_k = 1+x^12+...+x^(12*(2^(k-1)-2)) is the
// expanded geometric factor (1-x^(12*(2^(k-1)-1)))/(1-x^12).  Every
// coefficient must come out 0 or 1; anything else is CoefficientAnomaly.
inline SparsePoly gf_tau_coefficients(uint64_t N) {
  if (N == 0) throw Error("gf_tau_coefficients: degree bound must be >= 1");
  SparsePoly p = SparsePoly::from_exponents({5, 9, 13, 15, 19, 21});
  p.truncate(N);
  SparsePoly p_vw = SparsePoly::from_exponents({0, 4, 6, 10});
  SparsePoly p_xu = SparsePoly::from_exponents({0, 4, 6, 8});
  for (uint64_t k = 1;; ++k) {
    uint64_t lead = 12 * (uint64_t{1} << k) + 1;
    if (lead > N) break;
    uint64_t vw_pairs = (uint64_t{1} << (k - 1)) - 1;
    SparsePoly inner;
    for (uint64_t i = 0; i < vw_pairs && lead + 12 * i <= N; ++i)
      inner += p_vw.shifted(12 * i);
    inner += p_xu.shifted(12 * vw_pairs);
    SparsePoly block = inner.shifted(lead);
    block += inner.shifted(lead + (uint64_t{6} << k));
    block.truncate(N);
    p += block;
  }
  for (auto [e, c] : p.terms())
    if (c != 0 && c != 1)
      throw CoefficientAnomaly("gf_tau_coefficients: coefficient " +
                               std::to_string(c) + " at degree " +
                               std::to_string(e));
  return p;
}

}  // namespace twoup
