#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twoup/errors.hpp"

namespace twoup {

// A sequence value stored as the exponents of its binary expansion, in
// strictly increasing order.  Every term of A354169 has at most two
// exponents; a third slot exists only because candidate values of weight 3
// show up (and get rejected) during generation.  The empty set is 0.
//
// Values are never materialized as integers: exponents routinely exceed
// word size, so ordering and perpendicularity work on the exponent lists.
class TermValue {
 public:
  static constexpr int kMaxWeight = 3;

  TermValue() = default;  // zero

  explicit TermValue(uint64_t e) : len_(1) { exps_[0] = e; }

  TermValue(uint64_t e, uint64_t f) : len_(2) {
    if (e == f) throw Error("TermValue: duplicate exponent");
    exps_[0] = std::min(e, f);
    exps_[1] = std::max(e, f);
  }

  TermValue(uint64_t e, uint64_t f, uint64_t g) : len_(3) {
    exps_ = {e, f, g};
    std::sort(exps_.begin(), exps_.begin() + 3);
    if (exps_[0] == exps_[1] || exps_[1] == exps_[2])
      throw Error("TermValue: duplicate exponent");
  }

  static TermValue from_exponents(std::span<const uint64_t> exps) {
    if (exps.size() > static_cast<std::size_t>(kMaxWeight))
      throw Error("TermValue: more than three exponents");
    TermValue t;
    for (uint64_t e : exps) {
      if (t.len_ > 0 && e <= t.exps_[t.len_ - 1])
        throw Error("TermValue: exponents must be strictly increasing");
      t.exps_[t.len_++] = e;
    }
    return t;
  }

  int weight() const { return len_; }
  bool is_zero() const { return len_ == 0; }

  std::span<const uint64_t> exponents() const { return {exps_.data(), len_}; }

  uint64_t exponent(int i) const { return exps_[static_cast<std::size_t>(i)]; }
  uint64_t low() const { return exps_[0]; }
  uint64_t high() const { return exps_[len_ - 1]; }

  bool operator==(const TermValue& o) const {
    return len_ == o.len_ &&
           std::equal(exps_.begin(), exps_.begin() + len_, o.exps_.begin());
  }

  // Numeric order, comparing exponents from the top down.  A larger top
  // exponent decides; on ties the side with exponents left over is larger.
  std::strong_ordering operator<=>(const TermValue& o) const {
    int i = len_, j = o.len_;
    while (i > 0 && j > 0) {
      if (exps_[static_cast<std::size_t>(i - 1)] !=
          o.exps_[static_cast<std::size_t>(j - 1)])
        return exps_[static_cast<std::size_t>(i - 1)] <=>
               o.exps_[static_cast<std::size_t>(j - 1)];
      --i;
      --j;
    }
    return i <=> j;
  }

  // Packs a value of weight <= 2 into one word (exponents must be < 2^32-1).
  // Used as a hash/ring key by the generators; 0 packs to 0.
  uint64_t packed_key() const {
    if (len_ > 2 || (len_ > 0 && exps_[len_ - 1] >= 0xFFFFFFFFull))
      throw Error("TermValue: value not packable");
    uint64_t k = 0;
    if (len_ >= 1) k = exps_[0] + 1;
    if (len_ == 2) k |= (exps_[1] + 1) << 32;
    else k <<= 32;
    return k;
  }

  static TermValue from_packed_key(uint64_t k) {
    uint64_t hi = k >> 32, lo = k & 0xFFFFFFFFull;
    if (k == 0) return TermValue();
    if (lo == 0) return TermValue(hi - 1);
    return TermValue(lo - 1, hi - 1);
  }

 private:
  std::array<uint64_t, 3> exps_{};
  std::size_t len_ = 0;
};

// True iff the binary expansions of u and v share no 1-bit position,
// i.e. their exponent sets are disjoint.
inline bool perp(const TermValue& u, const TermValue& v) {
  auto a = u.exponents(), b = v.exponents();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    (a[i] < b[j]) ? ++i : ++j;
  }
  return true;
}

inline int weight(const TermValue& t) { return t.weight(); }

// The m-th number of the form 2^k or 3*2^k (OEIS A029744), 1-based:
// 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, ...
// All block and atom index arithmetic runs through this function.
inline uint64_t mu(uint64_t m) {
  if (m == 0) throw Error("mu: index must be >= 1");
  if (m == 1) return 1;
  if (m > 126) throw Error("mu: result would overflow 64 bits");
  return (m % 2 == 0) ? (uint64_t{1} << (m / 2))
                      : (uint64_t{3} << ((m - 3) / 2));
}

enum class TermStyle { kBrackets, kDecimal };

namespace detail {

inline boost::multiprecision::cpp_int to_big_int(const TermValue& t) {
  boost::multiprecision::cpp_int v = 0;
  for (uint64_t e : t.exponents())
    boost::multiprecision::bit_set(v, static_cast<unsigned>(e));
  return v;
}

}  // namespace detail

// Largest exponent we will render in decimal by default.  2^(2^20) has about
// 315k digits; anything bigger is almost certainly a mistake to print.
inline constexpr uint64_t kDefaultDecimalExponentLimit = uint64_t{1} << 20;

inline std::string format_term(const TermValue& t, TermStyle style,
                               uint64_t decimal_exponent_limit =
                                   kDefaultDecimalExponentLimit) {
  if (style == TermStyle::kBrackets) {
    if (t.is_zero()) return "0";
    std::string s = "[";
    for (std::size_t i = 0; i < static_cast<std::size_t>(t.weight()); ++i) {
      if (i) s += ", ";
      s += std::to_string(t.exponent(static_cast<int>(i)));
    }
    s += "]";
    return s;
  }
  if (t.is_zero()) return "0";
  if (t.high() > decimal_exponent_limit)
    throw Error("format_term: refusing decimal rendering of 2^" +
                std::to_string(t.high()) + " (limit is 2^" +
                std::to_string(decimal_exponent_limit) +
                "; use bracket form instead)");
  return detail::to_big_int(t).str();
}

// Accepts the bracket form ("[2, 3]", "[]"), or a decimal numeral whose
// binary expansion has at most three 1-bits.
inline TermValue parse_term(std::string_view text) {
  auto fail = [&](const char* why) {
    throw ParseError(std::string("parse_term: ") + why + ": '" +
                     std::string(text) + "'");
  };
  // Trim.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) fail("empty input");

  if (text.front() == '[') {
    if (text.back() != ']') fail("missing closing bracket");
    text = text.substr(1, text.size() - 2);
    std::vector<uint64_t> exps;
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() &&
             (std::isspace(static_cast<unsigned char>(text[pos])) ||
              text[pos] == ','))
        ++pos;
      if (pos >= text.size()) break;
      uint64_t e = 0;
      auto [p, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), e);
      if (ec != std::errc{}) fail("bad exponent");
      pos = static_cast<std::size_t>(p - text.data());
      exps.push_back(e);
    }
    if (exps.size() > 3) fail("more than three exponents");
    for (std::size_t i = 1; i < exps.size(); ++i)
      if (exps[i] <= exps[i - 1]) fail("exponents not strictly increasing");
    return TermValue::from_exponents(exps);
  }

  // Decimal numeral.
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c))) fail("not a number");
  boost::multiprecision::cpp_int v;
  try {
    v = boost::multiprecision::cpp_int(std::string(text));
  } catch (const std::exception&) {
    fail("bad decimal numeral");
  }
  std::vector<uint64_t> exps;
  while (v != 0) {
    if (exps.size() == 3) fail("binary weight exceeds 3");
    unsigned e = boost::multiprecision::lsb(v);
    exps.push_back(e);
    boost::multiprecision::bit_unset(v, e);
  }
  return TermValue::from_exponents(exps);
}

}  // namespace twoup
