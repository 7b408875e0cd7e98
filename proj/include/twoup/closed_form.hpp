#pragma once

#include <cstdint>
#include <list>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "twoup/atoms.hpp"
#include "twoup/errors.hpp"
#include "twoup/log_engine.hpp"
#include "twoup/term.hpp"

namespace twoup {

struct AtomLocation {
  AtomId id;
  uint64_t start;   // index of the atom's first term (odd)
  uint64_t offset;  // 0-based position of the queried index in the atom
};

// O(log n) evaluation of a(n): locate the atom containing n from the block
// layout, then read the term off the atom's spectrum.  The irregular start
// of the sequence (through a(564)) is generated once by the log engine and
// frozen; the spectra apply from X(10) at a(565) on.
//
// Only W atoms are recursive: their fifth term borrows the low exponent of
// an earlier weight-2 term a(m), m = (start+3)/2, which is resolved through
// a_closed itself and memoized.  Every resolution is checked: a(m) must
// have weight 2, its top exponent must equal the predicted value, and when
// it is locatable it must sit at offset 4 of its own atom.
class ClosedForm {
 public:
  static constexpr uint64_t kPrefixLast = 564;
  static constexpr uint64_t kMaxIndex = uint64_t{1} << 60;

  explicit ClosedForm(std::size_t ancestor_cache_capacity = 1024)
      : cache_capacity_(ancestor_cache_capacity) {
    prefix_ = LogEngine::generate(kPrefixLast + 1).terms;
  }

  std::span<const TermValue> prefix() const { return prefix_; }

  TermValue a(uint64_t n) const { return eval(n, 0); }

  AtomLocation locate(uint64_t n) const {
    if (n <= kPrefixLast)
      throw Error("locate: a(" + std::to_string(n) +
                  ") is in the irregular prefix (use the prefix table)");
    if (n > kMaxIndex) throw Error("locate: index too large");
    uint64_t k = 1;
    while (12 * mu(2 * k + 2) < n) ++k;
    uint64_t off = n - 12 * mu(2 * k) - 1;
    uint64_t half_len = uint64_t{6} << k;
    uint64_t half = off / half_len;
    uint64_t h = off % half_len;
    uint64_t vw_pairs = (uint64_t{1} << (k - 1)) - 1;
    AtomId id;
    uint64_t offset;
    if (h < 12 * vw_pairs) {
      auto pair = static_cast<int64_t>(h / 12);
      uint64_t r = h % 12;
      auto kk = 2 * static_cast<int64_t>(k) - 4 + static_cast<int64_t>(half);
      id = r < 6 ? id_V(kk, pair) : id_W(kk, pair);
      offset = r < 6 ? r : r - 6;
    } else {
      uint64_t h2 = h - 12 * vw_pairs;
      auto m = 2 * static_cast<int64_t>(k) + static_cast<int64_t>(half);
      id = h2 < 8 ? id_X(m) : id_U(m);
      offset = h2 < 8 ? h2 : h2 - 8;
    }
    return {id, n - offset, offset};
  }

  static uint64_t atom_start(const AtomId& id) {
    validate_id(id);
    auto k = static_cast<uint64_t>(id.k);
    auto j = static_cast<uint64_t>(id.j);
    switch (id.type) {
      case AtomType::kT: return 1;
      case AtomType::kU: return id.k == 0 ? 5 : 12 * mu(k + 1) - 3;
      case AtomType::kX: return 12 * mu(k + 1) - 11;
      case AtomType::kV: return id.k == -1 ? 9 : 12 * mu(k + 4) + 12 * j + 1;
      case AtomType::kW: return id.k == -1 ? 15 : 12 * mu(k + 4) + 12 * j + 7;
    }
    throw InvalidAtomId("atom_start: bad type");
  }

  struct Spectrum {
    AtomId id;
    uint64_t start;
    std::vector<TermValue> terms;
    TermValue next_term;  // first term of the following atom
  };

  Spectrum atom_spectrum(const AtomId& id) const {
    validate_id(id);
    Spectrum s{id, atom_start(id), {}, {}};
    int len = atom_length(id.type);
    s.terms.reserve(static_cast<std::size_t>(len));
    for (int o = 0; o < len; ++o)
      s.terms.push_back(term_at(id, static_cast<uint64_t>(o), 0));
    s.next_term = next_term_at(id);
    return s;
  }

 private:
  bool formula_applies(const AtomId& id) const {
    switch (id.type) {
      case AtomType::kT: return false;
      case AtomType::kU: return id.k >= 1;
      case AtomType::kX: return id.k >= 10;
      case AtomType::kV:
      case AtomType::kW: return id.k >= 0;
    }
    return false;
  }

  TermValue eval(uint64_t n, int depth) const {
    if (depth > 80)
      throw RecursionFault("a_closed: ancestor recursion too deep at a(" +
                           std::to_string(n) + ")");
    if (n <= kPrefixLast) return prefix_[n];
    AtomLocation loc = locate(n);
    return term_at(loc.id, loc.offset, depth);
  }

  TermValue term_at(const AtomId& id, uint64_t o, int depth) const {
    if (!formula_applies(id)) {
      uint64_t start = atom_start(id);
      return prefix_.at(start + o);
    }
    auto k = static_cast<uint64_t>(id.k);
    auto j = static_cast<uint64_t>(id.j);
    switch (id.type) {
      case AtomType::kU: {
        // First term: the small exponent is 2*mu(k+1)-1 early on and locks
        // to 11 (k even) / 15 (k odd) from U(4); the big one is 2*mu(k+3)-1.
        if (o == 0) {
          uint64_t cap = (k % 2 == 0) ? 11 : 15;
          uint64_t small = std::min(2 * mu(k + 1) - 1, cap);
          return {small, 2 * mu(k + 3) - 1};
        }
        return TermValue(8 * mu(k + 1) - 1 + (o - 1));
      }
      case AtomType::kX: {
        uint64_t x = mu(k - 1) - 1;
        switch (o) {
          case 0: return {4 * x + 2, 8 * x + 5};
          case 1: return TermValue(16 * x + 10);
          case 2: return TermValue(16 * x + 11);
          case 3: return TermValue(16 * x + 12);
          case 4: return {x, 8 * x + 6};
          case 5: return TermValue(16 * x + 13);
          case 6: return {2 * x + 1, 4 * x + 3};
          case 7: return TermValue(16 * x + 14);
        }
        break;
      }
      case AtomType::kV: {
        if (id.j == 0) {
          uint64_t x = 2 * mu(k + 4);
          switch (o) {
            case 0: return {2 * x, 2 * x + 1};
            case 1: return TermValue(4 * x + 2);
            case 2: return TermValue(4 * x + 3);
            case 3: return TermValue(4 * x + 4);
            case 4: return {x, 2 * x + 2};
            case 5: return TermValue(4 * x + 5);
          }
          break;
        }
        uint64_t x = mu(k + 4) + j;
        switch (o) {
          case 0: return {2 * x, 4 * x + 1};
          case 1: return TermValue(8 * x + 2);
          case 2: return TermValue(8 * x + 3);
          case 3: return TermValue(8 * x + 4);
          case 4: return {x, 4 * x + 2};
          case 5: return TermValue(8 * x + 5);
        }
        break;
      }
      case AtomType::kW: {
        uint64_t x = 2 * mu(k + 4) + 2 * j + 2;
        switch (o) {
          case 0: return {x - 1, 2 * x - 1};
          case 1: return TermValue(4 * x - 2);
          case 2: return TermValue(4 * x - 1);
          case 3: return TermValue(4 * x);
          case 4: return {resolve_w_low(id, x, depth), 2 * x};
          case 5: return TermValue(4 * x + 1);
        }
        break;
      }
      case AtomType::kT:
        break;
    }
    throw InvalidAtomId("term_at: offset out of range for " + id.str());
  }

  // The low exponent of W(k,j)'s fifth term comes from the weight-2 term
  // a(m), m = (start+3)/2, which lives at offset 4 of an earlier V, W or X
  // atom.  Its top exponent must equal this atom's x.
  uint64_t resolve_w_low(const AtomId& id, uint64_t x, int depth) const {
    uint64_t n = atom_start(id);
    uint64_t m = (n + 3) / 2;
    TermValue anc = cached_eval(m, depth + 1);
    if (anc.weight() != 2)
      throw RecursionFault("W ancestor a(" + std::to_string(m) +
                           ") has weight " + std::to_string(anc.weight()) +
                           ", expected 2 (for " + id.str() + ")");
    if (anc.high() != x)
      throw RecursionFault("W ancestor a(" + std::to_string(m) +
                           ") top exponent " + std::to_string(anc.high()) +
                           " != predicted " + std::to_string(x) + " (for " +
                           id.str() + ")");
    if (m > kPrefixLast) {
      AtomLocation loc = locate(m);
      if (loc.offset != 4)
        throw RecursionFault("W ancestor a(" + std::to_string(m) +
                             ") is not the fifth term of " + loc.id.str());
    }
    return anc.low();
  }

  TermValue next_term_at(const AtomId& id) const {
    if (!formula_applies(id)) {
      uint64_t past_end = atom_start(id) + static_cast<uint64_t>(atom_length(id.type));
      return prefix_.at(past_end);
    }
    auto k = static_cast<uint64_t>(id.k);
    auto j = static_cast<uint64_t>(id.j);
    switch (id.type) {
      case AtomType::kU:
        return {2 * mu(k + 3), 2 * mu(k + 3) + 1};
      case AtomType::kX: {
        uint64_t x = mu(k - 1) - 1;
        return {(k % 2 == 0) ? uint64_t{11} : uint64_t{15}, 8 * x + 7};
      }
      case AtomType::kV: {
        if (id.j == 0) {
          uint64_t x = 2 * mu(k + 4);
          return {x + 1, 2 * x + 3};
        }
        uint64_t x = mu(k + 4) + j;
        return {2 * x + 1, 4 * x + 3};
      }
      case AtomType::kW: {
        uint64_t x = 2 * mu(k + 4) + 2 * j + 2;
        return {x, 2 * x + 1};
      }
      case AtomType::kT:
        break;
    }
    throw InvalidAtomId("next_term_at: " + id.str());
  }

  // Bounded LRU over ancestor resolutions.  Deep W chains revisit few
  // indices, so a small cache removes nearly all repeated work.
  TermValue cached_eval(uint64_t m, int depth) const {
    {
      std::lock_guard<std::mutex> lock(cache_mu_);
      auto it = cache_.find(m);
      if (it != cache_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.second);
        return it->second.first;
      }
    }
    TermValue v = eval(m, depth);
    if (cache_capacity_ > 0) {
      std::lock_guard<std::mutex> lock(cache_mu_);
      if (cache_.find(m) == cache_.end()) {
        lru_.push_front(m);
        cache_.emplace(m, std::make_pair(v, lru_.begin()));
        if (cache_.size() > cache_capacity_) {
          cache_.erase(lru_.back());
          lru_.pop_back();
        }
      }
    }
    return v;
  }

  std::vector<TermValue> prefix_;
  std::size_t cache_capacity_;
  mutable std::mutex cache_mu_;
  mutable std::list<uint64_t> lru_;
  mutable std::unordered_map<uint64_t, std::pair<TermValue, std::list<uint64_t>::iterator>> cache_;
};

}  // namespace twoup
