#pragma once

#include <cstdint>
#include <vector>

#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup::detail {

// Open-addressed set of nonzero 64-bit keys (0 marks an empty slot).
// The generators insert tens of millions of packed weight-2 values on the
// deep verification runs, where node-based containers cost too much memory.
class FlatKeySet {
 public:
  explicit FlatKeySet(std::size_t initial_capacity = 1024) {
    std::size_t cap = 16;
    while (cap < initial_capacity * 2) cap <<= 1;
    slots_.assign(cap, 0);
  }

  bool contains(uint64_t key) const {
    if (key == 0) throw Error("FlatKeySet: zero key");
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = mix(key) & mask;; i = (i + 1) & mask) {
      if (slots_[i] == key) return true;
      if (slots_[i] == 0) return false;
    }
  }

  // Returns false if the key was already present.
  bool insert(uint64_t key) {
    if (key == 0) throw Error("FlatKeySet: zero key");
    if ((size_ + 1) * 10 >= slots_.size() * 7) grow();
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = mix(key) & mask;; i = (i + 1) & mask) {
      if (slots_[i] == key) return false;
      if (slots_[i] == 0) {
        slots_[i] = key;
        ++size_;
        return true;
      }
    }
  }

  std::size_t size() const { return size_; }

 private:
  static uint64_t mix(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
  }

  void grow() {
    std::vector<uint64_t> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, 0);
    std::size_t mask = slots_.size() - 1;
    for (uint64_t key : old) {
      if (key == 0) continue;
      std::size_t i = mix(key) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = key;
    }
  }

  std::vector<uint64_t> slots_;
  std::size_t size_ = 0;
};

// Open-addressed map from nonzero 64-bit keys to 64-bit payloads.
class FlatKeyMap {
 public:
  explicit FlatKeyMap(std::size_t initial_capacity = 1024) {
    std::size_t cap = 16;
    while (cap < initial_capacity * 2) cap <<= 1;
    keys_.assign(cap, 0);
    vals_.assign(cap, 0);
  }

  // Returns nullptr if absent.
  const uint64_t* find(uint64_t key) const {
    if (key == 0) throw Error("FlatKeyMap: zero key");
    std::size_t mask = keys_.size() - 1;
    for (std::size_t i = FlatKeySet_mix(key) & mask;; i = (i + 1) & mask) {
      if (keys_[i] == key) return &vals_[i];
      if (keys_[i] == 0) return nullptr;
    }
  }

  // Keeps the first value if the key is already present.
  void insert(uint64_t key, uint64_t value) {
    if (key == 0) throw Error("FlatKeyMap: zero key");
    if ((size_ + 1) * 10 >= keys_.size() * 7) grow();
    std::size_t mask = keys_.size() - 1;
    for (std::size_t i = FlatKeySet_mix(key) & mask;; i = (i + 1) & mask) {
      if (keys_[i] == key) return;
      if (keys_[i] == 0) {
        keys_[i] = key;
        vals_[i] = value;
        ++size_;
        return;
      }
    }
  }

  std::size_t size() const { return size_; }

 private:
  static uint64_t FlatKeySet_mix(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
  }

  void grow() {
    std::vector<uint64_t> ok, ov;
    ok.swap(keys_);
    ov.swap(vals_);
    keys_.assign(ok.size() * 2, 0);
    vals_.assign(ok.size() * 2, 0);
    std::size_t mask = keys_.size() - 1;
    for (std::size_t s = 0; s < ok.size(); ++s) {
      if (ok[s] == 0) continue;
      std::size_t i = FlatKeySet_mix(ok[s]) & mask;
      while (keys_[i] != 0) i = (i + 1) & mask;
      keys_[i] = ok[s];
      vals_[i] = ov[s];
    }
  }

  std::vector<uint64_t> keys_;
  std::vector<uint64_t> vals_;
  std::size_t size_ = 0;
};

// Growable bitset over exponent positions.
class DynamicBitset {
 public:
  bool test(uint64_t pos) const {
    uint64_t w = pos >> 6;
    if (w >= words_.size()) return false;
    return (words_[w] >> (pos & 63)) & 1;
  }

  void set(uint64_t pos) {
    uint64_t w = pos >> 6;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= uint64_t{1} << (pos & 63);
  }

  void reset(uint64_t pos) {
    uint64_t w = pos >> 6;
    if (w < words_.size()) words_[w] &= ~(uint64_t{1} << (pos & 63));
  }

  const std::vector<uint64_t>& words() const { return words_; }

  bool operator==(const DynamicBitset& o) const {
    const auto &a = words_, &b = o.words_;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      uint64_t x = i < a.size() ? a[i] : 0;
      uint64_t y = i < b.size() ? b[i] : 0;
      if (x != y) return false;
    }
    return true;
  }

 private:
  std::vector<uint64_t> words_;
};

// Membership index over produced values, keyed on the exponent-list
// encoding so huge terms cost one word.  Weight-1 values get a bitset,
// weight-2 values the flat set; weight-3 values are never produced as
// terms, so they are never members.
class SeenSet {
 public:
  bool contains(const TermValue& t) const {
    switch (t.weight()) {
      case 0:
        return has_zero_;
      case 1:
        return powers_.test(t.low());
      case 2:
        return pairs_.contains(t.packed_key());
      default:
        return false;
    }
  }

  void insert(const TermValue& t) {
    switch (t.weight()) {
      case 0:
        has_zero_ = true;
        return;
      case 1:
        powers_.set(t.low());
        return;
      case 2:
        pairs_.insert(t.packed_key());
        return;
      default:
        throw Error("SeenSet: refusing to store a weight-3 value");
    }
  }

  std::size_t pair_count() const { return pairs_.size(); }

 private:
  bool has_zero_ = false;
  DynamicBitset powers_;
  FlatKeySet pairs_;
};

}  // namespace twoup::detail
