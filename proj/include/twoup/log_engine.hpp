#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twoup/detail/containers.hpp"
#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup {

// One line of the construction log: Aw means a term of weight w was
// appended at index n, Fw means the exponents of the earlier weight-w term
// a(n) became free for reuse.
struct LogEvent {
  enum class Kind : uint8_t { kAppended, kFreed };

  Kind kind;
  int w;
  uint64_t n;
  TermValue value;

  std::string to_string() const {
    std::string s(kind == Kind::kAppended ? "A" : "F");
    s += std::to_string(w);
    s += kind == Kind::kAppended ? " found a(" : " freed a(";
    s += std::to_string(n);
    s += ") = ";
    s += format_term(value, TermStyle::kBrackets);
    return s;
  }

  // The code symbol (kind + weight) is what atom classification consumes.
  bool same_symbol(Kind k, int ww) const { return kind == k && w == ww; }
};

// An exponent available for reuse, tagged with where it came from.
struct FreeExponent {
  uint64_t exp;
  uint64_t source_index;
  int source_weight;
};

// The set of free exponents.  The construction never has more than three
// free at once; exceeding that falsifies the whole atom decomposition, so
// it is a hard engine error rather than a growable container.
class FreeSet {
 public:
  static constexpr std::size_t kMaxFree = 3;

  std::size_t size() const { return n_; }
  const FreeExponent& operator[](std::size_t i) const { return items_[i]; }

  bool contains(uint64_t exp) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (items_[i].exp == exp) return true;
    return false;
  }

  void add(const FreeExponent& fe) {
    if (contains(fe.exp))
      throw FalsificationError("FreeSet: exponent " + std::to_string(fe.exp) +
                               " freed while already free");
    if (n_ == kMaxFree)
      throw FreeSetOverflow(
          "FreeSet: a fourth exponent (2^" + std::to_string(fe.exp) +
          " from a(" + std::to_string(fe.source_index) +
          ")) would be free at once");
    items_[n_++] = fe;
  }

  // Removes the exponents of t; they must all be present.
  void consume(const TermValue& t) {
    for (uint64_t e : t.exponents()) {
      std::size_t i = 0;
      while (i < n_ && items_[i].exp != e) ++i;
      if (i == n_)
        throw Error("FreeSet: consuming exponent that is not free");
      items_[i] = items_[--n_];
    }
  }

 private:
  std::array<FreeExponent, kMaxFree> items_{};
  std::size_t n_ = 0;
};

// Smallest value formed from a subset of the free exponents (subset size
// >= 2) that is not yet in the sequence; otherwise the next power of 2.
// Size-1 subsets are never candidates: a lone free exponent 2^e already
// occurred as the term 2^e itself.
inline TermValue choose_next(const FreeSet& free, const detail::SeenSet& seen,
                             uint64_t next_pow) {
  std::optional<TermValue> best;
  auto offer = [&](const TermValue& cand) {
    if (!seen.contains(cand) && (!best || cand < *best)) best = cand;
  };
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = i + 1; j < free.size(); ++j)
      offer(TermValue(free[i].exp, free[j].exp));
  if (free.size() == 3)
    offer(TermValue(free[0].exp, free[1].exp, free[2].exp));
  return best ? *best : TermValue(next_pow);
}

// The free-bit construction of A354169.  Produces the terms together with
// the interleaved A/F event log that the atom decomposition is read from.
// Invariants of the construction are checked at every step; a violation
// throws FalsificationError (or FreeSetOverflow) naming the index.
class LogEngine {
 public:
  struct Options {
    bool store_terms = true;
    bool store_events = true;
  };

  LogEngine() : LogEngine(Options{}) {}
  explicit LogEngine(const Options& opt) : opt_(opt) {}

  uint64_t next_index() const { return n_; }
  uint64_t next_power() const { return next_pow_; }
  const FreeSet& free_set() const { return free_; }

  // Produces a(n) for the next n.  Events emitted by this step (one A
  // event, possibly followed by one F event) are in last_events().
  TermValue step() {
    last_events_.clear();
    uint64_t n = n_++;
    TermValue t;
    if (n == 0) {
      t = TermValue();  // a(0) = 0: no event, not part of any atom
    } else if (n <= 2) {
      t = TermValue(next_pow_++);  // a(1) = 1, a(2) = 2
      emit({LogEvent::Kind::kAppended, t.weight(), n, t});
    } else {
      std::size_t free_before = free_.size();
      t = choose_next(free_, seen_, next_pow_);
      if (t.weight() >= 2) {
        free_.consume(t);
      } else {
        if (free_before == 3)
          throw FalsificationError(
              "log: three exponents free at a(" + std::to_string(n) +
              ") but no pair formed a new value");
        ++next_pow_;
      }
      emit({LogEvent::Kind::kAppended, t.weight(), n, t});
    }
    check_invariants(n, t);
    seen_.insert(t);
    if (n >= 1) pending_free_.push_back(t.packed_key());
    if (opt_.store_terms) terms_.push_back(t);
    // Once a(2t) is fixed, later terms no longer need to be perpendicular
    // to a(t), so its exponents come free.  a(1) frees right after a(2).
    if (n >= 2 && n % 2 == 0) free_source(n / 2);
    return t;
  }

  std::span<const LogEvent> last_events() const { return last_events_; }
  const std::vector<TermValue>& terms() const { return terms_; }
  const std::vector<LogEvent>& events() const { return events_; }

  struct GenerateResult {
    std::vector<TermValue> terms;
    std::vector<LogEvent> events;
  };

  // a(0..count-1) plus the full event stream.
  static GenerateResult generate(uint64_t count) {
    if (count == 0) throw Error("log: count must be >= 1");
    LogEngine e;
    e.terms_.reserve(count);
    while (e.n_ < count) e.step();
    return {std::move(e.terms_), std::move(e.events_)};
  }

 private:
  void emit(const LogEvent& ev) {
    last_events_.push_back(ev);
    if (opt_.store_events) events_.push_back(ev);
  }

  void free_source(uint64_t idx) {
    if (idx != next_free_index_)
      throw FalsificationError("log: free schedule out of order at a(" +
                               std::to_string(idx) + ")");
    TermValue v = TermValue::from_packed_key(pending_free_.front());
    pending_free_.pop_front();
    ++next_free_index_;
    for (uint64_t e : v.exponents())
      free_.add({e, idx, v.weight()});
    emit({LogEvent::Kind::kFreed, v.weight(), idx, v});
  }

  void check_invariants(uint64_t n, const TermValue& t) {
    if (!t.is_zero() && t.weight() > 2)
      throw FalsificationError("log: a(" + std::to_string(n) +
                               ") has weight " + std::to_string(t.weight()));
    if (t.weight() == 2) {
      if (n % 2 == 0)
        throw FalsificationError("log: weight-2 term at even index " +
                                 std::to_string(n));
      if (prev_weight_ == 2)
        throw FalsificationError("log: adjacent weight-2 terms at a(" +
                                 std::to_string(n) + ")");
    }
    if (t.weight() == 1) {
      if (w1_run_ == 0) w1_run_start_ = n;
      ++w1_run_;
      // Four weight-1 terms in a row happen only at the very start.
      if (w1_run_ > 3 && w1_run_start_ != 1)
        throw FalsificationError("log: " + std::to_string(w1_run_) +
                                 " weight-1 terms in a row ending at a(" +
                                 std::to_string(n) + ")");
    } else {
      w1_run_ = 0;
    }
    prev_weight_ = t.weight();
  }

  Options opt_;
  uint64_t n_ = 0;
  uint64_t next_pow_ = 0;
  uint64_t next_free_index_ = 1;
  FreeSet free_;
  detail::SeenSet seen_;
  std::deque<uint64_t> pending_free_;  // packed a(next_free_index_ ...)
  std::vector<TermValue> terms_;
  std::vector<LogEvent> events_;
  std::vector<LogEvent> last_events_;
  int prev_weight_ = -1;
  int w1_run_ = 0;
  uint64_t w1_run_start_ = 0;
};

}  // namespace twoup
