#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoup/atoms.hpp"
#include "twoup/detail/containers.hpp"
#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup {

// An atom-aligned slice a(s..e) of the sequence.
struct LocalSegment {
  uint64_t start_index = 1;
  std::vector<TermValue> terms;
};

struct LocalDoubleResult {
  uint64_t start_index = 0;  // 2s-1
  std::vector<TermValue> terms;
  std::vector<AtomInstance> atoms;
};

// Replays the construction over the output range a(2s-1 .. 2e), using the
// input terms as the freeing schedule: input term n is freed right after
// output term 2n.  The output must decompose into whole atoms, otherwise
// FragmentError is thrown (lone U or X inputs do exactly that).
//
// `seed_free` is the pair of free exponents entering the output range; it
// becomes the output's first term.  Pass std::nullopt for a segment that
// starts at a(1) (then the replay starts with no free exponents, like the
// sequence itself).  `first_fresh_exponent` is the exponent of the first
// new power of 2 the output will use; it is context the input terms cannot
// supply, since the powers between a(e) and a(2s-1) are not in the window.
//
// Novelty of a candidate pair is decided locally.  A pair is stale if its
// value is an input term or an already-produced output term.  For
// mid-sequence windows one more rule applies, the ancestor guarantee: the
// high exponent of an earlier-freed weight-2 term combined with the low
// exponent of a later-freed one duplicates an existing term, while the two
// high exponents combine to something new.  Segments from the first two
// blocks (S and R(1)) predate that guarantee and are not valid mid-sequence
// inputs; feed them as part of a base-anchored window instead.
inline LocalDoubleResult local_double(
    const LocalSegment& input,
    std::optional<std::pair<uint64_t, uint64_t>> seed_free,
    uint64_t first_fresh_exponent) {
  if (input.terms.empty()) throw Error("local_double: empty input");
  if (input.start_index % 2 == 0)
    throw Error("local_double: input must start at an odd (atom-aligned) index");
  bool base_anchored = !seed_free.has_value();
  if (base_anchored && input.start_index != 1)
    throw Error("local_double: a seed pair is required unless the segment starts at a(1)");

  struct Free {
    uint64_t exp;
    int source_weight;
    bool is_high;       // was the larger exponent of a weight-2 source
    uint64_t freed_seq; // order in which the source was freed
  };
  std::vector<Free> free;
  auto add_free = [&](const Free& f) {
    if (free.size() == 3)
      throw FreeSetOverflow("local_double: four exponents free at once");
    free.push_back(f);
  };

  detail::FlatKeySet seen(input.terms.size() * 4);
  if (!base_anchored)
    for (const TermValue& t : input.terms)
      if (!t.is_zero()) seen.insert(t.packed_key());

  if (seed_free) {
    add_free({seed_free->first, 0, false, 0});
    add_free({seed_free->second, 0, false, 0});
  }

  uint64_t s = input.start_index;
  uint64_t e = s + input.terms.size() - 1;
  uint64_t out_first = base_anchored ? 1 : 2 * s - 1;
  uint64_t z = first_fresh_exponent;
  uint64_t freed_seq = 1;

  LocalDoubleResult result;
  result.start_index = out_first;
  AtomMatcher matcher;
  auto feed = [&](const LogEvent& ev) {
    if (auto atom = matcher.feed(ev)) result.atoms.push_back(std::move(*atom));
  };

  auto pair_is_new = [&](const Free& a, const Free& b) {
    TermValue v(a.exp, b.exp);
    if (seen.contains(v.packed_key())) return false;
    if (base_anchored) return true;
    const Free& early = a.freed_seq < b.freed_seq ? a : b;
    const Free& late = a.freed_seq < b.freed_seq ? b : a;
    bool ancestor_shape = early.source_weight == 2 && late.source_weight == 2 &&
                          early.freed_seq != late.freed_seq && early.is_high &&
                          !late.is_high;
    return !ancestor_shape;
  };

  for (uint64_t m = out_first; m <= 2 * e; ++m) {
    // Smallest unseen pair of free exponents, else the next power of 2.
    std::optional<TermValue> best;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < free.size(); ++i)
      for (std::size_t j = i + 1; j < free.size(); ++j) {
        TermValue cand(free[i].exp, free[j].exp);
        if (pair_is_new(free[i], free[j]) && (!best || cand < *best)) {
          best = cand;
          bi = i;
          bj = j;
        }
      }
    TermValue term;
    if (best) {
      term = *best;
      if (term.high() >= z)
        throw Error("local_double: free pair at or above the power frontier");
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(bj));
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(bi));
    } else {
      if (free.size() == 3)
        throw FalsificationError(
            "local_double: three free exponents but no new pair at output " +
            std::to_string(m));
      term = TermValue(z++);
    }
    seen.insert(term.packed_key());
    result.terms.push_back(term);
    feed({LogEvent::Kind::kAppended, term.weight(), m, term});

    if (m % 2 == 0) {
      uint64_t src = m / 2;  // in [s, e] throughout the loop
      const TermValue& freed = input.terms[src - s];
      auto exps = freed.exponents();
      for (std::size_t i = 0; i < exps.size(); ++i)
        add_free({exps[i], freed.weight(),
                  freed.weight() == 2 && i + 1 == exps.size(), freed_seq});
      ++freed_seq;
      feed({LogEvent::Kind::kFreed, freed.weight(), src, freed});
    }
  }

  if (matcher.mid_atom()) {
    std::string shape;
    for (const AtomInstance& a : result.atoms) {
      shape += atom_letter(a.type);
      shape += ' ';
    }
    throw FragmentError(
        "local_double: output is not a sequence of whole atoms (got " + shape +
        "+ a fragment of " + std::to_string(matcher.pending_term_count()) +
        " terms); the input was not a legal segment",
        result.atoms.size(), matcher.pending_term_count());
  }
  return result;
}

}  // namespace twoup
