#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twoup/detail/containers.hpp"
#include "twoup/errors.hpp"
#include "twoup/log_engine.hpp"
#include "twoup/term.hpp"

namespace twoup {

enum class AtomType : uint8_t { kT, kU, kV, kW, kX };

inline char atom_letter(AtomType t) { return "TUVWX"[static_cast<int>(t)]; }

struct CodeSymbol {
  LogEvent::Kind kind;
  int w;
};

// The five atom codes.  Classification runs on these, not on weight
// patterns: V, W and a U followed by more terms all share the weight
// pattern 2,1,1,1,2,1, so only the freed weights tell them apart.
inline std::span<const CodeSymbol> atom_code(AtomType t) {
  using K = LogEvent::Kind;
  static constexpr CodeSymbol kT[] = {{K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 1},
                                      {K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 1}};
  static constexpr CodeSymbol kU[] = {{K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 1},
                                      {K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 1}};
  static constexpr CodeSymbol kV[] = {{K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 2},
                                      {K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 1},
                                      {K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 1}};
  static constexpr CodeSymbol kW[] = {{K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 1},
                                      {K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 2},
                                      {K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 1}};
  static constexpr CodeSymbol kX[] = {{K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 2},
                                      {K::kAppended, 1}, {K::kAppended, 1}, {K::kFreed, 1},
                                      {K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 2},
                                      {K::kAppended, 2}, {K::kAppended, 1}, {K::kFreed, 1}};
  switch (t) {
    case AtomType::kT: return kT;
    case AtomType::kU: return kU;
    case AtomType::kV: return kV;
    case AtomType::kW: return kW;
    case AtomType::kX: return kX;
  }
  throw Error("atom_code: bad type");
}

inline int atom_length(AtomType t) {
  switch (t) {
    case AtomType::kT:
    case AtomType::kU: return 4;
    case AtomType::kV:
    case AtomType::kW: return 6;
    case AtomType::kX: return 8;
  }
  throw Error("atom_length: bad type");
}

inline std::span<const int> atom_weights(AtomType t) {
  static constexpr int k4t[] = {1, 1, 1, 1};
  static constexpr int k4u[] = {2, 1, 1, 1};
  static constexpr int k6[] = {2, 1, 1, 1, 2, 1};
  static constexpr int k8[] = {2, 1, 1, 1, 2, 1, 2, 1};
  switch (t) {
    case AtomType::kT: return k4t;
    case AtomType::kU: return k4u;
    case AtomType::kV:
    case AtomType::kW: return k6;
    case AtomType::kX: return k8;
  }
  throw Error("atom_weights: bad type");
}

// Symbolic atom name: T, U(k), X(k), V(k,j), W(k,j).  The single V and W
// in the start block carry k = -1 and no j.
struct AtomId {
  AtomType type = AtomType::kT;
  int64_t k = 0;
  int64_t j = 0;

  bool operator==(const AtomId&) const = default;

  std::string str() const {
    switch (type) {
      case AtomType::kT: return "T";
      case AtomType::kU: return "U(" + std::to_string(k) + ")";
      case AtomType::kX: return "X(" + std::to_string(k) + ")";
      case AtomType::kV:
      case AtomType::kW: {
        std::string s(1, atom_letter(type));
        s += "(" + std::to_string(k);
        if (k >= 0) s += "," + std::to_string(j);
        s += ")";
        return s;
      }
    }
    throw Error("AtomId: bad type");
  }
};

inline AtomId id_T() { return {AtomType::kT, 0, 0}; }
inline AtomId id_U(int64_t k) { return {AtomType::kU, k, 0}; }
inline AtomId id_X(int64_t k) { return {AtomType::kX, k, 0}; }
inline AtomId id_V(int64_t k, int64_t j = 0) { return {AtomType::kV, k, j}; }
inline AtomId id_W(int64_t k, int64_t j = 0) { return {AtomType::kW, k, j}; }

// Largest j for V(k,j)/W(k,j), k >= 0:  2^(floor(k/2)+1) - 2.
inline int64_t vw_max_j(int64_t k) {
  if (k < 0) throw InvalidAtomId("vw_max_j: k must be >= 0");
  return (int64_t{1} << (k / 2 + 1)) - 2;
}

inline void validate_id(const AtomId& id) {
  switch (id.type) {
    case AtomType::kT:
      return;
    case AtomType::kU:
      if (id.k < 0) throw InvalidAtomId("U(k): k must be >= 0");
      return;
    case AtomType::kX:
      if (id.k < 2) throw InvalidAtomId("X(k): k must be >= 2");
      return;
    case AtomType::kV:
    case AtomType::kW:
      if (id.k < -1) throw InvalidAtomId(id.str() + ": k must be >= -1");
      if (id.k >= 0 && (id.j < 0 || id.j > vw_max_j(id.k)))
        throw InvalidAtomId(id.str() + ": j out of range (max " +
                            std::to_string(vw_max_j(id.k)) + ")");
      return;
  }
  throw InvalidAtomId("bad atom type");
}

// A classified atom occurrence: its type, the index of its first term
// (always odd), its terms, and — once numbering ran — its symbolic id.
struct AtomInstance {
  AtomType type;
  uint64_t start = 0;
  std::vector<TermValue> terms;
  std::optional<AtomId> id;
};

// Streaming matcher from log events to atoms.  The five codes are
// prefix-free, so matching is a deterministic walk: feed events in order
// and an atom pops out whenever a full code has been consumed.
class AtomMatcher {
 public:
  std::optional<AtomInstance> feed(const LogEvent& ev) {
    if (consumed_ == 0) {
      active_ = 0b11111;
      pending_terms_.clear();
      pending_events_.clear();
      start_ = ev.n;
    }
    unsigned survivors = 0;
    for (int t = 0; t < 5; ++t) {
      if (!(active_ & (1u << t))) continue;
      auto code = atom_code(static_cast<AtomType>(t));
      if (consumed_ < code.size() && ev.same_symbol(code[consumed_].kind, code[consumed_].w))
        survivors |= 1u << t;
    }
    if (survivors == 0)
      throw CodeMismatch("no atom code matches event " + std::to_string(consumed_) +
                         " of the current atom (at log line '" + ev.to_string() +
                         "')");
    active_ = survivors;
    ++consumed_;
    pending_events_.push_back(ev);
    if (ev.kind == LogEvent::Kind::kAppended) pending_terms_.push_back(ev.value);

    // Complete when the unique survivor's code is fully consumed.
    if ((survivors & (survivors - 1)) == 0) {
      auto type = static_cast<AtomType>(std::countr_zero(survivors));
      if (consumed_ == atom_code(type).size()) {
        AtomInstance a{type, start_, std::move(pending_terms_), std::nullopt};
        pending_terms_.clear();
        pending_events_.clear();
        consumed_ = 0;
        if (a.start % 2 == 0)
          throw CodeMismatch("atom starting at even index " +
                             std::to_string(a.start));
        return a;
      }
    }
    return std::nullopt;
  }

  bool mid_atom() const { return consumed_ > 0; }
  std::span<const LogEvent> pending_events() const { return pending_events_; }
  std::size_t pending_term_count() const { return pending_terms_.size(); }

 private:
  unsigned active_ = 0;
  std::size_t consumed_ = 0;
  uint64_t start_ = 0;
  std::vector<TermValue> pending_terms_;
  std::vector<LogEvent> pending_events_;
};

struct AtomizeResult {
  std::vector<AtomInstance> atoms;
  std::vector<LogEvent> fragment;  // trailing events of an incomplete atom
};

// Splits an event stream (starting at the events of a(1)) into atoms.
inline AtomizeResult atomize(std::span<const LogEvent> events) {
  AtomizeResult r;
  AtomMatcher m;
  for (const LogEvent& ev : events)
    if (auto atom = m.feed(ev)) r.atoms.push_back(std::move(*atom));
  r.fragment.assign(m.pending_events().begin(), m.pending_events().end());
  return r;
}

// Yields atom ids in sequence order: the start block S = T, U(0), V(-1),
// W(-1), U(1), then R(1), R(2), ... where R(k) is
// (V W)^(2^(k-1)-1) X U (V W)^(2^(k-1)-1) X U with the numbering
// V(2k-4+half, j), X(2k+half), U(2k+half) per half.
class AtomIdStream {
 public:
  AtomId next() {
    if (block_ == 0) {
      static const AtomId s[] = {id_T(), id_U(0), id_V(-1), id_W(-1), id_U(1)};
      AtomId id = s[pos_++];
      if (pos_ == 5) advance_block();
      return id;
    }
    uint64_t k = block_;
    uint64_t half_atoms = uint64_t{1} << k;  // 2^k atoms per half
    uint64_t half = pos_ / half_atoms;
    uint64_t q = pos_ % half_atoms;
    ++pos_;
    if (pos_ == 2 * half_atoms) advance_block();
    int64_t kk = 2 * static_cast<int64_t>(k) - 4 + static_cast<int64_t>(half);
    if (q < half_atoms - 2)
      return (q % 2 == 0) ? id_V(kk, static_cast<int64_t>(q / 2))
                          : id_W(kk, static_cast<int64_t>(q / 2));
    int64_t m = 2 * static_cast<int64_t>(k) + static_cast<int64_t>(half);
    return q == half_atoms - 2 ? id_X(m) : id_U(m);
  }

  // Block the *next* id belongs to: 0 for S, else k of R(k).
  uint64_t current_block() const { return block_; }

 private:
  void advance_block() {
    ++block_;
    pos_ = 0;
  }
  uint64_t block_ = 0;
  uint64_t pos_ = 0;
};

// First and one-past-last sequence index of block S (k = 0) or R(k).
struct BlockBounds {
  uint64_t first;
  uint64_t last;  // inclusive
};

inline BlockBounds block_bounds(uint64_t k) {
  if (k == 0) return {1, 24};
  return {12 * mu(2 * k) + 1, 12 * mu(2 * k + 2)};
}

// S R(1) ... R(k) as a word over atom ids.
inline std::vector<AtomId> expected_word(uint64_t k) {
  if (k == 0) throw Error("expected_word: k must be >= 1");
  std::vector<AtomId> w;
  AtomIdStream s;
  while (s.current_block() <= k) w.push_back(s.next());
  return w;
}

// Fills ids in sequence order, checking the observed types against the
// expected word and each atom's start against the running index.
inline void assign_ids(std::vector<AtomInstance>& atoms) {
  AtomIdStream s;
  uint64_t index = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    AtomId want = s.next();
    if (atoms[i].type != want.type)
      throw StructureMismatch("atom " + std::to_string(i) + " at a(" +
                              std::to_string(atoms[i].start) + "): expected " +
                              want.str() + ", observed type " +
                              std::string(1, atom_letter(atoms[i].type)));
    if (atoms[i].start != index)
      throw StructureMismatch("atom " + want.str() + " starts at a(" +
                              std::to_string(atoms[i].start) + "), expected a(" +
                              std::to_string(index) + ")");
    atoms[i].id = want;
    index += static_cast<uint64_t>(atoms[i].terms.size());
  }
}

struct VerifyReport {
  uint64_t atoms_checked = 0;
  uint64_t ancestor_checks = 0;
  uint64_t blocks_checked = 0;
  std::vector<std::string> failures;

  bool pass() const { return failures.empty(); }

  std::string summary() const {
    std::string s = pass() ? "PASS" : "FAIL";
    s += ": " + std::to_string(atoms_checked) + " atoms, " +
         std::to_string(blocks_checked) + " blocks, " +
         std::to_string(ancestor_checks) + " ancestor checks";
    if (!pass()) s += ", " + std::to_string(failures.size()) + " failure(s)";
    return s;
  }
};

// Checks (a) that the atom type word equals S R(1) ... R(depth_k), with the
// block boundary arithmetic, and (b) the ancestor property for every
// consecutive X U pair from R(2) on: writing the last six terms of the pair
// as [t,u],[y] (from X) and [v,w],[y+1],[y+2],[y+3] (from U) with t<u, v<w,
// u<w, some earlier term must equal {u,v}, while {u,w} must not occur
// anywhere up to the end of the pair.  Violations are reported, not thrown:
// at scale, a falsification is a finding.
inline VerifyReport verify_structure(std::span<const AtomInstance> atoms,
                                     uint64_t depth_k) {
  VerifyReport rep;
  auto fail = [&](std::string msg) {
    if (rep.failures.size() < 100) rep.failures.push_back(std::move(msg));
  };

  // First-occurrence index of every value in the covered range.
  detail::FlatKeyMap first_index(1 << 12);
  {
    uint64_t idx = 1;
    for (const AtomInstance& a : atoms)
      for (const TermValue& t : a.terms) first_index.insert(t.packed_key(), idx++);
  }

  AtomIdStream stream;
  uint64_t index = 1;
  std::size_t i = 0;
  std::optional<AtomInstance> prev_x;  // pending X of a potential X U pair

  while (stream.current_block() <= depth_k) {
    uint64_t block = stream.current_block();
    AtomId want = stream.next();
    if (i >= atoms.size()) {
      fail("atoms exhausted before " + want.str() + " (depth " +
           std::to_string(depth_k) + " needs more input)");
      return rep;
    }
    const AtomInstance& a = atoms[i++];
    ++rep.atoms_checked;
    if (a.type != want.type) {
      fail("at a(" + std::to_string(a.start) + "): expected " + want.str() +
           ", observed type " + std::string(1, atom_letter(a.type)));
      return rep;  // alignment is gone; stop rather than cascade
    }
    if (a.start != index || a.start % 2 == 0)
      fail(want.str() + " starts at a(" + std::to_string(a.start) +
           "), expected odd index a(" + std::to_string(index) + ")");
    BlockBounds b = block_bounds(block);
    if (a.start == b.first && block > 0) ++rep.blocks_checked;
    if (a.start < b.first || a.start + a.terms.size() - 1 > b.last)
      fail(want.str() + " leaves block bounds [" + std::to_string(b.first) +
           ", " + std::to_string(b.last) + "]");
    index += a.terms.size();

    if (a.type == AtomType::kX) {
      prev_x = a;
      continue;
    }
    if (a.type == AtomType::kU && prev_x && want.k >= 4) {
      // Last six terms of the X U pair.
      const TermValue& tu = prev_x->terms[6];
      const TermValue& y0 = prev_x->terms[7];
      const TermValue& vw = a.terms[0];
      ++rep.ancestor_checks;
      uint64_t p = prev_x->start + 6;
      if (tu.weight() != 2 || vw.weight() != 2 || y0.weight() != 1) {
        fail("X U pair at a(" + std::to_string(p) + "): unexpected weights");
      } else {
        uint64_t t = tu.low(), u = tu.high();
        uint64_t v = vw.low(), w = vw.high();
        uint64_t y = y0.low();
        if (!(t < u && v < w && u < w))
          fail("X U pair at a(" + std::to_string(p) +
               "): exponent ordering t<u, v<w, u<w violated");
        for (int d = 1; d <= 3; ++d)
          if (!(a.terms[d].weight() == 1 && a.terms[d].low() == y + static_cast<uint64_t>(d)))
            fail("X U pair at a(" + std::to_string(p) + "): power run broken at a(" +
                 std::to_string(p + 2 + static_cast<uint64_t>(d)) + ")");
        const uint64_t* anc = first_index.find(TermValue(u, v).packed_key());
        if (!anc || *anc >= p)
          fail("X U pair at a(" + std::to_string(p) + "): ancestor " +
               format_term(TermValue(u, v), TermStyle::kBrackets) + " not found earlier");
        const uint64_t* uw = first_index.find(TermValue(u, w).packed_key());
        if (uw && *uw <= p + 5)
          fail("X U pair at a(" + std::to_string(p) + "): " +
               format_term(TermValue(u, w), TermStyle::kBrackets) +
               " already seen at a(" + std::to_string(*uw) + ")");
      }
    }
    prev_x.reset();
  }
  return rep;
}

}  // namespace twoup
