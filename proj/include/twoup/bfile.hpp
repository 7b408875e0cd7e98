#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "twoup/errors.hpp"
#include "twoup/term.hpp"

namespace twoup {

// One "n value" pair of an OEIS b-file.  The value is kept as text: terms
// of this sequence run to thousands of digits, and b-files for related
// streams hold plain integers that are not sequence terms at all.
struct BFileEntry {
  uint64_t n;
  std::string value_text;
};

inline TermValue bfile_value(const BFileEntry& e) {
  return parse_term(e.value_text);
}

// Parses b-file text: one "n value" pair per line, '#'-prefixed comment
// lines and blank lines ignored.  Indices must be strictly increasing.
inline std::vector<BFileEntry> parse_bfile(std::istream& in) {
  std::vector<BFileEntry> entries;
  std::string line;
  uint64_t lineno = 0;
  std::optional<uint64_t> prev_n;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::size_t sep = line.find_first_of(" \t", start);
    if (sep == std::string::npos)
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": expected 'n value'");
    std::size_t vstart = line.find_first_not_of(" \t", sep);
    if (vstart == std::string::npos)
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": missing value");
    std::size_t vend = line.find_last_not_of(" \t\r");
    uint64_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoull(line.substr(start, sep - start), &used);
      if (used != sep - start) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": bad index");
    }
    if (prev_n && n <= *prev_n)
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": indices not strictly increasing");
    prev_n = n;
    std::string value = line.substr(vstart, vend - vstart + 1);
    for (char c : value)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("b-file line " + std::to_string(lineno) +
                         ": value is not a nonnegative integer");
    entries.push_back({n, std::move(value)});
  }
  return entries;
}

// Writes "n value\n" lines, values in decimal.
inline void write_bfile(std::ostream& out, const std::vector<BFileEntry>& entries) {
  for (const BFileEntry& e : entries) out << e.n << ' ' << e.value_text << '\n';
}

struct BFileCheckResult {
  uint64_t compared = 0;
  std::optional<uint64_t> first_mismatch;
  std::string message;

  bool match() const { return !first_mismatch.has_value(); }
};

// Compares every listed pair against an engine.  An empty file passes
// vacuously; the result reports the first mismatching index, if any.
inline BFileCheckResult compare_bfile(
    const std::vector<BFileEntry>& entries,
    const std::function<TermValue(uint64_t)>& engine) {
  BFileCheckResult r;
  for (const BFileEntry& e : entries) {
    TermValue listed;
    bool parseable = true;
    try {
      listed = bfile_value(e);
    } catch (const ParseError&) {
      parseable = false;  // not a sum of <= 3 powers of 2: cannot be a term
    }
    TermValue got = engine(e.n);
    if (!parseable || !(got == listed)) {
      r.first_mismatch = e.n;
      r.message = "mismatch at n=" + std::to_string(e.n) + ": b-file has " +
                  e.value_text + ", engine computes " +
                  format_term(got, TermStyle::kBrackets);
      return r;
    }
    ++r.compared;
  }
  r.message = "all " + std::to_string(r.compared) + " terms agree";
  return r;
}

}  // namespace twoup
