// Command-line surface for the A354169 toolkit: generation, point queries,
// atom reports, verification campaigns, b-file comparison, generating
// functions, and plot-data export.
//
// Exit codes: 0 success, 1 falsification or mismatch found, 2 usage/IO error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "twoup/atoms.hpp"
#include "twoup/bfile.hpp"
#include "twoup/closed_form.hpp"
#include "twoup/local_double.hpp"
#include "twoup/log_engine.hpp"
#include "twoup/oracle.hpp"
#include "twoup/sequences.hpp"
#include "twoup/term.hpp"

namespace {

using namespace twoup;

constexpr uint64_t kOracleCeiling = 100000;      // oracle exists to be trusted, not fast
constexpr uint64_t kLogCeiling = uint64_t{1} << 26;

struct OutputTarget {
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  std::ofstream file;
};

OutputTarget open_output(const std::string& path) {
  OutputTarget t;
  if (!path.empty()) {
    t.file.open(path);
    if (!t.file) throw Error("cannot open output file '" + path + "'");
  }
  return t;
}

std::string render(const TermValue& t, const std::string& format, uint64_t n,
                   uint64_t decimal_limit) {
  if (format == "brackets") return format_term(t, TermStyle::kBrackets);
  if (format == "decimal") return format_term(t, TermStyle::kDecimal, decimal_limit);
  if (format == "json-lines") {
    std::string s = "{\"n\": " + std::to_string(n) + ", \"exponents\": [";
    auto exps = t.exponents();
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(exps[i]);
    }
    return s + "]}";
  }
  throw Error("unknown format '" + format + "'");
}

std::vector<TermValue> generate_terms(const std::string& engine, uint64_t count) {
  if (engine == "oracle") {
    if (count > kOracleCeiling)
      throw Error("oracle engine is capped at " + std::to_string(kOracleCeiling) +
                  " terms; use --engine log or closed");
    return OracleEngine::generate(count);
  }
  if (engine == "log") {
    if (count > kLogCeiling)
      throw Error("log engine is capped at " + std::to_string(kLogCeiling) +
                  " terms; use --engine closed");
    return LogEngine::generate(count).terms;
  }
  if (engine == "closed") {
    ClosedForm cf;
    std::vector<TermValue> terms;
    terms.reserve(count);
    for (uint64_t n = 0; n < count; ++n) terms.push_back(cf.a(n));
    return terms;
  }
  throw Error("unknown engine '" + engine + "'");
}

double log10_of_term(const TermValue& t) {
  if (t.is_zero()) throw Error("log10 of 0");
  static const double kLog102 = std::log10(2.0);
  double v = static_cast<double>(t.high()) * kLog102;
  if (t.weight() == 2)
    v += std::log10(1.0 + std::exp2(static_cast<double>(t.low()) -
                                    static_cast<double>(t.high())));
  return v;
}

int cmd_term(uint64_t n, const std::string& engine, const std::string& format,
             uint64_t decimal_limit) {
  TermValue t;
  if (engine == "closed") {
    t = ClosedForm().a(n);
  } else {
    auto terms = generate_terms(engine, n + 1);
    t = terms[n];
  }
  std::cout << render(t, format, n, decimal_limit) << "\n";
  return 0;
}

int cmd_gen(uint64_t count, const std::string& engine, const std::string& format,
            const std::string& out_path, uint64_t decimal_limit) {
  auto terms = generate_terms(engine, count);
  auto out = open_output(out_path);
  std::ostream& os = out.stream();
  for (uint64_t n = 0; n < count; ++n) {
    if (format == "bfile")
      os << n << ' ' << format_term(terms[n], TermStyle::kDecimal, decimal_limit) << "\n";
    else
      os << render(terms[n], format, n, decimal_limit) << "\n";
  }
  return 0;
}

int cmd_atoms(uint64_t count, const std::string& out_path) {
  auto gen = LogEngine::generate(count);
  auto ar = atomize(gen.events);
  assign_ids(ar.atoms);
  auto out = open_output(out_path);
  std::ostream& os = out.stream();
  for (const AtomInstance& a : ar.atoms) {
    os << "a(" << a.start << ".." << a.start + a.terms.size() - 1 << ")\t"
       << a.id->str() << "\t";
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
      if (i) os << ' ';
      os << format_term(a.terms[i], TermStyle::kBrackets);
    }
    os << "\n";
  }
  if (!ar.fragment.empty())
    os << "# trailing fragment: " << ar.fragment.size() << " events\n";
  return 0;
}

int cmd_verify(uint64_t nmax, uint64_t oracle_nmax, int64_t depth_opt, bool full,
               int64_t inject) {
  int failures = 0;
  auto report = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << ": " << what << "\n";
    if (!ok) ++failures;
  };

  if (full) nmax = std::max(nmax, uint64_t{1} << 25);
  oracle_nmax = std::min(oracle_nmax, nmax);

  // Oracle vs log on the shared prefix.
  {
    auto oracle = OracleEngine::generate(oracle_nmax);
    LogEngine log;
    uint64_t bad = 0;
    for (uint64_t n = 0; n < oracle_nmax; ++n)
      if (!(log.step() == oracle[n]) && ++bad == 1)
        std::cerr << "oracle/log disagree first at n=" << n << "\n";
    report(bad == 0, "oracle vs log engine, n < " + std::to_string(oracle_nmax));
  }

  // Log vs closed, streaming, with the structure checks riding along.
  ClosedForm cf;
  LogEngine log(LogEngine::Options{.store_terms = false, .store_events = false});
  AtomMatcher matcher;
  std::vector<AtomInstance> atoms;
  const uint64_t structure_nmax = std::min(nmax, uint64_t{1} << 22);
  uint64_t bad = 0;
  for (uint64_t n = 0; n < nmax; ++n) {
    TermValue v = log.step();
    if (static_cast<int64_t>(n) == inject) v = TermValue(n % 60);  // negative control
    if (!(cf.a(n) == v) && ++bad == 1)
      std::cerr << "log/closed disagree first at n=" << n << "\n";
    if (n < structure_nmax)
      for (const LogEvent& ev : log.last_events())
        if (auto a = matcher.feed(ev)) atoms.push_back(std::move(*a));
  }
  report(bad == 0, "log vs closed engine, n < " + std::to_string(nmax));

  uint64_t deepest = 0;
  while (12 * mu(2 * (deepest + 1) + 2) <= structure_nmax) ++deepest;
  uint64_t depth = depth_opt >= 0 ? std::min<uint64_t>(static_cast<uint64_t>(depth_opt), deepest)
                                  : deepest;
  if (depth >= 1) {
    auto rep = verify_structure(atoms, depth);
    for (const auto& f : rep.failures) std::cerr << f << "\n";
    report(rep.pass(), "word structure to R(" + std::to_string(depth) + "), " +
                           std::to_string(rep.ancestor_checks) + " ancestor checks");
  } else {
    try {
      std::vector<AtomInstance> copy = atoms;
      assign_ids(copy);
      report(true, "atom prefix matches expected word (" +
                       std::to_string(copy.size()) + " atoms)");
    } catch (const FalsificationError& e) {
      std::cerr << e.what() << "\n";
      report(false, "atom prefix matches expected word");
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_bfile_check(const std::string& path, const std::string& engine) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open b-file '" + path + "'");
  auto entries = parse_bfile(in);
  if (entries.empty()) {
    std::cout << "PASS: empty b-file (vacuous)\n";
    return 0;
  }
  BFileCheckResult r;
  if (engine == "closed") {
    ClosedForm cf;
    r = compare_bfile(entries, [&](uint64_t n) { return cf.a(n); });
  } else {
    auto terms = generate_terms(engine, entries.back().n + 1);
    r = compare_bfile(entries, [&](uint64_t n) { return terms[n]; });
  }
  std::cout << (r.match() ? "PASS: " : "FAIL: ") << r.message << "\n";
  return r.match() ? 0 : 1;
}

int cmd_gf(uint64_t degree, bool check, const std::string& stream, uint64_t count,
           const std::string& bfile_path, const std::string& out_path) {
  auto out = open_output(out_path);
  std::ostream& os = out.stream();

  if (stream.empty()) {
    SparsePoly p = gf_tau_coefficients(degree);
    uint64_t i = 1;
    bool ok = true;
    for (uint64_t e : p.support()) {
      os << i << ' ' << e << "\n";
      if (check && tau(i) != e) ok = false;
      ++i;
    }
    if (check) {
      // Independent route: scan the log engine for weight-2 indices.
      auto gen = LogEngine::generate(degree + 1);
      std::vector<uint64_t> scan;
      for (uint64_t n = 1; n <= degree; ++n)
        if (gen.terms[n].weight() == 2) scan.push_back(n);
      ok = ok && scan == p.support();
      std::cout << (ok ? "PASS" : "FAIL")
                << ": generating function vs engine weight-2 indices through degree "
                << degree << "\n";
      return ok ? 0 : 1;
    }
    return 0;
  }

  ClosedForm cf;
  auto stream_value = [&](uint64_t i) -> uint64_t {
    if (stream == "tau") return tau(i);
    if (stream == "sigma") return sigma(i);
    if (stream == "omega") return static_cast<uint64_t>(omega(i));
    if (stream == "e") return weight2_exponents(i, cf).first;
    if (stream == "f") return weight2_exponents(i, cf).second;
    throw Error("unknown stream '" + stream + "'");
  };
  for (uint64_t i = 1; i <= count; ++i) os << i << ' ' << stream_value(i) << "\n";
  if (!bfile_path.empty()) {
    std::ifstream in(bfile_path);
    if (!in) throw Error("cannot open b-file '" + bfile_path + "'");
    auto entries = parse_bfile(in);
    uint64_t compared = 0;
    for (const BFileEntry& e : entries) {
      if (e.n == 0) continue;
      if (e.value_text != std::to_string(stream_value(e.n))) {
        std::cout << "FAIL: stream " << stream << " differs from b-file at i=" << e.n
                  << " (b-file " << e.value_text << ", engine "
                  << stream_value(e.n) << ")\n";
        return 1;
      }
      ++compared;
    }
    std::cout << "PASS: stream " << stream << " matches b-file on " << compared
              << " entries\n";
  }
  return 0;
}

int cmd_plot_data(uint64_t nmax, const std::string& out_path) {
  ClosedForm cf;
  auto out = open_output(out_path);
  std::ostream& os = out.stream();
  os.precision(10);
  for (uint64_t n = 1; n <= nmax; ++n)
    os << n << '\t' << log10_of_term(cf.a(n)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computation and verification toolkit for the binary two-up sequence (OEIS A354169)"};
  app.require_subcommand(1);

  std::string engine = "closed", format = "brackets", out_path, path, stream;
  uint64_t n = 0, count = 96, nmax = uint64_t{1} << 20, oracle_nmax = 10000;
  uint64_t degree = 1 << 16, gf_count = 100, decimal_limit = kDefaultDecimalExponentLimit;
  int64_t depth = -1;
  bool full = false, check = false;

  auto* term = app.add_subcommand("term", "print a(n)");
  term->add_option("n", n, "index")->required();
  term->add_option("--engine", engine, "oracle|log|closed (default closed)");
  term->add_option("--format", format, "brackets|decimal|json-lines");
  term->add_option("--decimal-limit", decimal_limit, "largest exponent rendered in decimal");

  auto* gen = app.add_subcommand("gen", "print a(0..count-1)");
  gen->add_option("count", count, "number of terms")->required();
  gen->add_option("--engine", engine, "oracle|log|closed (default closed)");
  gen->add_option("--format", format, "brackets|decimal|bfile|json-lines");
  gen->add_option("-o,--output", out_path, "write to file instead of stdout");
  gen->add_option("--decimal-limit", decimal_limit, "largest exponent rendered in decimal");

  auto* atoms = app.add_subcommand("atoms", "atom decomposition report");
  atoms->add_option("--count", count, "terms to generate (default 96)");
  atoms->add_option("-o,--output", out_path, "write to file instead of stdout");

  auto* verify = app.add_subcommand("verify", "run the verification campaign");
  verify->add_option("--nmax", nmax, "log/closed comparison bound (default 2^20)");
  verify->add_option("--oracle-nmax", oracle_nmax, "oracle comparison bound (default 10^4)");
  verify->add_option("--depth", depth, "word-structure depth k (default: deepest complete R(k))");
  verify->add_flag("--full", full, "extend the engine comparison to 2^25");

  auto* bfile = app.add_subcommand("bfile-check", "compare an OEIS b-file against an engine");
  bfile->add_option("path", path, "b-file path")->required();
  bfile->add_option("--engine", engine, "oracle|log|closed (default closed)");

  auto* gf = app.add_subcommand("gf", "generating function and derived streams");
  gf->add_option("--degree", degree, "expansion degree bound (default 2^16)");
  gf->add_flag("--check", check, "cross-validate against the engines");
  gf->add_option("--stream", stream, "emit a derived stream: tau|sigma|omega|e|f");
  gf->add_option("--count", gf_count, "stream length (default 100)");
  gf->add_option("--bfile", path, "compare the stream against a b-file");
  gf->add_option("-o,--output", out_path, "write to file instead of stdout");

  auto* plot = app.add_subcommand("plot-data", "emit (n, log10 a(n)) pairs");
  plot->add_option("--nmax", nmax, "last index (default 2^20)");
  plot->add_option("-o,--output", out_path, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (term->parsed()) return cmd_term(n, engine, format, decimal_limit);
    if (gen->parsed()) return cmd_gen(count, engine, format, out_path, decimal_limit);
    if (atoms->parsed()) return cmd_atoms(count, out_path);
    if (verify->parsed()) return cmd_verify(nmax, oracle_nmax, depth, full);
    if (bfile->parsed()) return cmd_bfile_check(path, engine);
    if (gf->parsed()) return cmd_gf(degree, check, stream, gf_count, path, out_path);
    if (plot->parsed()) return cmd_plot_data(nmax, out_path);
  } catch (const FalsificationError& e) {
    std::cerr << "falsification: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
