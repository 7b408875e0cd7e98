#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <vector>

#include "twoup/bfile.hpp"
#include "twoup/closed_form.hpp"
#include "twoup/log_engine.hpp"
#include "twoup/sequences.hpp"

using namespace twoup;

TEST_CASE("tau of the first weight-2 terms") {
  const uint64_t want[] = {5,  9,  13, 15, 19, 21, 25, 29, 31, 33,
                           37, 41, 43, 45, 49, 53, 55, 59, 61};
  for (uint64_t i = 1; i <= 19; ++i) CHECK(tau(i) == want[i - 1]);
  CHECK(tau(1) == 5);
  CHECK(tau(7) == 25);
  CHECK_THROWS_AS(tau(0), Error);
}

TEST_CASE("tau matches a weight scan of the log engine") {
  auto gen = LogEngine::generate(uint64_t{1} << 13);
  uint64_t i = 0;
  for (uint64_t n = 1; n < gen.terms.size(); ++n)
    if (gen.terms[n].weight() == 2) REQUIRE(tau(++i) == n);
  CHECK(i > 2000);
  // count_tau_le is the matching counting function.
  uint64_t count = 0;
  for (uint64_t n = 1; n < gen.terms.size(); ++n) {
    if (gen.terms[n].weight() == 2) ++count;
    REQUIRE(count_tau_le(n) == count);
  }
}

TEST_CASE("tau values are odd") {
  for (uint64_t i = 1; i <= 5000; ++i) CHECK(tau(i) % 2 == 1);
}

TEST_CASE("sigma") {
  CHECK(sigma(1) == 1);
  CHECK(sigma(5) == 6);  // weight-1 indices start 1, 2, 3, 4, 6
  auto gen = LogEngine::generate(uint64_t{1} << 13);
  uint64_t i = 0;
  for (uint64_t n = 1; n < gen.terms.size(); ++n)
    if (gen.terms[n].weight() == 1) REQUIRE(sigma(++i) == n);
}

TEST_CASE("tau and sigma partition the positive integers") {
  // Exhaustive up to a bound: every n is in exactly one stream.
  const uint64_t bound = 4096;
  std::vector<int> hits(bound + 1, 0);
  for (uint64_t i = 1; tau(i) <= bound; ++i) ++hits[tau(i)];
  for (uint64_t i = 1; sigma(i) <= bound; ++i) ++hits[sigma(i)];
  for (uint64_t n = 1; n <= bound; ++n) CHECK(hits[n] == 1);
}

TEST_CASE("omega") {
  CHECK(omega(5) == 2);
  CHECK(omega(8) == 1);
  CHECK(omega(565) == 2);
  ClosedForm cf;
  for (uint64_t n = 1; n <= 2000; ++n) {
    CHECK(omega(n) == cf.a(n).weight());
    CHECK((omega(n) == 1 || omega(n) == 2));
  }
}

TEST_CASE("weight-2 exponent streams") {
  ClosedForm cf;
  CHECK(weight2_exponents(1, cf) == std::pair<uint64_t, uint64_t>{0, 1});
  CHECK(weight2_exponents(2, cf) == std::pair<uint64_t, uint64_t>{2, 3});
  CHECK(weight2_exponents(3, cf) == std::pair<uint64_t, uint64_t>{0, 4});
  for (uint64_t i = 1; i <= 2000; ++i) {
    auto [e, f] = weight2_exponents(i, cf);
    CHECK(e < f);
  }
}

TEST_CASE("sparse polynomial basics") {
  SparsePoly p;
  p.add(3, 2);
  p.add(3, -2);
  CHECK(p.term_count() == 0);  // zero coefficients are not stored
  p.add(1, 1);
  p.add(4, 1);
  auto q = p.shifted(2);
  CHECK(q.coeff(3) == 1);
  CHECK(q.coeff(6) == 1);
  auto r = p.times(p);
  CHECK(r.coeff(2) == 1);
  CHECK(r.coeff(5) == 2);
  CHECK(r.coeff(8) == 1);
  r.truncate(5);
  CHECK(r.coeff(8) == 0);
  CHECK(r.support() == std::vector<uint64_t>{2, 5});
}

TEST_CASE("generating function expansions") {
  SECTION("degree 21 is exactly the start-block polynomial") {
    auto p = gf_tau_coefficients(21);
    CHECK(p.support() == std::vector<uint64_t>{5, 9, 13, 15, 19, 21});
  }
  SECTION("k=1 summand") {
    auto p = gf_tau_coefficients(45);
    std::vector<uint64_t> tail;
    for (uint64_t e : p.support())
      if (e >= 25) tail.push_back(e);
    CHECK(tail == std::vector<uint64_t>{25, 29, 31, 33, 37, 41, 43, 45});
  }
  SECTION("k=2 summand") {
    auto p = gf_tau_coefficients(93);
    std::vector<uint64_t> tail;
    for (uint64_t e : p.support())
      if (e >= 49) tail.push_back(e);
    CHECK(tail == std::vector<uint64_t>{49, 53, 55, 59, 61, 65, 67, 69, 73, 77,
                                        79, 83, 85, 89, 91, 93});
  }
  SECTION("support equals tau through 2^12") {
    auto p = gf_tau_coefficients(uint64_t{1} << 12);
    uint64_t i = 1;
    for (uint64_t e : p.support()) REQUIRE(e == tau(i++));
    CHECK(count_tau_le(uint64_t{1} << 12) == i - 1);
  }
  SECTION("all coefficients are 0 or 1") {
    CHECK_NOTHROW(gf_tau_coefficients(uint64_t{1} << 14));
  }
}

TEST_CASE("b-file parse and render") {
  std::istringstream in(
      "# OEIS b-file fragment\n"
      "0 0\n"
      "1 1\n"
      "2 2\n"
      "\n"
      "3 4\n");
  auto entries = parse_bfile(in);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].n == 0);
  CHECK(bfile_value(entries[3]) == TermValue(2));

  std::ostringstream out;
  write_bfile(out, entries);
  CHECK(out.str() == "0 0\n1 1\n2 2\n3 4\n");

  std::istringstream reparse(out.str());
  auto round = parse_bfile(reparse);
  REQUIRE(round.size() == entries.size());
  for (std::size_t i = 0; i < round.size(); ++i) {
    CHECK(round[i].n == entries[i].n);
    CHECK(round[i].value_text == entries[i].value_text);
  }
}

TEST_CASE("b-file parse errors carry line numbers") {
  std::istringstream bad1("0 0\nnonsense\n");
  CHECK_THROWS_WITH(parse_bfile(bad1), Catch::Matchers::ContainsSubstring("line 2"));
  std::istringstream bad2("5 1\n4 2\n");
  CHECK_THROWS_AS(parse_bfile(bad2), ParseError);
  std::istringstream bad3("0 -3\n");
  CHECK_THROWS_AS(parse_bfile(bad3), ParseError);
}

TEST_CASE("b-file comparison") {
  auto gen = LogEngine::generate(32);
  auto engine = [&](uint64_t n) { return gen.terms[n]; };
  SECTION("empty file is a vacuous pass") {
    CHECK(compare_bfile({}, engine).match());
  }
  SECTION("agreement and mismatch") {
    std::vector<BFileEntry> entries;
    for (uint64_t n = 0; n < 32; ++n)
      entries.push_back({n, format_term(gen.terms[n], TermStyle::kDecimal)});
    CHECK(compare_bfile(entries, engine).match());
    entries[9].value_text = "13";  // altered a(9)
    auto r = compare_bfile(entries, engine);
    CHECK_FALSE(r.match());
    CHECK(r.first_mismatch == 9);
  }
}

TEST_CASE("engine output rendered as b-file re-parses identically") {
  auto gen = LogEngine::generate(64);
  std::vector<BFileEntry> entries;
  for (uint64_t n = 0; n < 64; ++n)
    entries.push_back({n, format_term(gen.terms[n], TermStyle::kDecimal)});
  std::ostringstream out;
  write_bfile(out, entries);
  std::istringstream in(out.str());
  auto round = parse_bfile(in);
  REQUIRE(round.size() == 64);
  for (uint64_t n = 0; n < 64; ++n) CHECK(bfile_value(round[n]) == gen.terms[n]);
}
