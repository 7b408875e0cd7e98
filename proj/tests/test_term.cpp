#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "twoup/term.hpp"

using namespace twoup;

TEST_CASE("mu matches the tabulated values") {
  const uint64_t expect[] = {1, 2,  3,  4,  6,  8,  12, 16, 24,
                             32, 48, 64, 96, 128, 192, 256, 384};
  for (uint64_t m = 1; m <= 17; ++m) CHECK(mu(m) == expect[m - 1]);
  CHECK(mu(5) == 6);
  CHECK(mu(12) == 64);
  CHECK_THROWS_AS(mu(0), Error);
}

TEST_CASE("mu equals the merge of powers of 2 and 3*2^k") {
  // Brute-force reference: sorted union of {2^k} and {3*2^k}.
  std::vector<uint64_t> ref;
  for (uint64_t k = 0; k <= 62; ++k) ref.push_back(uint64_t{1} << k);
  for (uint64_t k = 0; k <= 60; ++k) ref.push_back(uint64_t{3} << k);
  std::sort(ref.begin(), ref.end());
  for (uint64_t m = 1; m <= 120; ++m) {
    CHECK(mu(m) == ref[m - 1]);
    if (m >= 2) CHECK(mu(m + 2) == 2 * mu(m));
    if (m >= 2) CHECK(mu(m) > mu(m - 1));
  }
}

TEST_CASE("perpendicularity") {
  TermValue nine(0, 3), six(1, 2), five(0, 2), zero;
  CHECK(perp(nine, six));        // 9 = 1001, 6 = 110
  CHECK_FALSE(perp(nine, five)); // 9 and 5 share bit 0
  CHECK(perp(zero, nine));
  CHECK(perp(zero, zero));

  // Symmetry and perp(t,t) <=> t == 0, over random values.
  std::mt19937_64 rng(20220704);
  std::uniform_int_distribution<uint64_t> exp_dist(0, 80);
  std::uniform_int_distribution<int> w_dist(0, 2);
  auto random_term = [&]() {
    while (true) {
      int w = w_dist(rng);
      if (w == 0) return TermValue();
      if (w == 1) return TermValue(exp_dist(rng));
      uint64_t a = exp_dist(rng), b = exp_dist(rng);
      if (a != b) return TermValue(a, b);
    }
  };
  for (int i = 0; i < 500; ++i) {
    TermValue a = random_term(), b = random_term();
    CHECK(perp(a, b) == perp(b, a));
    CHECK(perp(a, a) == a.is_zero());
  }
}

TEST_CASE("weight") {
  CHECK(weight(TermValue(2, 3)) == 2);
  CHECK(weight(TermValue()) == 0);
  CHECK(weight(TermValue(6)) == 1);
  CHECK(TermValue().is_zero());
}

TEST_CASE("value ordering agrees with integer values") {
  // Small exponents so the reference comparison fits in a word.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<uint64_t> exp_dist(0, 40);
  auto random_small = [&]() {
    for (;;) {
      uint64_t e = exp_dist(rng), f = exp_dist(rng), g = exp_dist(rng);
      switch (rng() % 4) {
        case 0: return TermValue();
        case 1: return TermValue(e);
        case 2:
          if (e != f) return TermValue(e, f);
          break;
        default:
          if (e != f && f != g && e != g) return TermValue(e, f, g);
      }
    }
  };
  auto as_int = [](const TermValue& t) {
    uint64_t v = 0;
    for (uint64_t e : t.exponents()) v |= uint64_t{1} << e;
    return v;
  };
  for (int i = 0; i < 2000; ++i) {
    TermValue a = random_small(), b = random_small();
    CHECK((a < b) == (as_int(a) < as_int(b)));
    CHECK((a == b) == (as_int(a) == as_int(b)));
  }
  // Ties on the top exponent recurse; longer list wins an exhausted prefix.
  CHECK(TermValue(3) < TermValue(0, 3));
  CHECK(TermValue(0, 3) < TermValue(1, 3));
}

TEST_CASE("bracket formatting") {
  CHECK(format_term(TermValue(2, 3), TermStyle::kBrackets) == "[2, 3]");
  CHECK(format_term(TermValue(), TermStyle::kBrackets) == "0");
  CHECK(format_term(TermValue(6), TermStyle::kBrackets) == "[6]");
  CHECK(format_term(TermValue(94, 189), TermStyle::kBrackets) == "[94, 189]");
}

TEST_CASE("decimal formatting") {
  CHECK(format_term(TermValue(), TermStyle::kDecimal) == "0");
  CHECK(format_term(TermValue(0, 1), TermStyle::kDecimal) == "3");
  CHECK(format_term(TermValue(94, 189), TermStyle::kDecimal) ==
        "784637716923335095479473677920765342641360514956390301696");
  // Rendering is refused past the configured exponent bound.
  CHECK_THROWS_AS(format_term(TermValue(5000), TermStyle::kDecimal, 4096), Error);
  CHECK(format_term(TermValue(12), TermStyle::kDecimal, 12) == "4096");
}

TEST_CASE("parsing") {
  CHECK(parse_term("[2, 3]") == TermValue(2, 3));
  CHECK(parse_term("[2,3]") == TermValue(2, 3));
  CHECK(parse_term(" [6] ") == TermValue(6));
  CHECK(parse_term("0") == TermValue());
  CHECK(parse_term("[]") == TermValue());
  CHECK(parse_term("12") == TermValue(2, 3));
  CHECK(parse_term("784637716923335095479473677920765342641360514956390301696") ==
        TermValue(94, 189));
  CHECK_THROWS_AS(parse_term("[3, 2]"), ParseError);
  CHECK_THROWS_AS(parse_term("[1, 1]"), ParseError);
  CHECK_THROWS_AS(parse_term("15"), ParseError);  // weight 4
  CHECK_THROWS_AS(parse_term("twelve"), ParseError);
  CHECK_THROWS_AS(parse_term(""), ParseError);
  CHECK_THROWS_AS(parse_term("[1, 2, 3, 4]"), ParseError);
}

TEST_CASE("format/parse round trip") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<uint64_t> exp_dist(0, (uint64_t{1} << 63) - 2);
  for (int i = 0; i < 500; ++i) {
    TermValue t;
    switch (rng() % 3) {
      case 0: t = TermValue(); break;
      case 1: t = TermValue(exp_dist(rng)); break;
      default: {
        uint64_t a = exp_dist(rng), b = exp_dist(rng);
        if (a == b) continue;
        t = TermValue(a, b);
        break;
      }
    }
    CHECK(parse_term(format_term(t, TermStyle::kBrackets)) == t);
  }
  // Decimal round trip on values small enough to render.
  for (int i = 0; i < 200; ++i) {
    uint64_t a = rng() % 300, b = rng() % 300;
    if (a == b) continue;
    TermValue t(a, b);
    CHECK(parse_term(format_term(t, TermStyle::kDecimal)) == t);
  }
}

TEST_CASE("packed keys round trip") {
  for (TermValue t : {TermValue(), TermValue(0), TermValue(7), TermValue(0, 1),
                      TermValue(123456, 999999)})
    CHECK(TermValue::from_packed_key(t.packed_key()) == t);
  CHECK_THROWS_AS(TermValue(1, 2, 3).packed_key(), Error);
}
