#include <doctest.h>

#include "fogndt/rational.hpp"

using fogndt::ExtendedReal;
using fogndt::Rational;
using fogndt::format_rational;
using fogndt::parse_rational;

TEST_SUITE("rational") {
  TEST_CASE("decimal and fraction text parse exactly") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("1/11") == Rational(1, 11));
    CHECK(parse_rational("1.5e-2") == Rational(3, 200));
    CHECK(parse_rational("2E3") == Rational(2000));
    CHECK(parse_rational("  0.5 ") == Rational(1, 2));
    CHECK(parse_rational(".5") == Rational(1, 2));
    CHECK(parse_rational("3/0.5") == Rational(6));
  }

  TEST_CASE("leading zeros are decimal, not octal") {
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("0.9") == Rational(9, 10));
    CHECK(parse_rational("0.08") == Rational(2, 25));
    CHECK(parse_rational("007") == Rational(7));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("0.000") == Rational(0));
  }

  TEST_CASE("malformed text is rejected") {
    for (const char* bad : {"", " ", "abc", "1/0", "inf", "nan", "1..2", "1e", "--1", "1/2/3", "0x10", "1,5"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
    }
  }

  TEST_CASE("format round-trips through parse") {
    CHECK(format_rational(Rational(1, 4)) == "0.25");
    CHECK(format_rational(Rational(-3, 40)) == "-0.075");
    CHECK(format_rational(Rational(1, 11)) == "1/11");
    CHECK(format_rational(Rational(7)) == "7");
    CHECK(format_rational(Rational(1, 100)) == "0.01");
    for (int n = -30; n <= 30; ++n) {
      for (int d = 1; d <= 40; ++d) {
        const Rational x(n, d);
        CHECK(parse_rational(format_rational(x)) == x);
      }
    }
  }

  TEST_CASE("extended reals order infinity above every value") {
    const auto inf = ExtendedReal<Rational>::infinity();
    const ExtendedReal<Rational> half(Rational(1, 2));
    CHECK(inf.is_infinite());
    CHECK(Rational(1000) <= inf);
    CHECK_FALSE(Rational(1000) >= inf);
    CHECK(Rational(1, 2) >= half);
    CHECK(Rational(1, 2) <= half);
    CHECK(half.clamped(Rational(1)) == Rational(1, 2));
    CHECK(inf.clamped(Rational(1)) == Rational(1));
    CHECK(ExtendedReal<Rational>(Rational(3, 2)).clamped(Rational(1)) == Rational(1));
  }

  TEST_CASE("nearly_equal is exact for rationals and relative for doubles") {
    CHECK(fogndt::nearly_equal(Rational(1, 3), Rational(1, 3)));
    CHECK_FALSE(fogndt::nearly_equal(Rational(1, 3), Rational(1, 3) + Rational(1, 1000000000000000LL)));
    CHECK(fogndt::nearly_equal(1.0 / 3.0 * 3.0, 1.0));
    CHECK_FALSE(fogndt::nearly_equal(1.0, 1.0 + 1e-9));
  }
}
