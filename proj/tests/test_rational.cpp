#include "capvc/rational.hpp"

#include <doctest.h>

using namespace capvc;

TEST_CASE("parsing accepts integers and fractions") {
  CHECK(*parse_rational("3") == Rat(3));
  CHECK(*parse_rational("-2") == Rat(-2));
  CHECK(*parse_rational("0") == Rat(0));
  CHECK(*parse_rational("4/6") == Rat(2, 3));
  CHECK(*parse_rational("-4/6") == Rat(-2, 3));
  CHECK(*parse_rational("0/5") == Rat(0));
  CHECK(*parse_rational("123456789123456789/2") == Rat(Int("123456789123456789"), Int(2)));
}

TEST_CASE("parsing rejects malformed input") {
  CHECK_FALSE(parse_rational(""));
  CHECK_FALSE(parse_rational("3/"));
  CHECK_FALSE(parse_rational("/3"));
  CHECK_FALSE(parse_rational("1/0"));
  CHECK_FALSE(parse_rational("1.5"));
  CHECK_FALSE(parse_rational("+3"));
  CHECK_FALSE(parse_rational("1/-2"));
  CHECK_FALSE(parse_rational("--1"));
  CHECK_FALSE(parse_rational(" 3"));
  CHECK_FALSE(parse_rational("3 "));
  CHECK_FALSE(parse_rational("a"));
  CHECK_FALSE(parse_rational("1/2/3"));
}

TEST_CASE("rendering is canonical") {
  CHECK(rat_string(Rat(3)) == "3");
  CHECK(rat_string(Rat(-3)) == "-3");
  CHECK(rat_string(Rat(4, 6)) == "2/3");
  CHECK(rat_string(Rat(0)) == "0");
  CHECK(rat_string(Rat(-4, 6)) == "-2/3");
}

TEST_CASE("parse and render round-trip") {
  for (const char* s : {"0", "1", "-1", "7/3", "-7/3", "1000000007"})
    CHECK(rat_string(*parse_rational(s)) == s);
}

TEST_CASE("ceiling on rationals") {
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_ceil(Rat(3)) == 3);
  CHECK(rat_ceil(Rat(0)) == 0);
  CHECK(rat_ceil(Rat(1, 3)) == 1);
  CHECK(rat_ceil(Rat(5, 5)) == 1);
}

TEST_CASE("integrality predicate") {
  CHECK(rat_is_integral(Rat(4)));
  CHECK(rat_is_integral(Rat(8, 4)));
  CHECK_FALSE(rat_is_integral(Rat(1, 2)));
  CHECK(rat_is_integral(Rat(0)));
}
