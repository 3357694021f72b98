#include <doctest.h>

#include "citorch/rational.hpp"

using citorch::Rational;

TEST_CASE("rationals normalise and compare exactly") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(2450, 961) > Rational(2549, 1000));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(7, 3).floor() == 2);
  CHECK(Rational(7, 3).ceil() == 3);
  CHECK(Rational(-7, 3).floor() == -3);
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("parse accepts integers, decimals and fractions") {
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("2.45") == Rational(49, 20));
  CHECK(Rational::parse("7/3") == Rational(7, 3));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse(""));
}

TEST_CASE("to_fixed rounds half to even on the exact value") {
  CHECK(Rational(1, 8).to_fixed(2) == "0.12");
  CHECK(Rational(3, 8).to_fixed(2) == "0.38");
  CHECK(Rational(5, 2).to_fixed(0) == "2");
  CHECK(Rational(400, 147).to_fixed(2) == "2.72");
  CHECK(Rational(1).to_fixed(2) == "1.00");
  CHECK(Rational(7, 3).to_string() == "7/3");
  CHECK(Rational(4).to_string() == "4");
}
