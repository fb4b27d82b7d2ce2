#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rational.hpp"

using qhlat::Rational;

TEST_CASE("construction keeps lowest terms and positive denominator") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-2, 4).str() == "-1/2");
    CHECK(Rational(2, -4).str() == "-1/2");
    CHECK(Rational(-2, -4).str() == "1/2");
    CHECK(Rational(0, 7).str() == "0");
    CHECK(Rational(6, 3).str() == "2");
    CHECK_THROWS_AS(Rational(1, 0), qhlat::Error);
}

TEST_CASE("parsing accepts p, -p and p/q forms only") {
    CHECK(Rational::parse("3")->str() == "3");
    CHECK(Rational::parse("-3")->str() == "-3");
    CHECK(Rational::parse("9/12")->str() == "3/4");
    CHECK(Rational::parse("-9/12")->str() == "-3/4");
    CHECK(!Rational::parse(""));
    CHECK(!Rational::parse("1.5"));
    CHECK(!Rational::parse("1/-2"));
    CHECK(!Rational::parse("1/"));
    CHECK(!Rational::parse("/2"));
    CHECK(!Rational::parse("a/b"));
    CHECK(!Rational::parse(" 1/2"));
    CHECK_THROWS_AS(Rational::parse_or_throw("x"), qhlat::Error);
}

TEST_CASE("print/parse round trip is exact") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-5000, 5000);
    std::uniform_int_distribution<long> den(1, 999);
    for (int k = 0; k < 200; ++k) {
        Rational r(num(rng), den(rng));
        CHECK(*Rational::parse(r.str()) == r);
    }
}

TEST_CASE("field arithmetic") {
    Rational half(1, 2), third(1, 3);
    CHECK(half + third == Rational(5, 6));
    CHECK(half - third == Rational(1, 6));
    CHECK(half * third == Rational(1, 6));
    CHECK(half / third == Rational(3, 2));
    CHECK((-half).str() == "-1/2");
    CHECK(half.abs() == half);
    CHECK((-half).abs() == half);
    CHECK(Rational(0).is_zero());
    CHECK(half.sign() == 1);
    CHECK((-half).sign() == -1);
    CHECK_THROWS_AS(half / Rational(0), qhlat::Error);
}

TEST_CASE("exact conversion from double is dyadic") {
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(-0.25) == Rational(-1, 4));
    CHECK(Rational::from_double(3.0) == Rational(3));
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("integer power helper") {
    CHECK(qhlat::pow_n(Rational(1, 2), 0) == Rational(1));
    CHECK(qhlat::pow_n(Rational(1, 2), 3) == Rational(1, 8));
    CHECK(qhlat::pow_n(Rational(-2), 5) == Rational(-32));
}
