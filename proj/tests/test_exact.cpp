#include <doctest.h>

#include <cmath>

#include "movavg/exact_scalar.hpp"
#include "movavg/rng.hpp"

using namespace movavg;

TEST_CASE("rational arithmetic and ordering") {
    Rational a(3, 6), b(-4, 8);
    CHECK(a == Rational(1, 2));
    CHECK(b == Rational(-1, 2));
    CHECK(a + b == Rational(0));
    CHECK(a * b == Rational(-1, 4));
    CHECK(a / b == Rational(-1));
    CHECK(Rational(7, 3).floor() == 2);
    CHECK(Rational(-7, 3).floor() == -3);
    CHECK(Rational(7, 3).ceil() == 3);
    CHECK(Rational(2, 3) < Rational(3, 4));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("square roots normalize and embed") {
    CHECK(ExactScalar::sqrt_of(4) == ExactScalar(2));
    CHECK(ExactScalar::sqrt_of(12) == ExactScalar(2) * ExactScalar::sqrt_of(3));
    CHECK(ExactScalar::sqrt_of(9) == ExactScalar(3));
    CHECK(ExactScalar::sqrt_of(0) == ExactScalar(0));
    CHECK(ExactScalar::sqrt_of(1) == ExactScalar(1));
}

TEST_CASE("biquadratic field closure") {
    ExactScalar r2 = ExactScalar::sqrt_of(2), r3 = ExactScalar::sqrt_of(3);
    CHECK((r2 + r3) * (r2 + r3) == ExactScalar(5) + ExactScalar(2) * ExactScalar::sqrt_of(6));
    CHECK(r2 * r3 == ExactScalar::sqrt_of(6));
    CHECK(ExactScalar::sqrt_of(6) * r2 == ExactScalar(2) * r3);
    // mixed radicands that still span one field: sqrt(2), sqrt(6) -> sqrt(3)
    CHECK(ExactScalar::sqrt_of(6) / r2 == r3);
    // three independent radicands cannot mix
    CHECK_THROWS(r2 + r3 + ExactScalar::sqrt_of(5));
}

TEST_CASE("inverse and division") {
    ExactScalar v = ExactScalar::parse("1+2*sqrt(2)+3*sqrt(3)+sqrt(6)");
    CHECK(v * v.inverse() == ExactScalar(1));
    ExactScalar w = ExactScalar::parse("(sqrt(5)-1)/2");
    CHECK(w * w.inverse() == ExactScalar(1));
    CHECK(ExactScalar(10) / ExactScalar(4) == ExactScalar(Rational(5, 2)));
    CHECK_THROWS(ExactScalar(0).inverse());
}

TEST_CASE("exact signs near cancellation") {
    CHECK(ExactScalar::parse("7-3*sqrt(5)").sign() > 0);   // 7^2 > 45
    CHECK(ExactScalar::parse("2-sqrt(5)").sign() < 0);
    CHECK(ExactScalar::parse("sqrt(2)+sqrt(3)-sqrt(6)").sign() > 0);
    CHECK(ExactScalar::parse("sqrt(6)-sqrt(2)-sqrt(3)").sign() < 0);
    CHECK(ExactScalar::parse("3-2*sqrt(2)").sign() > 0);
    CHECK((ExactScalar::parse("1+sqrt(2)") - ExactScalar::parse("1+sqrt(2)")).sign() == 0);
}

TEST_CASE("sign agrees with floating point away from zero") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        auto coef = [&]() {
            return Rational(std::int64_t(rng.below(41)) - 20, 1 + std::int64_t(rng.below(9)));
        };
        ExactScalar v = ExactScalar(coef()) + ExactScalar(coef()) * ExactScalar::sqrt_of(2) +
                        ExactScalar(coef()) * ExactScalar::sqrt_of(3) +
                        ExactScalar(coef()) * ExactScalar::sqrt_of(6);
        double d = v.to_double();
        if (std::abs(d) > 1e-6) CHECK(v.sign() == (d > 0 ? 1 : -1));
        CHECK((v - v).is_zero());
        if (!v.is_zero()) CHECK(v * v.inverse() == ExactScalar(1));
    }
}

TEST_CASE("floor and fractional part") {
    ExactScalar theta = ExactScalar::parse("sqrt(2)-1");
    ExactScalar five = ExactScalar(5) * theta;
    CHECK(five.mod1() == ExactScalar::parse("5*sqrt(2)-7"));
    CHECK(five.mod1().to_double() == doctest::Approx(0.07106781187).epsilon(1e-9));
    CHECK(ExactScalar(0).mod1() == ExactScalar(0));
    CHECK(ExactScalar(Rational(-1, 3)).mod1() == ExactScalar(Rational(2, 3)));

    ExactScalar golden = ExactScalar::parse("(sqrt(5)-1)/2");
    for (std::int64_t j = 1; j <= 1000; ++j) {
        ExactScalar v = ExactScalar(j) * golden;
        CHECK(v.floor_int() == std::int64_t(std::floor(double(j) * golden.to_double())));
    }
}

TEST_CASE("parse and print round trip") {
    const char* samples[] = {"7",           "-7",        "3/8",
                             "sqrt(2)-1",   "(1+sqrt(5))/2", "(-1+sqrt(5))/2",
                             "1/2+1/2*sqrt(5)", "2-sqrt(3)", "(3+2*sqrt(2)+5*sqrt(3)+sqrt(6))/7"};
    for (const char* s : samples) {
        ExactScalar v = ExactScalar::parse(s);
        CHECK(ExactScalar::parse(v.str()) == v);
    }
    CHECK(ExactScalar::parse("(1+sqrt(5))/2") == ExactScalar::parse("1/2+1/2*sqrt(5)"));
    CHECK_THROWS(ExactScalar::parse("0.5"));
    CHECK_THROWS(ExactScalar::parse("sqrt(2"));
    CHECK_THROWS(ExactScalar::parse("1 + + 2"));
}
