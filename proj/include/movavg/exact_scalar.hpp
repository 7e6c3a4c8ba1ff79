#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "movavg/rational.hpp"

namespace movavg {

// Element of a real biquadratic field Q(sqrt(d1), sqrt(d2)):
//
//     x = c0 + c1*sqrt(d1) + c2*sqrt(d2) + c3*sqrt(e),   e = d1*d2 / gcd(d1,d2)^2
//
// with rational coefficients and square-free radicands 1 < d1 < d2.
// Plain rationals (d1 = d2 = 0) and single-radical values (d2 = 0) are the
// degenerate cases. Values from incompatible fields promote to a common field
// when one exists and throw otherwise. All comparisons are exact: the sign of
// an element is decided by repeated squaring, never through floating point.
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(std::int64_t n) : c0_(n) {}
    ExactScalar(const Rational& r) : c0_(r) {}

    // sqrt(n) for n >= 0; square parts are pulled out (sqrt(12) = 2*sqrt(3)).
    static ExactScalar sqrt_of(std::int64_t n);

    bool is_zero() const { return c0_.is_zero() && c1_.is_zero() && c2_.is_zero() && c3_.is_zero(); }
    bool is_rational() const { return c1_.is_zero() && c2_.is_zero() && c3_.is_zero(); }
    // Throws if the value carries a radical part.
    Rational as_rational() const;

    int sign() const;

    ExactScalar operator-() const;
    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);
    ExactScalar inverse() const;

    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return (a - b).is_zero(); }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
    friend bool operator<(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() < 0; }
    friend bool operator>(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() >= 0; }

    ExactScalar abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const;

    std::int64_t floor_int() const;
    // Fractional part in [0, 1).
    ExactScalar mod1() const { return *this - ExactScalar(floor_int()); }

    // Canonical form "p", "p/q", "(a+b*sqrt(D))/c", "(a+b*sqrt(D1)+c*sqrt(D2)+d*sqrt(E))/q".
    std::string str() const;
    // Accepts sums/products of integers, fractions and sqrt(n), e.g.
    // "sqrt(2)-1", "(1+sqrt(5))/2", "3/8", "7".
    static ExactScalar parse(const std::string& text);

    std::int64_t rad1() const { return d1_; }
    std::int64_t rad2() const { return d2_; }
    const Rational& coeff0() const { return c0_; }
    const Rational& coeff1() const { return c1_; }
    const Rational& coeff2() const { return c2_; }
    const Rational& coeff3() const { return c3_; }

private:
    // Coefficient of sqrt(r) for radicand r in {1, d1, d2, e}; zero when absent.
    Rational coeff_of(std::int64_t r) const;
    void normalize_tag();
    static void align(ExactScalar& a, ExactScalar& b);
    static std::int64_t third_radicand(std::int64_t d1, std::int64_t d2);

    Rational c0_, c1_, c2_, c3_;
    std::int64_t d1_ = 0, d2_ = 0;
};

using XPoint = std::vector<ExactScalar>; // exact torus point, coordinates in [0,1)
using DPoint = std::vector<double>;      // sampled torus point

} // namespace movavg
