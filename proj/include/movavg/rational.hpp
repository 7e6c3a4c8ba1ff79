#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace movavg {

// Exact rational with __int128 storage and overflow-checked arithmetic.
// Normalized: q > 0, gcd(p, q) = 1. The wide storage keeps the repeated
// squarings inside exact sign computations (biquadratic comparisons raise
// denominators to the fourth power) well inside range at desk scale; anything
// past 128 bits throws instead of wrapping.
class Rational {
public:
    using wide = __int128;

    Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

    static Rational from_wide(wide n, wide d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        r.reduce();
        return r;
    }

    // Narrow accessors for lattice work; throw when the value outgrew int64.
    std::int64_t num() const { return narrow(num_); }
    std::int64_t den() const { return narrow(den_); }
    wide num_wide() const { return num_; }
    wide den_wide() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                         checked_mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    std::int64_t floor() const {
        wide q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return narrow(q);
    }
    std::int64_t ceil() const { return -((-*this).floor()); }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        return den_ == 1 ? wide_str(num_) : wide_str(num_) + "/" + wide_str(den_);
    }

private:
    static std::int64_t narrow(wide v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("rational component exceeds 64 bits");
        return std::int64_t(v);
    }

    static wide checked_mul(wide a, wide b) {
        wide out;
        if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("rational overflow");
        return out;
    }
    static wide checked_add(wide a, wide b) {
        wide out;
        if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("rational overflow");
        return out;
    }

    static wide gcd_wide(wide a, wide b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::string wide_str(wide v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        std::string s;
        while (v != 0) {
            int digit = int(neg ? -(v % 10) : v % 10);
            s.insert(s.begin(), char('0' + digit));
            v /= 10;
        }
        if (neg) s.insert(s.begin(), '-');
        return s;
    }

    void reduce() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        wide g = gcd_wide(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    wide num_ = 0;
    wide den_ = 1;
};

} // namespace movavg
