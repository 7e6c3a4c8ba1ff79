#include "movavg/exact_scalar.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace movavg {

namespace {

// sign of p + q*sqrt(d) for square-free d > 1
int quad_sign(const Rational& p, const Rational& q, std::int64_t d) {
    if (q.is_zero()) return p.sign();
    if (p.is_zero()) return q.sign();
    if (p.sign() == q.sign()) return p.sign();
    Rational t = p * p - Rational(d) * q * q; // nonzero: sqrt(d) is irrational
    if (t.is_zero()) throw std::logic_error("non-square-free radicand in quad_sign");
    return p.sign() > 0 ? t.sign() : -t.sign();
}

struct QuadValue { // p + q*sqrt(d), helper for the biquadratic sign
    Rational p, q;
};

QuadValue qmul(const QuadValue& a, const QuadValue& b, std::int64_t d) {
    return {a.p * b.p + Rational(d) * a.q * b.q, a.p * b.q + a.q * b.p};
}

QuadValue qsub(const QuadValue& a, const QuadValue& b) {
    return {a.p - b.p, a.q - b.q};
}

} // namespace

std::int64_t ExactScalar::third_radicand(std::int64_t d1, std::int64_t d2) {
    std::int64_t g = std::gcd(d1, d2);
    return (d1 / g) * (d2 / g);
}

ExactScalar ExactScalar::sqrt_of(std::int64_t n) {
    if (n < 0) throw std::domain_error("sqrt of negative value");
    // extract the square part
    std::int64_t outer = 1, inner = n;
    for (std::int64_t f = 2; f * f <= inner; ++f) {
        while (inner % (f * f) == 0) { inner /= f * f; outer *= f; }
    }
    ExactScalar r;
    if (inner <= 1) {
        r.c0_ = Rational(outer * inner);
        return r;
    }
    r.c1_ = Rational(outer);
    r.d1_ = inner;
    return r;
}

Rational ExactScalar::as_rational() const {
    if (!is_rational()) throw std::domain_error("value has a radical part: " + str());
    return c0_;
}

Rational ExactScalar::coeff_of(std::int64_t r) const {
    if (r == 1) return c0_;
    if (d1_ != 0 && r == d1_) return c1_;
    if (d2_ != 0) {
        if (r == d2_) return c2_;
        if (r == third_radicand(d1_, d2_)) return c3_;
    }
    return Rational(0);
}

void ExactScalar::normalize_tag() {
    // collect active radicands
    std::int64_t act[3];
    Rational coef[3];
    int n = 0;
    if (d1_ != 0 && !c1_.is_zero()) { act[n] = d1_; coef[n++] = c1_; }
    if (d2_ != 0 && !c2_.is_zero()) { act[n] = d2_; coef[n++] = c2_; }
    if (d2_ != 0 && !c3_.is_zero()) { act[n] = third_radicand(d1_, d2_); coef[n++] = c3_; }
    // sort by radicand
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (act[j] < act[i]) { std::swap(act[i], act[j]); std::swap(coef[i], coef[j]); }

    c1_ = c2_ = c3_ = Rational(0);
    d1_ = d2_ = 0;
    if (n == 0) return;
    if (n == 1) { d1_ = act[0]; c1_ = coef[0]; return; }
    d1_ = act[0];
    d2_ = act[1];
    c1_ = coef[0];
    c2_ = coef[1];
    if (n == 3) {
        if (third_radicand(d1_, d2_) != act[2])
            throw std::domain_error("radicands do not span a biquadratic field");
        c3_ = coef[2];
    }
}

void ExactScalar::align(ExactScalar& a, ExactScalar& b) {
    if (a.d1_ == b.d1_ && a.d2_ == b.d2_) return;
    // union of active radicands
    std::int64_t rads[6];
    int n = 0;
    auto push = [&](std::int64_t r) {
        if (r == 0) return;
        for (int i = 0; i < n; ++i)
            if (rads[i] == r) return;
        rads[n++] = r;
    };
    auto push_all = [&](const ExactScalar& x) {
        if (!x.c1_.is_zero()) push(x.d1_);
        if (!x.c2_.is_zero()) push(x.d2_);
        if (!x.c3_.is_zero()) push(third_radicand(x.d1_, x.d2_));
    };
    push_all(a);
    push_all(b);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rads[j] < rads[i]) std::swap(rads[i], rads[j]);

    std::int64_t t1 = 0, t2 = 0;
    if (n >= 1) t1 = rads[0];
    if (n >= 2) t2 = rads[1];
    if (n == 3 && third_radicand(t1, t2) != rads[2])
        throw std::domain_error("mixed radicands do not fit one biquadratic field");
    if (n > 3)
        throw std::domain_error("more than two independent radicands requested");

    auto embed = [&](const ExactScalar& x) {
        ExactScalar y;
        y.c0_ = x.c0_;
        y.d1_ = t1;
        y.d2_ = t2;
        if (t1 != 0) y.c1_ = x.coeff_of(t1);
        if (t2 != 0) {
            y.c2_ = x.coeff_of(t2);
            y.c3_ = x.coeff_of(third_radicand(t1, t2));
        }
        return y;
    };
    a = embed(a);
    b = embed(b);
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r = *this;
    r.c0_ = -r.c0_;
    r.c1_ = -r.c1_;
    r.c2_ = -r.c2_;
    r.c3_ = -r.c3_;
    return r;
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    ExactScalar x = a, y = b;
    ExactScalar::align(x, y);
    x.c0_ += y.c0_;
    x.c1_ += y.c1_;
    x.c2_ += y.c2_;
    x.c3_ += y.c3_;
    x.normalize_tag();
    return x;
}

ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    ExactScalar x = a, y = b;
    ExactScalar::align(x, y);
    ExactScalar z;
    z.d1_ = x.d1_;
    z.d2_ = x.d2_;
    if (x.d2_ == 0) {
        // rational or single-radical field
        Rational d1(x.d1_ == 0 ? 0 : x.d1_);
        z.c0_ = x.c0_ * y.c0_ + d1 * x.c1_ * y.c1_;
        z.c1_ = x.c0_ * y.c1_ + x.c1_ * y.c0_;
    } else {
        std::int64_t g = std::gcd(x.d1_, x.d2_);
        Rational d1(x.d1_), d2(x.d2_), e(ExactScalar::third_radicand(x.d1_, x.d2_));
        Rational d1g(x.d1_ / g), d2g(x.d2_ / g), gg(g);
        z.c0_ = x.c0_ * y.c0_ + d1 * x.c1_ * y.c1_ + d2 * x.c2_ * y.c2_ + e * x.c3_ * y.c3_;
        z.c1_ = x.c0_ * y.c1_ + x.c1_ * y.c0_ + d2g * (x.c2_ * y.c3_ + x.c3_ * y.c2_);
        z.c2_ = x.c0_ * y.c2_ + x.c2_ * y.c0_ + d1g * (x.c1_ * y.c3_ + x.c3_ * y.c1_);
        z.c3_ = x.c0_ * y.c3_ + x.c3_ * y.c0_ + gg * (x.c1_ * y.c2_ + x.c2_ * y.c1_);
    }
    z.normalize_tag();
    return z;
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    if (is_rational()) return ExactScalar(Rational(1) / c0_);
    auto conj = [this](bool flip1, bool flip2) {
        ExactScalar r = *this;
        if (flip1) { r.c1_ = -r.c1_; r.c3_ = -r.c3_; }
        if (flip2) { r.c2_ = -r.c2_; r.c3_ = -r.c3_; }
        return r;
    };
    ExactScalar prod = conj(true, false) * conj(false, true) * conj(true, true);
    ExactScalar norm = *this * prod;
    if (!norm.is_rational() || norm.c0_.is_zero())
        throw std::logic_error("field norm is not a nonzero rational");
    Rational inv_n = Rational(1) / norm.c0_;
    ExactScalar r = prod;
    r.c0_ *= inv_n;
    r.c1_ *= inv_n;
    r.c2_ *= inv_n;
    r.c3_ *= inv_n;
    r.normalize_tag();
    return r;
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.is_rational()) { // cheap common case
        ExactScalar r = a;
        Rational inv = Rational(1) / b.as_rational();
        r.c0_ *= inv;
        r.c1_ *= inv;
        r.c2_ *= inv;
        r.c3_ *= inv;
        return r;
    }
    return a * b.inverse();
}

int ExactScalar::sign() const {
    if (d2_ == 0) {
        if (d1_ == 0) return c0_.sign();
        return quad_sign(c0_, c1_, d1_);
    }
    // x = u + w*sqrt(d2) with u = c0 + c1*sqrt(d1), w = c2 + (c3/g)*sqrt(d1)
    std::int64_t g = std::gcd(d1_, d2_);
    QuadValue u{c0_, c1_};
    QuadValue w{c2_, c3_ / Rational(g)};
    int su = quad_sign(u.p, u.q, d1_);
    int sw = quad_sign(w.p, w.q, d1_);
    if (sw == 0) return su;
    if (su == 0) return sw;
    if (su == sw) return su;
    QuadValue t = qsub(qmul(u, u, d1_), qmul(qmul(w, w, d1_), {Rational(d2_), Rational(0)}, d1_));
    int st = quad_sign(t.p, t.q, d1_);
    if (st == 0) throw std::logic_error("degenerate biquadratic field in sign()");
    return su > 0 ? st : -st;
}

double ExactScalar::to_double() const {
    double v = c0_.to_double();
    if (d1_ != 0) v += c1_.to_double() * std::sqrt(double(d1_));
    if (d2_ != 0) {
        v += c2_.to_double() * std::sqrt(double(d2_));
        v += c3_.to_double() * std::sqrt(double(third_radicand(d1_, d2_)));
    }
    return v;
}

std::int64_t ExactScalar::floor_int() const {
    std::int64_t n = std::int64_t(std::floor(to_double()));
    while (*this < ExactScalar(n)) --n;
    while (*this >= ExactScalar(n + 1)) ++n;
    return n;
}

std::string ExactScalar::str() const {
    // common denominator over the active coefficients
    std::int64_t q = c0_.den();
    q = std::lcm(q, c1_.den());
    q = std::lcm(q, c2_.den());
    q = std::lcm(q, c3_.den());
    auto scaled = [&](const Rational& c) { return c.num() * (q / c.den()); };
    std::string body;
    auto append = [&](std::int64_t coef, std::int64_t rad) {
        if (coef == 0) return;
        std::string term;
        if (rad == 1) {
            term = std::to_string(coef);
        } else {
            std::string root = "sqrt(" + std::to_string(rad) + ")";
            if (coef == 1) term = root;
            else if (coef == -1) term = "-" + root;
            else term = std::to_string(coef) + "*" + root;
        }
        if (!body.empty() && term[0] != '-') body += "+";
        body += term;
    };
    append(scaled(c0_), 1);
    if (d1_ != 0) append(scaled(c1_), d1_);
    if (d2_ != 0) {
        append(scaled(c2_), d2_);
        append(scaled(c3_), third_radicand(d1_, d2_));
    }
    if (body.empty()) body = "0";
    if (q == 1) return body;
    bool atom = body.find_first_of("+-", 1) == std::string::npos && body[0] != '-';
    if (atom) return body + "/" + std::to_string(q);
    return "(" + body + ")/" + std::to_string(q);
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("cannot parse exact scalar '" + s + "': " + what);
    }

    std::int64_t integer() {
        skip();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) fail("expected integer at position " + std::to_string(start));
        return std::stoll(s.substr(start, i - start));
    }

    ExactScalar atom() {
        skip();
        if (eat('(')) {
            ExactScalar v = sum();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s.compare(i, 4, "sqrt") == 0) {
            i += 4;
            if (!eat('(')) fail("expected '(' after sqrt");
            std::int64_t n = integer();
            if (!eat(')')) fail("missing ')' after sqrt argument");
            return ExactScalar::sqrt_of(n);
        }
        if (i < s.size() && s[i] == '.') fail("decimals not supported, use p/q");
        std::int64_t n = integer();
        if (i < s.size() && s[i] == '.') fail("decimals not supported, use p/q");
        return ExactScalar(n);
    }

    ExactScalar product() {
        ExactScalar v = atom();
        for (;;) {
            skip();
            if (eat('*')) v = v * atom();
            else if (eat('/')) v = v / atom();
            else return v;
        }
    }

    ExactScalar sum() {
        skip();
        bool neg = eat('-');
        if (!neg) eat('+');
        ExactScalar v = product();
        if (neg) v = -v;
        for (;;) {
            skip();
            if (eat('+')) v = v + product();
            else if (eat('-')) v = v - product();
            else return v;
        }
    }
};

} // namespace

ExactScalar ExactScalar::parse(const std::string& text) {
    Parser p(text);
    ExactScalar v = p.sum();
    p.skip();
    if (p.i != text.size()) p.fail("trailing characters at position " + std::to_string(p.i));
    return v;
}

} // namespace movavg
