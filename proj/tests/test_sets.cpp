#include <doctest.h>

#include "movavg/interval_set.hpp"
#include "movavg/rng.hpp"
#include "movavg/torus_set.hpp"

using namespace movavg;

namespace {

ExactScalar q(const char* s) { return ExactScalar::parse(s); }

TorusSet random_set(SplitMix64& rng, int m, int boxes) {
    TorusSet s(m);
    const std::int64_t grid = 64;
    for (int b = 0; b < boxes; ++b) {
        std::vector<Interval> sides;
        for (int a = 0; a < m; ++a) {
            std::int64_t lo = std::int64_t(rng.below(grid));
            std::int64_t len = 1 + std::int64_t(rng.below(grid / 2));
            sides.push_back({ExactScalar(Rational(lo, grid)), ExactScalar(Rational(lo + len, grid))});
        }
        s.add_box(sides);
    }
    return s;
}

} // namespace

TEST_CASE("interval set merge and measure") {
    IntervalSet s;
    s.add(q("0"), q("1/4"));
    s.add(q("1/8"), q("3/8"));
    CHECK(s.parts().size() == 1);
    CHECK(s.total_length() == q("3/8"));
    s.add(q("1/2"), q("3/4"));
    CHECK(s.parts().size() == 2);
    CHECK(s.contains(q("1/3")));
    CHECK(!s.contains(q("3/8"))); // half-open
    CHECK(s.intersect(IntervalSet::single(q("1/4"), q("5/8"))).total_length() == q("1/4"));
    CHECK(s.subtract(IntervalSet::single(q("0"), q("1"))).empty());
}

TEST_CASE("integer interval set") {
    IntIntervalSet s;
    s.add(1, 3);
    s.add(5, 5);
    s.add(4, 4); // adjacent runs merge
    CHECK(s.count() == 5);
    CHECK(s.parts().size() == 1);
    CHECK(s.contains(2));
    CHECK(!s.contains(0));
    CHECK(s.sup() == 5);
    s.add(10, 9); // empty, ignored
    CHECK(s.count() == 5);
}

TEST_CASE("torus set: union of overlapping boxes") {
    TorusSet t(1);
    t.add_box({{q("0"), q("1/4")}});
    t.add_box({{q("1/8"), q("3/8")}});
    CHECK(t.measure() == q("3/8"));
    CHECK(t.measure() + t.complement().measure() == ExactScalar(1));
}

TEST_CASE("torus set: wrap normalization at the seam") {
    TorusSet t(1);
    t.add_box({{q("3/4"), q("5/4")}});
    CHECK(t.boxes().size() == 2);
    CHECK(t.measure() == q("1/2"));
    CHECK(t.contains({q("7/8")}));
    CHECK(t.contains({q("1/8")}));
    CHECK(!t.contains({q("1/2")}));

    // negative endpoints wrap too
    TorusSet u(2);
    u.add_box({{q("-1/8"), q("1/8")}, {q("1/2"), q("1")}});
    CHECK(u.measure() == q("1/8"));
}

TEST_CASE("torus set algebra is exact") {
    SplitMix64 rng(7);
    for (int m = 1; m <= 3; ++m) {
        for (int trial = 0; trial < 8; ++trial) {
            TorusSet a = random_set(rng, m, 3);
            TorusSet b = random_set(rng, m, 2);
            CHECK(a.measure() + a.complement().measure() == ExactScalar(1));
            CHECK(a.intersect(a.complement()).measure().is_zero());
            CHECK(a.intersect(b).measure() == b.intersect(a).measure());
            // inclusion-exclusion
            TorusSet uni = a;
            uni.add(b);
            CHECK(uni.measure() == a.measure() + b.measure() - a.intersect(b).measure());
            // translation preserves measure
            std::vector<ExactScalar> shift;
            for (int ax = 0; ax < m; ++ax)
                shift.push_back(ExactScalar(Rational(std::int64_t(rng.below(97)), 97)));
            CHECK(a.translate(shift).measure() == a.measure());
            CHECK(a.is_subset_of(uni));
        }
    }
}

TEST_CASE("indicator agrees with exact membership on rational points") {
    SplitMix64 rng(19);
    TorusSet a = random_set(rng, 2, 4);
    for (int trial = 0; trial < 200; ++trial) {
        Rational x(std::int64_t(rng.below(257)), 257);
        Rational y(std::int64_t(rng.below(257)), 257);
        XPoint xp = {ExactScalar(x), ExactScalar(y)};
        DPoint dp = {x.to_double(), y.to_double()};
        CHECK(a.contains(xp) == a.indicator(dp));
    }
}
