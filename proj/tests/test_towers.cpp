#include <doctest.h>

#include "movavg/errors.hpp"
#include "movavg/towers.hpp"

using namespace movavg;

namespace {
ExactScalar q(const char* s) { return ExactScalar::parse(s); }
}

TEST_CASE("golden rotation tower, N = 5") {
    ExactScalar golden = q("(sqrt(5)-1)/2");
    DiscreteTower t = rotation_tower(golden, 5, Rational(1, 2));
    // min_{0<j<5} ||j theta|| = ||3 theta|| = (7 - 3 sqrt(5)) / 2
    CHECK(t.base.boxes().size() == 1);
    CHECK(t.base.boxes()[0].sides[0].hi == q("(7-3*sqrt(5))/2"));
    CHECK(t.coverage == q("(35-15*sqrt(5))/2"));
    CHECK(t.coverage.to_double() == doctest::Approx(0.7295).epsilon(1e-3));
    CHECK(t.coverage_met); // 0.7295 >= 1/2

    TowerReport rep = verify_tower(t);
    CHECK(rep.disjoint);
    CHECK(rep.pairs_checked == 10);
}

TEST_CASE("sqrt(2)-1 tower, N = 3") {
    DiscreteTower t = rotation_tower(q("sqrt(2)-1"), 3, Rational(1, 2));
    CHECK(t.base.boxes()[0].sides[0].hi == q("3-2*sqrt(2)")); // ||2 theta||
    CHECK(t.coverage == q("9-6*sqrt(2)"));
    CHECK(t.coverage.to_double() == doctest::Approx(0.51472).epsilon(1e-4));
    CHECK(t.coverage_met);
    CHECK(verify_tower(t).disjoint);
}

TEST_CASE("trivial tower N = 1 covers the circle") {
    DiscreteTower t = rotation_tower(q("(sqrt(5)-1)/2"), 1, Rational(1, 2));
    CHECK(t.coverage == ExactScalar(1));
    CHECK(t.base.measure() == ExactScalar(1));
}

TEST_CASE("coverage is exactly N times the base measure") {
    for (std::int64_t N : {2, 5, 9, 30}) {
        DiscreteTower t = rotation_tower(q("sqrt(3)-1"), N, Rational(1, 2));
        CHECK(t.coverage == ExactScalar(N) * t.base.measure());
        CHECK(t.base.measure().sign() > 0);
    }
}

TEST_CASE("rational rotations are rejected") {
    CHECK_THROWS_AS(rotation_tower(q("1/2"), 3, Rational(1, 2)), RationalRotationError);
}

TEST_CASE("unachievable coverage reports the achieved value") {
    // golden, N = 5 reaches ~0.7295 < 0.9
    try {
        rotation_tower(q("(sqrt(5)-1)/2"), 5, Rational(1, 10), true);
        FAIL("expected UnachievableCoverageError");
    } catch (const UnachievableCoverageError& e) {
        CHECK(e.achieved == doctest::Approx(0.7295).epsilon(1e-3));
    }
    // tolerant mode returns the tower with the flag cleared
    DiscreteTower t = rotation_tower(q("(sqrt(5)-1)/2"), 5, Rational(1, 10), false);
    CHECK(!t.coverage_met);
}

TEST_CASE("product tower") {
    ExactScalar golden = q("(sqrt(5)-1)/2"), s2 = q("sqrt(2)-1");
    SUBCASE("d = 1 reduces to the rotation tower") {
        DiscreteTower p = product_tower({golden}, {5}, Rational(1, 2));
        DiscreteTower r = rotation_tower(golden, 5, Rational(1, 2));
        CHECK(p.coverage == r.coverage);
    }
    SUBCASE("coverage multiplies exactly") {
        DiscreteTower p = product_tower({golden, s2}, {5, 3}, Rational(1, 2));
        CHECK(p.coverage == q("(35-15*sqrt(5))/2") * q("9-6*sqrt(2)"));
        CHECK(p.coverage.to_double() == doctest::Approx(0.3755).epsilon(1e-3));
        CHECK(verify_tower(p).disjoint);
    }
    SUBCASE("a height-one factor contributes a full circle") {
        DiscreteTower p = product_tower({golden, s2}, {5, 1}, Rational(1, 2));
        CHECK(p.coverage == q("(35-15*sqrt(5))/2"));
    }
}

TEST_CASE("corrupted tower is detected with a witness") {
    DiscreteTower t = rotation_tower(q("(sqrt(5)-1)/2"), 5, Rational(1, 2));
    // double the base: the enlarged base intersects its own first translate
    ExactScalar beta = t.base.boxes()[0].sides[0].hi;
    TorusSet bigger(1);
    bigger.add_box({{ExactScalar(0), beta * ExactScalar(3)}});
    t.base = bigger;
    TowerReport rep = verify_tower(t);
    CHECK(!rep.disjoint);
    CHECK(rep.has_witness);
    CHECK(rep.witness_a != rep.witness_b);
}

TEST_CASE("suspension tower measures") {
    SUBCASE("gamma = 1/4, L = (4,4): the chart fills the torus") {
        TorusSystem sys = TorusSystem::suspension_canonical(q("1/4"), q("sqrt(2)/4"), q("sqrt(3)/4"));
        SuspensionTower t = suspension_tower(sys, {Rational(4), Rational(4)});
        CHECK(t.mu_Y == ExactScalar(1));
        TowerReport rep = verify_tower(t, 2000, 7);
        CHECK(rep.injective);
        CHECK(rep.disjoint); // spot-checked images all distinct
    }
    SUBCASE("gamma = 1/4, L = (1,1)") {
        TorusSystem sys = TorusSystem::suspension_canonical(q("1/4"), q("sqrt(2)/4"), q("sqrt(3)/4"));
        SuspensionTower t = suspension_tower(sys, {Rational(1), Rational(1)});
        CHECK(t.mu_Y == q("1/16"));
    }
    SUBCASE("gamma = 1/8, L = (8,4)") {
        TorusSystem sys = TorusSystem::suspension_canonical(q("1/8"), q("sqrt(2)/8"), q("sqrt(3)/8"));
        SuspensionTower t = suspension_tower(sys, {Rational(8), Rational(4)});
        CHECK(t.mu_Y == q("1/2"));
    }
    SUBCASE("wrap violation") {
        TorusSystem sys = TorusSystem::suspension_canonical(q("1/4"), q("sqrt(2)/4"), q("sqrt(3)/4"));
        CHECK_THROWS_AS(suspension_tower(sys, {Rational(5), Rational(1)}), WrapViolationError);
    }
}

TEST_CASE("suspension tower: transversal-parameter product identity for boxes") {
    // integral of chi_S over Y equals the double integral over fiber x Q,
    // both in closed form for an axis box S
    TorusSystem sys = TorusSystem::suspension_canonical(q("1/8"), q("sqrt(2)/8"), q("sqrt(3)/8"));
    SuspensionTower t = suspension_tower(sys, {Rational(6), Rational(4)});
    TorusSet S(3);
    S.add_box({{q("1/10"), q("3/10")}, {q("1/5"), q("4/5")}, {q("1/3"), q("2/3")}});

    // LHS: mu(S intersect Y) with Y = [0, 6/8) x [0, 4/8) x [0,1)
    TorusSet Y(3);
    Y.add_box({{q("0"), q("3/4")}, {q("0"), q("1/2")}, {q("0"), q("1")}});
    ExactScalar lhs = S.intersect(Y).measure();

    // RHS: gamma^2 * len3 * Leb{t1 in [0,L1): gamma t1 in B1} * Leb{t2 ...}
    auto leb_axis = [&](const char* lo, const char* hi, Rational L) {
        // gamma t in [lo,hi) and t in [0, L): t in [lo,hi)/gamma clipped
        ExactScalar g = q("1/8");
        ExactScalar a = q(lo) / g, b = q(hi) / g;
        ExactScalar zero(0), cap = ExactScalar(L);
        if (a < zero) a = zero;
        if (cap < b) b = cap;
        return a < b ? b - a : ExactScalar(0);
    };
    ExactScalar rhs = q("1/64") * (q("2/3") - q("1/3")) * leb_axis("1/10", "3/10", Rational(6)) *
                      leb_axis("1/5", "4/5", Rational(4));
    CHECK(lhs == rhs);
}

TEST_CASE("level sets of the suspension tower") {
    TorusSystem sys = TorusSystem::suspension_canonical(q("1/8"), q("sqrt(2)/8"), q("sqrt(3)/8"));
    SuspensionTower t = suspension_tower(sys, {Rational(8), Rational(2)});
    TorusSet lv = t.level_set({Rational(2), Rational(0)}, {Rational(6), Rational(2)});
    CHECK(lv.measure() == q("1/8")); // (4/8) * (2/8) * 1
    CHECK_THROWS_AS(t.level_set({Rational(0), Rational(0)}, {Rational(9), Rational(1)}),
                    std::invalid_argument);
}
