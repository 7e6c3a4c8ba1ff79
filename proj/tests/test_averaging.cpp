#include <doctest.h>

#include <cmath>

#include "movavg/averaging.hpp"
#include "movavg/rng.hpp"
#include "oracles.hpp"

using namespace movavg;

namespace {

ExactScalar q(const char* s) { return ExactScalar::parse(s); }

TorusSet half_interval() {
    TorusSet t(1);
    t.add_box({{q("0"), q("1/2")}});
    return t;
}

} // namespace

TEST_CASE("box average of a constant is the constant") {
    TorusSystem s = TorusSystem::product_rotation({q("sqrt(2)-1")});
    Observable c = Observable::trig_poly({{{0}, 2.5}});
    for (std::int64_t len : {1, 7, 100}) {
        CVal v = discrete_box_average(s, c, {0.3}, {{Rational(11)}, {Rational(len)}});
        CHECK(std::abs(v - CVal(2.5)) < 1e-14);
    }
}

TEST_CASE("character averages match the geometric series closed form") {
    ExactScalar theta = q("sqrt(2)-1");
    TorusSystem s = TorusSystem::product_rotation({theta});
    Observable chi = Observable::character({1});
    SplitMix64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        double x = rng.uniform();
        std::int64_t n = std::int64_t(rng.below(1000));
        std::int64_t l = 1 + std::int64_t(rng.below(300));
        CVal direct = discrete_box_average(s, chi, {x}, {{Rational(n)}, {Rational(l)}});
        CVal closed = oracles::character_box_average(theta.to_double(), 1, x, n, l);
        CHECK(std::abs(direct - closed) < 1e-12);
    }
}

TEST_CASE("d=2 indicator average by brute enumeration") {
    TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2"), q("sqrt(2)-1")});
    TorusSet box(2);
    box.add_box({{q("0"), q("1/2")}, {q("0"), q("1/2")}});
    Observable obs = Observable::indicator(box);
    DPoint x = {0.1, 0.2};
    BoxEntry e{{Rational(0), Rational(0)}, {Rational(2), Rational(2)}};
    CVal v = discrete_box_average(s, obs, x, e);
    int hits = 0;
    for (std::int64_t j1 = 0; j1 < 2; ++j1)
        for (std::int64_t j2 = 0; j2 < 2; ++j2)
            if (std::abs(obs.eval(s.act(x, std::vector<std::int64_t>{j1, j2})) - CVal(1.0)) < 0.5)
                ++hits;
    CHECK(v.real() == doctest::Approx(hits / 4.0));
}

TEST_CASE("batch kernel equals naive averaging") {
    SplitMix64 rng(31);
    SUBCASE("characters, family (k,k) up to 100") {
        TorusSystem s = TorusSystem::product_rotation({q("sqrt(2)-1")});
        Observable chi = Observable::character({1});
        BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), 100);
        DPoint x = {0.37};
        auto batch = batch_box_averages(s, chi, x, fam);
        for (std::size_t k = 0; k < fam.size(); ++k) {
            CVal naive = discrete_box_average(s, chi, x, fam.entry(k));
            CHECK(std::abs(batch[k] - naive) < 1e-12);
        }
    }
    SUBCASE("indicator counts are exactly equal, d = 2") {
        TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2"), q("sqrt(2)-1")});
        TorusSet set(2);
        set.add_box({{q("0"), q("1/3")}, {q("1/4"), q("7/8")}});
        BoxFamily fam(FamilyMode::Discrete, 2);
        for (int b = 0; b < 10; ++b) {
            BoxEntry e;
            for (int a = 0; a < 2; ++a) {
                e.corner.push_back(Rational(std::int64_t(rng.below(48))));
                e.length.push_back(Rational(1 + std::int64_t(rng.below(16))));
            }
            fam.append(std::move(e));
        }
        DPoint x = {0.11, 0.77};
        IndicatorBatch b = batch_indicator_counts(s, set, x, fam);
        for (std::size_t k = 0; k < fam.size(); ++k)
            CHECK(b.counts[k] == discrete_box_indicator_count(s, set, x, fam.entry(k)));
    }
    SUBCASE("characters, random families, d = 3") {
        TorusSystem s =
            TorusSystem::product_rotation({q("(sqrt(5)-1)/2"), q("sqrt(2)-1"), q("sqrt(3)-1")});
        Observable chi = Observable::character({1, -2, 1});
        BoxFamily fam = oracles::random_family(rng, 3, 8, 12, 8);
        DPoint x = {0.1, 0.5, 0.9};
        auto batch = batch_box_averages(s, chi, x, fam);
        for (std::size_t k = 0; k < fam.size(); ++k)
            CHECK(std::abs(batch[k] - discrete_box_average(s, chi, x, fam.entry(k))) < 1e-12);
    }
}

TEST_CASE("serial and parallel batch kernels agree bitwise") {
    TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2")});
    Observable chi = Observable::character({1});
    BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), 500);
    DPoint x = {0.4};
    BatchOptions ser, par;
    ser.policy = ExecPolicy::Serial;
    par.policy = ExecPolicy::Parallel;
    auto a = batch_box_averages(s, chi, x, fam, ser);
    auto b = batch_box_averages(s, chi, x, fam, par);
    for (std::size_t k = 0; k < fam.size(); ++k) {
        CHECK(a[k].real() == b[k].real());
        CHECK(a[k].imag() == b[k].imag());
    }
}

TEST_CASE("batch kernel rejects oversized grids") {
    TorusSystem s = TorusSystem::product_rotation({q("sqrt(2)-1")});
    BoxFamily f(FamilyMode::Discrete, 1);
    f.append({{Rational(0)}, {Rational(1000000)}});
    BatchOptions opts;
    opts.max_cells = 1000;
    CHECK_THROWS_AS(batch_box_averages(s, Observable::character({1}), {0.0}, f, opts),
                    std::length_error);
}

TEST_CASE("maximal average") {
    TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2")});
    Observable obs = Observable::indicator(half_interval());
    BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), 5);
    DPoint x = {0.9};
    SUBCASE("window of one box is that box") {
        MaximalResult r = maximal_average(s, obs, x, fam, 2, 2);
        CVal v = discrete_box_average(s, obs, x, fam.entry(2));
        CHECK(r.value == doctest::Approx(v.real()));
        CHECK(r.argmax == 2);
    }
    SUBCASE("nested windows are monotone") {
        MaximalResult whole = maximal_average(s, obs, x, fam, 0, 4);
        MaximalResult tail = maximal_average(s, obs, x, fam, 2, 4);
        CHECK(tail.value <= whole.value + 1e-15);
    }
    SUBCASE("equals brute-force max over the window") {
        MaximalResult r = maximal_average(s, obs, x, fam, 0, 4);
        double best = 0;
        for (std::size_t k = 0; k < 5; ++k)
            best = std::max(best, discrete_box_average(s, obs, x, fam.entry(k)).real());
        CHECK(r.value == doctest::Approx(best));
    }
    SUBCASE("pointwise domination by the maximal function") {
        for (std::size_t k = 0; k < 5; ++k) {
            double v = discrete_box_average(s, obs, x, fam.entry(k)).real();
            CHECK(v <= maximal_average(s, obs, x, fam, 0, 4).value + 1e-15);
        }
    }
}

TEST_CASE("composition defect") {
    TorusSystem s = TorusSystem::product_rotation({q("sqrt(2)-1")});
    SUBCASE("constants compose exactly") {
        Observable c = Observable::trig_poly({{{0}, 1.0}});
        CompositionDefect r = composition_defect(s, c, {0.0}, {{Rational(1)}, {Rational(2)}},
                                                 {{Rational(0)}, {Rational(4)}});
        CHECK(r.defect == doctest::Approx(0.0));
        CHECK(r.defect_alt == doctest::Approx(0.0));
    }
    SUBCASE("both routes agree exactly for indicators") {
        Observable obs = Observable::indicator(half_interval());
        CompositionDefect r = composition_defect(s, obs, {0.0}, {{Rational(1)}, {Rational(2)}},
                                                 {{Rational(0)}, {Rational(4)}});
        CHECK(r.defect == r.defect_alt);
        CHECK(r.defect <= r.bound + 1e-15);
        CHECK(r.bound <= r.constant_bound + 1e-15);
    }
    SUBCASE("defect times box volume stays bounded along (k,k)") {
        Observable obs = Observable::indicator(half_interval());
        BoxEntry hbox{{Rational(1)}, {Rational(2)}};
        double constant = 0;
        double scaled_max = 0;
        for (std::int64_t k = 16; k <= 1000; k *= 2) {
            BoxEntry kbox{{Rational(k)}, {Rational(k)}};
            CompositionDefect r = composition_defect(s, obs, {0.123}, hbox, kbox);
            CHECK(r.defect <= r.bound + 1e-15);
            scaled_max = std::max(scaled_max, r.defect * double(k));
            constant = r.constant_bound * double(k); // = 2 (|n_h| + l_h) ||f||
        }
        CHECK(scaled_max <= constant + 1e-9);
    }
}

TEST_CASE("convergence experiment under the cone condition") {
    TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2")});
    Observable obs = Observable::indicator(half_interval());
    BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), 10000);
    ConvergenceOptions opts;
    opts.samples = 100;
    opts.seed = 1;
    ConvergenceReport rep = convergence_experiment(s, obs, fam, opts);
    CHECK(rep.mu.real() == doctest::Approx(0.5));
    CHECK(rep.final_deviation <= 0.05);

    SUBCASE("constant observable deviates by zero") {
        Observable c = Observable::trig_poly({{{0}, 1.0}});
        ConvergenceOptions o2 = opts;
        o2.samples = 5;
        ConvergenceReport r2 = convergence_experiment(s, c, fam.prefix(200), o2);
        CHECK(r2.max_deviation <= 1e-12);
    }
    SUBCASE("serial and parallel deviations agree bitwise") {
        ConvergenceOptions o3 = opts;
        o3.samples = 10;
        BoxFamily small = fam.prefix(500);
        o3.policy = ExecPolicy::Serial;
        ConvergenceReport a = convergence_experiment(s, obs, small, o3);
        o3.policy = ExecPolicy::Parallel;
        ConvergenceReport b = convergence_experiment(s, obs, small, o3);
        for (std::size_t k = 0; k < a.deviation.size(); ++k) CHECK(a.deviation[k] == b.deviation[k]);
    }
    SUBCASE("failed condition requires the override") {
        ConvergenceOptions o4 = opts;
        o4.condition_certified = false;
        CHECK_THROWS_AS(convergence_experiment(s, obs, fam.prefix(10), o4), std::invalid_argument);
        o4.override_condition = true;
        ConvergenceReport r4 = convergence_experiment(s, obs, fam.prefix(10), o4);
        CHECK(r4.condition_overridden);
    }
    SUBCASE("non-ergodic systems are rejected") {
        TorusSystem rat = TorusSystem::product_rotation({q("1/2")});
        CHECK_THROWS_AS(convergence_experiment(rat, obs, fam.prefix(10), opts),
                        std::invalid_argument);
    }
}

TEST_CASE("continuous averages: closed form and exact slicing") {
    TorusSystem sys = TorusSystem::suspension_canonical(q("1/8"), q("sqrt(2)/8"), q("sqrt(3)/8"));
    SUBCASE("constant is exact") {
        Observable one = Observable::indicator(TorusSet::full(3));
        XPoint x(3, ExactScalar(0));
        ContinuousAverage v = continuous_box_average(sys, one, x, {Rational(0), Rational(0)},
                                                     {Rational(3), Rational(2)},
                                                     ContinuousMethod::ExactIndicator);
        CHECK(*v.exact == ExactScalar(1));
    }
    SUBCASE("separable oscillatory closed form vs quadrature") {
        Observable chi = Observable::character({1, 2, 3});
        XPoint x = {q("1/7"), q("2/7"), q("3/7")};
        std::vector<Rational> w = {Rational(1, 3), Rational(1, 5)};
        std::vector<Rational> s = {Rational(2), Rational(3)};
        Quadrature quad;
        quad.abs_tol = 1e-10;
        ContinuousAverage v =
            continuous_box_average(sys, chi, x, w, s, ContinuousMethod::TensorMidpoint, quad);
        DPoint xd = {x[0].to_double(), x[1].to_double(), x[2].to_double()};
        CVal closed = oracles::character_flow_average(sys, {1, 2, 3}, xd,
                                                      {w[0].to_double(), w[1].to_double()},
                                                      {s[0].to_double(), s[1].to_double()});
        CHECK(std::abs(v.value - closed) < 1e-8);
    }
    SUBCASE("exact indicator average stays in [0,1] and matches quadrature") {
        TorusSet set(3);
        set.add_box({{q("0"), q("1/3")}, {q("1/4"), q("3/4")}, {q("0"), q("1")}});
        Observable obs = Observable::indicator(set);
        XPoint x = {q("1/11"), q("2/11"), q("3/11")};
        std::vector<Rational> w = {Rational(1, 2), Rational(2)};
        std::vector<Rational> s = {Rational(5), Rational(4)};
        ContinuousAverage ex =
            continuous_box_average(sys, obs, x, w, s, ContinuousMethod::ExactIndicator);
        CHECK(ExactScalar(0) <= *ex.exact);
        CHECK(*ex.exact <= ExactScalar(1));
        Quadrature quad;
        quad.abs_tol = 1e-5;
        quad.max_evals = std::size_t(1) << 24;
        ContinuousAverage qd =
            continuous_box_average(sys, obs, x, w, s, ContinuousMethod::TensorMidpoint, quad);
        CHECK(std::abs(qd.value.real() - ex.exact->to_double()) <=
              10 * (qd.quad.err_estimate + quad.abs_tol));
    }
    SUBCASE("exact method rejects non-indicators") {
        Observable chi = Observable::character({1, 0, 0});
        XPoint x(3, ExactScalar(0));
        CHECK_THROWS_AS(continuous_box_average(sys, chi, x, {Rational(0), Rational(0)},
                                               {Rational(1), Rational(1)},
                                               ContinuousMethod::ExactIndicator),
                        std::invalid_argument);
    }
}

TEST_CASE("positivity and normalization of the averaging operators") {
    TorusSystem s = TorusSystem::product_rotation({q("(sqrt(5)-1)/2")});
    Observable obs = Observable::indicator(half_interval());
    SplitMix64 rng(77);
    BoxFamily fam = oracles::random_family(rng, 1, 20, 50, 12);
    DPoint x = {0.6};
    auto b = batch_indicator_counts(s, obs.set(), x, fam);
    for (std::size_t k = 0; k < fam.size(); ++k) {
        CHECK(b.counts[k] >= 0);
        CHECK(b.counts[k] <= b.volumes[k]); // indicator <= 1 forces A_k 1 = 1 normalization
    }
}
