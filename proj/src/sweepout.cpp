#include "movavg/sweepout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "movavg/errors.hpp"
#include "movavg/rng.hpp"

namespace movavg {

namespace {

std::int64_t pow3(int e) {
    std::int64_t v = 1;
    while (e-- > 0) v *= 3;
    return v;
}

std::int64_t pow2(int e) { return std::int64_t(1) << e; }

// discrete Delta for the K-prefix at height lambda
IntIntervalSet delta_discrete(const BoxFamily& f, int axis, const Rational& lambda, std::size_t K) {
    IntIntervalSet u;
    for (std::size_t k = 0; k < K && k < f.size(); ++k) {
        const Rational& l = f.entry(k).length[std::size_t(axis)];
        if (lambda < l) continue;
        Rational radius = lambda - l; // alpha = 1
        std::int64_t n = f.corner_int(k, axis);
        u.add(n - radius.floor(), n + radius.floor());
    }
    return u;
}

IntervalSet delta_continuous(const BoxFamily& f, int axis, const Rational& lambda, std::size_t K) {
    std::vector<Interval> parts;
    for (std::size_t k = 0; k < K && k < f.size(); ++k) {
        const Rational& l = f.entry(k).length[std::size_t(axis)];
        if (lambda < l) continue;
        Rational radius = lambda - l;
        if (radius.sign() <= 0) continue;
        const Rational& w = f.entry(k).corner[std::size_t(axis)];
        parts.push_back({ExactScalar(w - radius), ExactScalar(w + radius)});
    }
    return IntervalSet(std::move(parts));
}

} // namespace

SweepoutPlan sweepout_plan(const BoxFamily& family, int axis, std::int64_t p, bool pad,
                           std::vector<Rational> lambda_grid) {
    if (p < 1) throw std::invalid_argument("sweepout needs p >= 1");
    if (axis < 0 || axis >= family.dim()) throw std::invalid_argument("axis out of range");
    if (lambda_grid.empty())
        for (std::int64_t l = 1; l <= 64; ++l) lambda_grid.push_back(Rational(l));

    const bool discrete = family.mode() == FamilyMode::Discrete;
    SweepoutPlan plan;
    plan.mode = family.mode();
    plan.dim = family.dim();
    plan.axis = axis;
    plan.p = p;
    plan.pad = pad;

    bool found = false;
    for (const auto& lambda : lambda_grid) {
        if (discrete && !lambda.is_integer()) continue; // the construction picks integer heights
        Rational threshold = discrete ? Rational(p) * (Rational(4) * lambda + Rational(1))
                                      : Rational(p) * Rational(4) * lambda;
        Rational full_size = discrete
                                 ? Rational(delta_discrete(family, axis, lambda, family.size()).count())
                                 : delta_continuous(family, axis, lambda, family.size())
                                       .total_length()
                                       .as_rational();
        if (full_size < threshold) continue;
        // smallest K_p achieving the threshold (sizes are monotone in K)
        std::size_t lo = 1, hi = family.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            Rational sz = discrete
                              ? Rational(delta_discrete(family, axis, lambda, mid).count())
                              : delta_continuous(family, axis, lambda, mid).total_length().as_rational();
            if (sz < threshold) lo = mid + 1;
            else hi = mid;
        }
        plan.lambda_p = lambda;
        plan.K_p = lo;
        found = true;
        break;
    }
    if (!found)
        throw NoWitnessError("no probed lambda meets the sweepout threshold for p = " +
                             std::to_string(p) + "; enlarge the prefix or the lambda grid");

    plan.family = family.prefix(plan.K_p);
    if (discrete) {
        plan.delta_int = delta_discrete(family, axis, plan.lambda_p, plan.K_p);
        plan.delta_size = Rational(plan.delta_int.count());
        plan.delta_sup = Rational(plan.delta_int.sup());
    } else {
        plan.delta_real = delta_continuous(family, axis, plan.lambda_p, plan.K_p);
        plan.delta_size = plan.delta_real.total_length().as_rational();
        plan.delta_sup = plan.delta_real.sup().as_rational();
    }

    // heights
    const int d = family.dim();
    if (discrete) {
        plan.N.assign(std::size_t(d), 0);
        plan.N[0] = 2 * plan.lambda_p.num() + plan.delta_sup.num() + (pad ? 1 : 0);
        for (int j = 1; j < d; ++j) {
            std::int64_t nj = 0;
            for (std::size_t k = 0; k < plan.K_p; ++k)
                nj = std::max<std::int64_t>(nj, std::llabs(family.corner_int(k, j) + family.length_int(k, j)));
            plan.N[std::size_t(j)] = nj;
        }
        // witness entry for every member of Delta
        for (std::int64_t z : plan.delta_int.values()) {
            for (std::size_t k = 0; k < plan.K_p; ++k) {
                const Rational& l = family.entry(k).length[std::size_t(axis)];
                if (plan.lambda_p < l) continue;
                std::int64_t radius = (plan.lambda_p - l).floor();
                if (std::llabs(z - family.corner_int(k, axis)) <= radius) {
                    plan.witnesses.push_back({z, k});
                    break;
                }
            }
        }
        if (plan.witnesses.size() != std::size_t(plan.delta_int.count()))
            throw std::logic_error("some z in Delta has no witnessing entry");
    } else {
        plan.L.assign(std::size_t(d), Rational(0));
        plan.L[0] = Rational(2) * plan.lambda_p + plan.delta_sup;
        for (int j = 1; j < d; ++j) {
            Rational lj(0);
            for (std::size_t k = 0; k < plan.K_p; ++k) {
                Rational v = (family.entry(k).corner[std::size_t(j)] + family.entry(k).length[std::size_t(j)]).abs();
                if (lj < v) lj = v;
            }
            plan.L[std::size_t(j)] = lj;
        }
    }
    return plan;
}

CounterexampleSets build_counterexample_set(const SweepoutPlan& plan, const DiscreteTower& tower) {
    if (plan.mode != FamilyMode::Discrete)
        throw std::invalid_argument("discrete construction needs a discrete plan");
    const int d = plan.dim;
    if (int(tower.heights.size()) != d) throw std::invalid_argument("tower dimension mismatch");
    for (int j = 0; j < d; ++j) {
        std::int64_t expect = j == 0 ? plan.N[0] : 3 * plan.N[std::size_t(j)];
        if (tower.heights[std::size_t(j)] != expect)
            throw std::invalid_argument("tower heights must be (N_1, 3N_2, ..., 3N_d)");
    }

    const std::int64_t lam = plan.lambda_p.num();
    const std::int64_t N1 = plan.N[0];
    if (N1 - 4 * lam - 1 < 0) throw std::invalid_argument("tower too short for 4 lambda_p + 1 levels");

    CounterexampleSets out;
    out.Hp = TorusSet(d);
    out.Fp = TorusSet(d);
    out.mu_base = tower.base.measure();

    // enumerate levels of H_p: j_1 in [N_1-4lam-1, N_1-1], other axes full
    std::vector<std::int64_t> j(std::size_t(d), 0);
    auto for_each_level = [&](std::int64_t j1_lo, std::int64_t j1_hi, bool rest_high,
                              TorusSet& dest) {
        // rest_high: axes >= 2 range over [N_m, 2N_m) instead of [0, 3N_m)
        std::vector<std::int64_t> lo(std::size_t(d), 0), hi(std::size_t(d), 0);
        lo[0] = j1_lo;
        hi[0] = j1_hi + 1;
        for (int a = 1; a < d; ++a) {
            lo[std::size_t(a)] = rest_high ? plan.N[std::size_t(a)] : 0;
            hi[std::size_t(a)] = rest_high ? 2 * plan.N[std::size_t(a)] : 3 * plan.N[std::size_t(a)];
        }
        for (int a = 0; a < d; ++a) j[std::size_t(a)] = lo[std::size_t(a)];
        for (;;) {
            dest.add(tower.level(j));
            int a = 0;
            for (; a < d; ++a) {
                if (++j[std::size_t(a)] < hi[std::size_t(a)]) break;
                j[std::size_t(a)] = lo[std::size_t(a)];
            }
            if (a == d) break;
        }
    };
    for_each_level(N1 - 4 * lam - 1, N1 - 1, false, out.Hp);
    for_each_level(N1 - 2 * lam - 1, N1 - 2 * lam - 1, true, out.Fp);

    out.mu_Hp = out.Hp.measure();
    out.mu_Fp = out.Fp.measure();
    ExactScalar expected = ExactScalar(pow3(d - 1)) * ExactScalar(4 * lam + 1) * out.mu_base;
    for (int a = 1; a < d; ++a) expected *= ExactScalar(plan.N[std::size_t(a)]);
    out.measure_identity_ok = out.mu_Hp == expected;
    return out;
}

RatioReport ratio_check(const SweepoutPlan& plan, const CounterexampleSets& sets,
                        const DiscreteTower& tower, const RatioCheckOptions& opts) {
    const int d = plan.dim;
    RatioReport rep;
    rep.mu_Hp = sets.mu_Hp;
    rep.bound = Rational(plan.p, pow3(d - 1));

    // exact union of the translates T_1^{-z} F_p
    TorusSet uni(d);
    ExactScalar measure_sum(0);
    std::vector<std::int64_t> shift(std::size_t(d), 0);
    for (std::int64_t z : plan.delta_int.values()) {
        shift[0] = -z;
        TorusSet tr = sets.Fp.translate(tower.system.translation(shift));
        measure_sum += tr.measure();
        uni.add(tr);
    }
    rep.mu_union = uni.measure();
    rep.translates_disjoint = rep.mu_union == measure_sum;
    rep.ratio = rep.mu_union / rep.mu_Hp;
    rep.ratio_ok = ExactScalar(rep.bound) <= rep.ratio;

    // the containment behind the lower bound: every translated box orbit of
    // F_p lies inside H_p, as an exact set inclusion
    if (opts.exact_containment) {
        rep.containment_ok = true;
        for (const auto& [z, k] : plan.witnesses) {
            const BoxEntry& box = plan.family.entry(k);
            std::vector<std::int64_t> e(std::size_t(d), 0), jj(std::size_t(d), 0);
            std::int64_t total = 1;
            for (int a = 0; a < d; ++a) total *= box.length[std::size_t(a)].num();
            for (std::int64_t c = 0; c < total && rep.containment_ok; ++c) {
                e[0] = -z + box.corner[0].num() + jj[0];
                for (int a = 1; a < d; ++a)
                    e[std::size_t(a)] = box.corner[std::size_t(a)].num() + jj[std::size_t(a)];
                TorusSet moved = sets.Fp.translate(tower.system.translation(e));
                if (!moved.is_subset_of(sets.Hp)) rep.containment_ok = false;
                for (int a = 0; a < d; ++a) {
                    if (++jj[std::size_t(a)] < box.length[std::size_t(a)].num()) break;
                    jj[std::size_t(a)] = 0;
                }
            }
            if (!rep.containment_ok) break;
        }
    }

    // dense-sampling cross-check of mu(M_B chi_{H_p} > 1 - eps)
    SplitMix64 rng(opts.seed);
    std::vector<DPoint> pts(opts.samples);
    for (auto& pt : pts) {
        pt.resize(std::size_t(d));
        for (auto& c : pt) c = rng.uniform();
    }
    std::vector<char> hits(opts.samples, 0);
    parallel_for(opts.samples, opts.policy, [&](std::size_t s) {
        IndicatorBatch b = batch_indicator_counts(tower.system, sets.Hp, pts[s], plan.family);
        double best = 0;
        for (std::size_t k = 0; k < plan.family.size(); ++k) best = std::max(best, b.average(k));
        hits[s] = best > 1.0 - opts.eps ? 1 : 0;
    });
    std::size_t hit_count = 0;
    for (char h : hits) hit_count += std::size_t(h);
    rep.sampled_maximal_fraction = double(hit_count) / double(opts.samples);
    rep.sampling_consistent = rep.mu_union.to_double() <= rep.sampled_maximal_fraction + 1e-2;
    return rep;
}

std::vector<std::pair<XPoint, std::size_t>> sweepout_witness_points(const SweepoutPlan& plan,
                                                                    const CounterexampleSets& sets,
                                                                    const DiscreteTower& tower,
                                                                    std::size_t limit) {
    // midpoint of the first box of F_p, translated by T_1^{-z}
    std::vector<std::pair<XPoint, std::size_t>> out;
    if (sets.Fp.empty()) return out;
    const TorusBox& box = sets.Fp.boxes().front();
    XPoint mid;
    for (const auto& side : box.sides) mid.push_back(side.lo + (side.hi - side.lo) / ExactScalar(2));
    std::vector<std::int64_t> shift(std::size_t(plan.dim), 0);
    for (const auto& [z, k] : plan.witnesses) {
        if (out.size() >= limit) break;
        shift[0] = -z;
        XPoint pt = tower.system.act(mid, shift);
        out.push_back({pt, k});
    }
    return out;
}

OscillationReport oscillation_scan(const TorusSystem& system, const TorusSet& set,
                                   const BoxFamily& family, const OscillationOptions& opts,
                                   const std::vector<XPoint>& exact_witnesses) {
    if (opts.k_hi >= family.size() || opts.k_lo > opts.k_hi)
        throw std::invalid_argument("oscillation window out of range");
    OscillationReport rep;
    rep.set_measure = set.measure().to_double();

    BoxFamily window(family.mode(), family.dim());
    for (std::size_t k = opts.k_lo; k <= opts.k_hi; ++k) window.append(family.entry(k));

    SplitMix64 rng(opts.seed);
    std::vector<DPoint> pts(opts.samples);
    for (auto& pt : pts) {
        pt.resize(std::size_t(system.dim_m()));
        for (auto& c : pt) c = rng.uniform();
    }
    std::vector<double> maxs(opts.samples), mins(opts.samples);
    parallel_for(opts.samples, opts.policy, [&](std::size_t s) {
        IndicatorBatch b = batch_indicator_counts(system, set, pts[s], window);
        double mx = 0, mn = 1;
        for (std::size_t k = 0; k < window.size(); ++k) {
            double v = b.average(k);
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        maxs[s] = mx;
        mins[s] = mn;
    });
    std::size_t above = 0, below = 0;
    for (std::size_t s = 0; s < opts.samples; ++s) {
        if (maxs[s] >= 1.0 - opts.eps) ++above;
        if (mins[s] <= opts.eps) ++below;
        rep.best_max = std::max(rep.best_max, maxs[s]);
        rep.best_min = std::min(rep.best_min, mins[s]);
    }
    rep.frac_max_above = double(above) / double(opts.samples);
    rep.frac_min_below = double(below) / double(opts.samples);

    // exact witnesses: orbit membership decided in the field, so A_k = 1 is
    // an exact statement
    for (const auto& w : exact_witnesses) {
        OscillationReport::Witness res;
        for (std::size_t k = opts.k_lo; k <= opts.k_hi; ++k) {
            const BoxEntry& box = family.entry(k);
            std::int64_t vol = 1;
            for (int a = 0; a < family.dim(); ++a) vol *= box.length[std::size_t(a)].num();
            std::int64_t cnt = exact_box_indicator_count(system, set, w, box);
            double val = double(cnt) / double(vol);
            if (cnt == vol && k <= opts.plan_window_end && !res.attains_one_exactly) {
                res.attains_one_exactly = true;
                res.k_at_one = k;
            }
            if (k > opts.plan_window_end) res.tail_max = std::max(res.tail_max, val);
        }
        res.tail_below_eps = res.tail_max <= opts.eps;
        rep.witnesses.push_back(res);
    }
    return rep;
}

ContinuousCounterexample build_continuous_counterexample(const SweepoutPlan& plan,
                                                         const SuspensionTower& tower) {
    if (plan.mode != FamilyMode::Continuous)
        throw std::invalid_argument("continuous construction needs a continuous plan");
    const int d = plan.dim;
    if (int(tower.sides.size()) != d) throw std::invalid_argument("tower dimension mismatch");
    for (int j = 0; j < d; ++j) {
        Rational expect = j == 0 ? plan.L[0] : Rational(3) * plan.L[std::size_t(j)];
        if (tower.sides[std::size_t(j)] != expect)
            throw std::invalid_argument("tower sides must be (L_1, 3L_2, ..., 3L_d)");
    }
    const Rational& L1 = plan.L[0];
    Rational qlo = L1 - Rational(4) * plan.lambda_p;
    if (qlo.sign() < 0) throw std::invalid_argument("tower too short for the Q_p slab");

    ContinuousCounterexample out;
    // H_p = image of Q_p = [L_1 - 4 lambda_p, L_1) x prod [0, 3 L_j)
    std::vector<Rational> lo(std::size_t(d), Rational(0)), hi(std::size_t(d), Rational(0));
    lo[0] = qlo;
    hi[0] = L1;
    for (int j = 1; j < d; ++j) hi[std::size_t(j)] = Rational(3) * plan.L[std::size_t(j)];
    out.Hp = tower.level_set(lo, hi);
    out.mu_Y = tower.mu_Y;
    out.mu_Hp = out.Hp.measure();
    ExactScalar expected = ExactScalar(Rational(4) * plan.lambda_p / L1) * tower.mu_Y;
    out.measure_identity_ok = out.mu_Hp == expected;

    // union over z in Delta of U_{(-z,0,...,0)} F_p: t_1 ranges over
    // (L_1 - 2 lambda_p) - Delta, t_j over [L_j, 2 L_j)
    Rational c = L1 - Rational(2) * plan.lambda_p;
    TorusSet uni(tower.system.dim_m());
    for (const auto& part : plan.delta_real.parts()) {
        std::vector<Interval> sides;
        ExactScalar t1_lo = ExactScalar(c) - part.hi;
        ExactScalar t1_hi = ExactScalar(c) - part.lo;
        sides.push_back({tower.gamma * t1_lo, tower.gamma * t1_hi});
        for (int j = 1; j < d; ++j)
            sides.push_back({tower.gamma * ExactScalar(plan.L[std::size_t(j)]),
                             tower.gamma * ExactScalar(Rational(2) * plan.L[std::size_t(j)])});
        for (int a = d; a < tower.system.dim_m(); ++a)
            sides.push_back({ExactScalar(0), ExactScalar(1)});
        uni.add_box(sides);
    }
    out.mu_union = uni.measure();
    out.ratio = out.mu_union / out.mu_Hp;
    out.bound3_ok = ExactScalar(Rational(plan.p, pow3(d - 1))) <= out.ratio;
    out.bound2_ok = ExactScalar(Rational(plan.p, pow2(d - 1))) <= out.ratio;
    return out;
}

} // namespace movavg
