#include "movavg/towers.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "movavg/errors.hpp"
#include "movavg/rng.hpp"

namespace movavg {

namespace {

ExactScalar circle_distance(const ExactScalar& x) {
    ExactScalar f = x.mod1();
    ExactScalar other = ExactScalar(1) - f;
    return f < other ? f : other;
}

} // namespace

TorusSet DiscreteTower::level(const std::vector<std::int64_t>& j) const {
    return base.translate(system.translation(j));
}

DiscreteTower rotation_tower(const ExactScalar& theta, std::int64_t N, const Rational& delta,
                             bool require_coverage) {
    if (theta.is_rational())
        throw RationalRotationError("rotation tower needs an irrational angle, got " + theta.str());
    if (N < 1) throw std::invalid_argument("tower height must be >= 1");
    if (delta.sign() <= 0 || Rational(1) <= delta)
        throw std::invalid_argument("gap target delta must be in (0,1)");

    ExactScalar beta(1);
    for (std::int64_t j = 1; j < N; ++j) {
        ExactScalar dist = circle_distance(ExactScalar(j) * theta);
        if (dist < beta) beta = dist;
    }

    DiscreteTower t;
    t.system = TorusSystem::product_rotation({theta});
    t.base = TorusSet(1);
    t.base.add_box({{ExactScalar(0), beta}});
    t.heights = {N};
    t.coverage = ExactScalar(N) * beta;
    t.delta = delta;
    t.coverage_met = ExactScalar(Rational(1) - delta) <= t.coverage;
    if (require_coverage && !t.coverage_met)
        throw UnachievableCoverageError("simple base reaches coverage " +
                                            std::to_string(t.coverage.to_double()) + " < 1-delta",
                                        t.coverage.to_double());
    return t;
}

DiscreteTower product_tower(const std::vector<ExactScalar>& thetas,
                            const std::vector<std::int64_t>& heights, const Rational& delta,
                            bool require_coverage) {
    if (thetas.size() != heights.size() || thetas.empty())
        throw std::invalid_argument("product tower needs one angle per height");
    DiscreteTower t;
    t.system = TorusSystem::product_rotation(thetas);
    t.heights = heights;
    t.delta = delta;
    t.coverage = ExactScalar(1);
    TorusBox base_box;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        DiscreteTower comp = rotation_tower(thetas[i], heights[i], delta, false);
        base_box.sides.push_back(comp.base.boxes()[0].sides[0]);
        t.coverage *= comp.coverage;
    }
    t.base = TorusSet(int(thetas.size()));
    t.base.add_box(base_box.sides);
    t.coverage_met = ExactScalar(Rational(1) - delta) <= t.coverage;
    if (require_coverage && !t.coverage_met)
        throw UnachievableCoverageError("product coverage " + std::to_string(t.coverage.to_double()) +
                                            " < 1-delta",
                                        t.coverage.to_double());
    return t;
}

TowerReport verify_tower(const DiscreteTower& tower) {
    TowerReport rep;
    rep.coverage = tower.coverage;
    const int d = tower.system.dim_d();
    if (int(tower.heights.size()) != d) throw std::invalid_argument("height vector mismatch");

    // exact pairwise disjointness, pruned axis by axis: a pair of product
    // levels is disjoint as soon as one axis is
    std::vector<std::vector<IntervalSet>> axis_levels{std::size_t(d)};
    for (int a = 0; a < d; ++a) {
        for (std::int64_t j = 0; j < tower.heights[std::size_t(a)]; ++j) {
            ExactScalar shift = ExactScalar(j) * tower.system.theta_col(a)[std::size_t(a)];
            TorusSet axis_set(1);
            for (const auto& box : tower.base.boxes()) {
                Interval side = box.sides[std::size_t(a)];
                axis_set.add_box({{side.lo + shift, side.hi + shift}});
            }
            axis_levels[std::size_t(a)].push_back(axis_set.as_interval_set());
        }
    }
    std::vector<std::vector<std::vector<bool>>> axis_disjoint{std::size_t(d)};
    for (int a = 0; a < d; ++a) {
        std::int64_t n = tower.heights[std::size_t(a)];
        axis_disjoint[std::size_t(a)].assign(std::size_t(n), std::vector<bool>(std::size_t(n), false));
        for (std::int64_t i = 0; i < n; ++i)
            for (std::int64_t j = i; j < n; ++j) {
                bool dis = axis_levels[std::size_t(a)][std::size_t(i)]
                               .intersect(axis_levels[std::size_t(a)][std::size_t(j)])
                               .empty();
                axis_disjoint[std::size_t(a)][std::size_t(i)][std::size_t(j)] = dis;
                axis_disjoint[std::size_t(a)][std::size_t(j)][std::size_t(i)] = dis;
            }
    }

    std::int64_t total = 1;
    for (auto n : tower.heights) total *= n;
    auto decode = [&](std::int64_t idx) {
        std::vector<std::int64_t> j(std::size_t(d), 0);
        for (int a = 0; a < d; ++a) {
            j[std::size_t(a)] = idx % tower.heights[std::size_t(a)];
            idx /= tower.heights[std::size_t(a)];
        }
        return j;
    };
    rep.disjoint = true;
    for (std::int64_t p = 0; p < total && rep.disjoint; ++p) {
        auto jp = decode(p);
        for (std::int64_t q = p + 1; q < total; ++q) {
            auto jq = decode(q);
            bool dis = false;
            for (int a = 0; a < d && !dis; ++a)
                dis = axis_disjoint[std::size_t(a)][std::size_t(jp[std::size_t(a)])]
                                   [std::size_t(jq[std::size_t(a)])];
            ++rep.pairs_checked;
            if (!dis) {
                rep.disjoint = false;
                rep.has_witness = true;
                rep.witness_a = jp;
                rep.witness_b = jq;
                break;
            }
        }
    }
    rep.injective = rep.disjoint;
    rep.verified = rep.disjoint;
    return rep;
}

SuspensionTower suspension_tower(const TorusSystem& system, const std::vector<Rational>& sides) {
    if (system.kind() != SystemKind::Suspension)
        throw std::invalid_argument("suspension tower needs a suspension system");
    const int d = system.dim_d();
    const int m = system.dim_m();
    if (m != d + 1) throw UncertifiableParametersError("explicit tower needs the canonical form m = d+1");
    if (int(sides.size()) != d) throw std::invalid_argument("side vector mismatch");

    // canonical form check: columns i have gamma at row i, zeros elsewhere in
    // the top d rows
    ExactScalar gamma = system.theta_col(0)[0];
    if (gamma.sign() <= 0) throw UncertifiableParametersError("canonical gamma must be positive");
    for (int i = 0; i < d; ++i)
        for (int r = 0; r < d; ++r) {
            const ExactScalar& v = system.theta_col(i)[std::size_t(r)];
            if (r == i && v != gamma)
                throw UncertifiableParametersError("canonical form needs equal gamma on the diagonal");
            if (r != i && !v.is_zero())
                throw UncertifiableParametersError("canonical form needs zero off-diagonal top block");
        }

    SuspensionTower t;
    t.system = system;
    t.sides = sides;
    t.gamma = gamma;
    t.mu_Y = ExactScalar(1);
    for (const auto& L : sides) {
        if (L.sign() <= 0) throw std::invalid_argument("tower sides must be positive");
        ExactScalar gl = gamma * ExactScalar(L);
        if (ExactScalar(1) < gl)
            throw WrapViolationError("gamma * L = " + gl.str() + " exceeds 1 (chart wraps)");
        t.mu_Y *= gl;
    }
    t.bijective_certified = true;
    return t;
}

TorusSet SuspensionTower::level_set(const std::vector<Rational>& lo,
                                    const std::vector<Rational>& hi) const {
    const int d = system.dim_d();
    const int m = system.dim_m();
    if (int(lo.size()) != d || int(hi.size()) != d)
        throw std::invalid_argument("level box dimension mismatch");
    std::vector<Interval> sides_iv;
    for (int i = 0; i < d; ++i) {
        if (lo[std::size_t(i)] < Rational(0) || sides[std::size_t(i)] < hi[std::size_t(i)])
            throw std::invalid_argument("level box must sit inside Q");
        sides_iv.push_back({gamma * ExactScalar(lo[std::size_t(i)]), gamma * ExactScalar(hi[std::size_t(i)])});
    }
    for (int a = d; a < m; ++a) sides_iv.push_back({ExactScalar(0), ExactScalar(1)});
    TorusSet s(m);
    s.add_box(sides_iv);
    return s;
}

TowerReport verify_tower(const SuspensionTower& tower, std::size_t spot_samples, std::uint64_t seed) {
    TowerReport rep;
    rep.coverage = tower.mu_Y;
    rep.injective = tower.bijective_certified;
    // spot check: exact images of random (x3, t) grid samples must be distinct
    SplitMix64 rng(seed);
    const int d = tower.system.dim_d();
    const std::int64_t grid = 1 << 10;
    std::vector<XPoint> images;
    images.reserve(spot_samples);
    std::set<std::vector<std::int64_t>> seen; // distinct (x, t) inputs only
    while (images.size() < spot_samples) {
        std::vector<std::int64_t> key(std::size_t(d + 1));
        for (auto& k : key) k = std::int64_t(rng.below(std::uint64_t(grid)));
        if (!seen.insert(key).second) continue;
        XPoint fiber(std::size_t(tower.system.dim_m()), ExactScalar(0));
        fiber[std::size_t(tower.system.dim_m() - 1)] = ExactScalar(Rational(key[0], grid));
        std::vector<ExactScalar> t;
        for (int i = 0; i < d; ++i)
            t.push_back(ExactScalar(Rational(key[std::size_t(i + 1)], grid) * tower.sides[std::size_t(i)]));
        images.push_back(tower.system.act(fiber, t));
    }
    std::sort(images.begin(), images.end(), [](const XPoint& a, const XPoint& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
    bool distinct = true;
    for (std::size_t i = 1; i < images.size() && distinct; ++i) {
        bool equal = true;
        for (std::size_t c = 0; c < images[i].size() && equal; ++c)
            equal = images[i][c] == images[i - 1][c];
        if (equal) distinct = false;
    }
    rep.spot_checks = spot_samples;
    rep.disjoint = distinct;
    rep.verified = rep.injective && distinct;
    return rep;
}

} // namespace movavg
