#include "movavg/cone.hpp"

#include <cmath>
#include <stdexcept>

#include "movavg/errors.hpp"

namespace movavg {

const char* to_string(ConeCondition c) {
    switch (c) {
    case ConeCondition::Holds: return "Holds";
    case ConeCondition::FailsEmpirically: return "FailsEmpirically";
    case ConeCondition::BoundedLengths: return "BoundedLengths";
    case ConeCondition::Inconclusive: return "Inconclusive";
    }
    return "?";
}

VerdictConfig::VerdictConfig() {
    for (std::int64_t l = 1; l <= 512; l *= 2) lambda_grid.push_back(Rational(l));
}

ConeCrossSection cross_section(const BoxFamily& family, int axis,
                               const Rational& alpha, const Rational& lambda) {
    if (axis < 0 || axis >= family.dim()) throw std::invalid_argument("axis out of range");
    if (alpha.sign() <= 0 || lambda.sign() <= 0)
        throw std::invalid_argument("aperture and height must be positive");
    ConeCrossSection cs;
    cs.mode = family.mode();
    cs.axis = axis;
    cs.alpha = alpha;
    cs.lambda = lambda;
    if (family.mode() == FamilyMode::Discrete) {
        for (std::size_t k = 0; k < family.size(); ++k) {
            const Rational& l = family.entry(k).length[axis];
            if (lambda < l) continue;
            Rational radius = alpha * (lambda - l);
            std::int64_t n = family.corner_int(k, axis);
            // |x - n| <= radius on the lattice
            cs.lattice.add(n - radius.floor(), n + radius.floor());
        }
        cs.size = Rational(cs.lattice.count());
    } else {
        std::vector<Interval> parts;
        for (std::size_t k = 0; k < family.size(); ++k) {
            const Rational& l = family.entry(k).length[axis];
            if (lambda < l) continue;
            Rational radius = alpha * (lambda - l);
            const Rational& w = family.entry(k).corner[axis];
            if (radius.sign() > 0)
                parts.push_back({ExactScalar(w - radius), ExactScalar(w + radius)});
        }
        cs.real_parts = IntervalSet(std::move(parts));
        cs.size = cs.real_parts.total_length().as_rational();
    }
    return cs;
}

namespace {

double fit_exponent(const std::vector<ConeVerdict::Probe>& probes) {
    // least squares slope of log(size) against log(lambda), positive sizes only
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& p : probes) {
        if (p.size.sign() <= 0) continue;
        double x = std::log(p.lambda.to_double());
        double y = std::log(p.size.to_double());
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    double denom = n * sxx - sx * sx;
    if (denom == 0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

} // namespace

ConeVerdict condition_verdict(const BoxFamily& family, int axis, const VerdictConfig& config) {
    if (config.alpha_grid.empty() || config.lambda_grid.empty())
        throw std::invalid_argument("verdict grids must be nonempty");
    for (std::size_t i = 1; i < config.alpha_grid.size(); ++i)
        if (!(config.alpha_grid[i - 1] < config.alpha_grid[i]))
            throw std::invalid_argument("alpha grid must be strictly increasing");
    for (std::size_t i = 1; i < config.lambda_grid.size(); ++i)
        if (!(config.lambda_grid[i - 1] < config.lambda_grid[i]))
            throw std::invalid_argument("lambda grid must be strictly increasing");

    ConeVerdict v;
    v.axis = axis;

    // Bounded-lengths detection: the prefix minimum of l_ki is attained again
    // in the tail, i.e. the running minimum has stopped decreasing. Families
    // with liminf l_ki < infinity fall under Remark-2.1 logic: the full
    // cross-sections are infinite for every lambda >= liminf.
    Rational overall_min = family.entry(0).length[axis];
    for (std::size_t k = 1; k < family.size(); ++k)
        if (family.entry(k).length[axis] < overall_min) overall_min = family.entry(k).length[axis];
    Rational tail_min = family.entry(family.size() / 2).length[axis];
    for (std::size_t k = family.size() / 2; k < family.size(); ++k)
        if (family.entry(k).length[axis] < tail_min) tail_min = family.entry(k).length[axis];
    if (tail_min == overall_min) {
        v.verdict = ConeCondition::BoundedLengths;
        return v;
    }

    // Coverage: a probe lambda is fully determined by the prefix only when
    // every entry beyond the prefix has length > lambda.
    auto tail_len = family.tail_min_length(axis);
    if (!tail_len)
        throw InsufficientPrefixError(
            "family tail is unknown (no generator, lengths not monotone); no lambda certifiable");
    v.coverage_lambda = *tail_len;
    const Rational lambda_max = config.lambda_grid.back();
    if (!(lambda_max < *tail_len))
        throw InsufficientPrefixError(
            "lambda grid reaches " + lambda_max.str() + " but the prefix only certifies lambda < " +
            tail_len->str() + "; enlarge K");

    // A pure-linear family keeps a flat ratio while a superlinear one grows
    // like the lambda range itself; on narrow grids the configured blowup
    // thresholds cap at the square root of the probed range so the test still
    // separates the two regimes.
    const double range = (config.lambda_grid.back() / config.lambda_grid.front()).to_double();
    const double fail_blowup = std::min(config.fail_blowup, std::sqrt(range));
    const double holds_blowup = std::min(config.holds_blowup, std::sqrt(range));

    bool any_holds = false, all_fail = true;
    for (const auto& alpha : config.alpha_grid) {
        ConeVerdict::AlphaRow row;
        row.alpha = alpha;
        for (const auto& lambda : config.lambda_grid) {
            ConeCrossSection cs = cross_section(family, axis, alpha, lambda);
            row.probes.push_back({lambda, cs.size, cs.size / lambda});
        }
        row.max_ratio = row.probes.front().ratio;
        for (const auto& p : row.probes)
            if (row.max_ratio < p.ratio) row.max_ratio = p.ratio;
        // blowup relative to the first probe with a positive ratio
        double first = 0.0, last = row.probes.back().ratio.to_double();
        for (const auto& p : row.probes)
            if (p.ratio.sign() > 0) { first = p.ratio.to_double(); break; }
        row.blowup = first > 0 ? last / first : 0.0;
        row.exponent = fit_exponent(row.probes);

        bool holds_here = row.blowup <= holds_blowup && row.exponent <= config.holds_exponent;
        bool fails_here = row.blowup >= fail_blowup && row.exponent >= config.fail_exponent;
        if (holds_here && !any_holds) {
            any_holds = true;
            v.growth_exponent = row.exponent;
        }
        all_fail = all_fail && fails_here;
        v.rows.push_back(std::move(row));
    }

    // least empirical slope bound over the probed apertures
    v.witness_A = v.rows.front().max_ratio;
    v.witness_alpha = v.rows.front().alpha;
    for (const auto& row : v.rows) {
        if (row.max_ratio < v.witness_A) {
            v.witness_A = row.max_ratio;
            v.witness_alpha = row.alpha;
        }
    }

    if (any_holds) {
        v.verdict = ConeCondition::Holds;
    } else if (all_fail) {
        v.verdict = ConeCondition::FailsEmpirically;
        v.growth_exponent = v.rows.front().exponent;
        for (const auto& row : v.rows)
            if (row.exponent < v.growth_exponent) v.growth_exponent = row.exponent;
    } else {
        v.verdict = ConeCondition::Inconclusive;
        v.growth_exponent = v.rows.front().exponent;
    }
    return v;
}

} // namespace movavg
