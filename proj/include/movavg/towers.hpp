#pragma once

#include <cstdint>
#include <vector>

#include "movavg/systems.hpp"
#include "movavg/torus_set.hpp"

namespace movavg {

// Rokhlin tower for a product of irrational circle rotations: the translates
// T^j(base) for exponents j in prod [0, N_i) are pairwise disjoint. Towers
// are plain data; verify_tower re-checks every invariant exactly.
struct DiscreteTower {
    TorusSystem system; // product rotation, m == d
    TorusSet base;      // product of per-axis intervals
    std::vector<std::int64_t> heights;
    ExactScalar coverage; // prod N_i * measure(base), exact
    bool coverage_met = false;
    Rational delta;

    TorusSet level(const std::vector<std::int64_t>& j) const;
};

// Base [0, min_{0<j<N} ||j theta||) on the circle. Coverage below 1 - delta
// is reported via coverage_met (or thrown when require_coverage is set);
// ratio experiments divide out mu(base) and accept any coverage.
DiscreteTower rotation_tower(const ExactScalar& theta, std::int64_t N, const Rational& delta,
                             bool require_coverage = false);

DiscreteTower product_tower(const std::vector<ExactScalar>& thetas,
                            const std::vector<std::int64_t>& heights, const Rational& delta,
                            bool require_coverage = false);

// Explicit flow tower for the canonical suspension: phi(x3, t) = U_t(0,0,x3)
// maps the third-coordinate circle fiber times Q = prod [0, L_i) bijectively
// onto Y = [0, gamma L_1) x ... x [0,1), with mu(Y) = prod(gamma L_i).
struct SuspensionTower {
    TorusSystem system;
    std::vector<Rational> sides; // L_i
    ExactScalar gamma;
    ExactScalar mu_Y;
    bool bijective_certified = false;

    // Exact image {U_t x : x in fiber, t_i in [lo_i, hi_i)} as a torus set;
    // the sub-box must sit inside Q.
    TorusSet level_set(const std::vector<Rational>& lo, const std::vector<Rational>& hi) const;
};

SuspensionTower suspension_tower(const TorusSystem& system, const std::vector<Rational>& sides);

struct TowerReport {
    bool verified = false;
    bool disjoint = false;
    bool injective = false;
    ExactScalar coverage;
    bool has_witness = false;
    std::vector<std::int64_t> witness_a, witness_b; // violating level pair
    std::size_t pairs_checked = 0;
    std::size_t spot_checks = 0;
};

TowerReport verify_tower(const DiscreteTower& tower);
TowerReport verify_tower(const SuspensionTower& tower, std::size_t spot_samples = 10000,
                         std::uint64_t seed = 7);

} // namespace movavg
