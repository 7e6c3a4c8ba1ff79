#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "movavg/averaging.hpp"
#include "movavg/box_family.hpp"
#include "movavg/interval_set.hpp"
#include "movavg/systems.hpp"
#include "movavg/towers.hpp"

namespace movavg {

// Counterexample data for the strong-sweeping-out construction: the height
// lambda_p whose cross-section beats p*(4*lambda_p+1) (discrete) or
// p*4*lambda_p (continuous), the prefix cutoff K_p, the materialized
// cross-section Delta, and the tower heights derived from them.
struct SweepoutPlan {
    FamilyMode mode = FamilyMode::Discrete;
    int dim = 1;
    int axis = 0;
    std::int64_t p = 1;
    Rational alpha{1}; // the construction fixes alpha = 1
    Rational lambda_p;
    std::size_t K_p = 0;
    IntIntervalSet delta_int; // discrete Delta
    IntervalSet delta_real;   // continuous Delta
    Rational delta_size;      // count resp. Lebesgue measure
    Rational delta_sup;
    std::vector<std::int64_t> N; // discrete heights N_1..N_d
    std::vector<Rational> L;     // continuous heights L_1..L_d
    bool pad = true;
    BoxFamily family{FamilyMode::Discrete, 1}; // the K_p-prefix that witnesses Delta

    // witness index k (0-based entry) for each z in Delta, discrete mode
    std::vector<std::pair<std::int64_t, std::size_t>> witnesses;
};

// Searches an ascending lambda grid for the smallest height whose
// cross-section at alpha = 1 meets the size threshold, then the smallest
// prefix cutoff K_p realizing it. Throws NoWitnessError when the prefix
// cannot certify the threshold anywhere on the grid.
SweepoutPlan sweepout_plan(const BoxFamily& family, int axis, std::int64_t p, bool pad = true,
                           std::vector<Rational> lambda_grid = {});

// ---------------------------------------------------------------------------
// Discrete construction
// ---------------------------------------------------------------------------

struct CounterexampleSets {
    TorusSet Hp, Fp;
    ExactScalar mu_Hp, mu_Fp, mu_base;
    bool measure_identity_ok = false; // mu(H_p) == 3^{d-1} (4 lambda_p + 1) N_2..N_d mu(B)
};

// H_p = tower levels j_1 in [N_1 - 4 lambda_p - 1, N_1 - 1] (all other axes
// full), F_p = the slab j_1 = N_1 - 2 lambda_p - 1, j_m in [N_m, 2 N_m).
// The tower must carry heights (N_1, 3 N_2, ..., 3 N_d) and be verified.
CounterexampleSets build_counterexample_set(const SweepoutPlan& plan, const DiscreteTower& tower);

struct RatioCheckOptions {
    double eps = 0.05;
    std::size_t samples = 20000;
    std::uint64_t seed = 11;
    bool exact_containment = true; // verify A_k chi = 1 on every translate, set-exactly
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct RatioReport {
    ExactScalar mu_Hp, mu_union;
    ExactScalar ratio;       // mu(union of T^{-z} F_p) / mu(H_p), exact
    Rational bound;          // p / 3^{d-1}
    bool ratio_ok = false;   // ratio >= bound
    bool translates_disjoint = false;
    bool containment_ok = false;     // every translated box orbit lands in H_p
    double sampled_maximal_fraction = 0.0; // empirical mu(M_B chi_{H_p} > 1-eps)
    bool sampling_consistent = false;      // mu_union <= fraction + 1e-2
};

RatioReport ratio_check(const SweepoutPlan& plan, const CounterexampleSets& sets,
                        const DiscreteTower& tower, const RatioCheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Oscillation scan
// ---------------------------------------------------------------------------

struct OscillationOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 13;
    double eps = 0.05;
    std::size_t k_lo = 0, k_hi = 0; // entry index window (0-based, inclusive)
    std::size_t plan_window_end = 0; // last entry index covered by the plan
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct OscillationReport {
    double set_measure = 0.0;
    double frac_max_above = 0.0; // samples with max_k A_k >= 1 - eps
    double frac_min_below = 0.0; // samples with min_k A_k <= eps
    double best_max = 0.0, best_min = 1.0;
    struct Witness {
        bool attains_one_exactly = false;
        std::size_t k_at_one = 0;
        bool tail_below_eps = false; // all A_k <= eps for k beyond the plan window
        double tail_max = 0.0;
    };
    std::vector<Witness> witnesses;
};

// Scans A_k chi_set along the window for seeded samples plus optional exact
// witness points (evaluated with exact orbit membership).
OscillationReport oscillation_scan(const TorusSystem& system, const TorusSet& set,
                                   const BoxFamily& family, const OscillationOptions& opts,
                                   const std::vector<XPoint>& exact_witnesses = {});

// Exact points in the translated slabs T^{-z} F_p, one per member of Delta
// (up to `limit`), tagged with the witnessing entry index.
std::vector<std::pair<XPoint, std::size_t>> sweepout_witness_points(const SweepoutPlan& plan,
                                                                    const CounterexampleSets& sets,
                                                                    const DiscreteTower& tower,
                                                                    std::size_t limit = 64);

// ---------------------------------------------------------------------------
// Continuous construction (suspension tower)
// ---------------------------------------------------------------------------

struct ContinuousCounterexample {
    TorusSet Hp;
    ExactScalar mu_Hp, mu_Y;
    bool measure_identity_ok = false; // mu(H_p) == (4 lambda_p / L_1) mu(Y)
    ExactScalar mu_union;             // mu( union of U_{(-z,0,..)} F_p )
    ExactScalar ratio;                // mu_union / mu_Hp
    bool bound3_ok = false;           // ratio >= p / 3^{d-1}
    bool bound2_ok = false;           // ratio >= p / 2^{d-1} (the sharper constant)
};

// Builds H_p from Q_p = [L_1 - 4 lambda_p, L_1) x prod [0, 3 L_j) and checks
// both printed ratio constants against the exact translate-union measure.
ContinuousCounterexample build_continuous_counterexample(const SweepoutPlan& plan,
                                                         const SuspensionTower& tower);

} // namespace movavg
