#pragma once

#include <vector>

#include "movavg/box_family.hpp"
#include "movavg/interval_set.hpp"

namespace movavg {

// Horizontal cross-section at height lambda of the union of aperture-alpha
// cones above the axis-i pairs (n_k, l_k): { x : |x - n_k| <= alpha*(lambda - l_k) }.
struct ConeCrossSection {
    FamilyMode mode;
    int axis = 0;
    Rational alpha, lambda;
    IntIntervalSet lattice; // discrete mode
    IntervalSet real_parts; // continuous mode
    Rational size;          // lattice count, or exact total length
};

ConeCrossSection cross_section(const BoxFamily& family, int axis,
                               const Rational& alpha, const Rational& lambda);

enum class ConeCondition { Holds, FailsEmpirically, BoundedLengths, Inconclusive };

const char* to_string(ConeCondition c);

struct VerdictConfig {
    std::vector<Rational> alpha_grid = {Rational(1, 4), Rational(1, 2), Rational(1),
                                        Rational(2), Rational(4)};
    std::vector<Rational> lambda_grid; // default: geometric, ratio 2, 1..512
    double fail_blowup = 8.0;     // ratio at lambda_max vs lambda_min
    double fail_exponent = 1.2;   // fitted slope of log size vs log lambda
    double holds_blowup = 4.0;
    double holds_exponent = 1.1;
    VerdictConfig();
};

struct ConeVerdict {
    struct Probe {
        Rational lambda;
        Rational size;
        Rational ratio; // size / lambda
    };
    struct AlphaRow {
        Rational alpha;
        std::vector<Probe> probes;
        Rational max_ratio;
        double blowup = 0.0;   // ratio(lambda_max) / ratio(lambda_min)
        double exponent = 0.0; // least-squares slope of log size vs log lambda
    };

    ConeCondition verdict = ConeCondition::Inconclusive;
    int axis = 0;
    Rational witness_A;     // least empirical slope bound over the alpha grid
    Rational witness_alpha; // alpha attaining it
    double growth_exponent = 0.0;
    std::vector<AlphaRow> rows;
    Rational coverage_lambda; // largest lambda the prefix certifies
};

// Empirical decision of the cone condition on `axis` over the given grids.
// Throws InsufficientPrefixError when the lambda grid probes beyond what the
// prefix can certify (the verdict would be Inconclusive by construction).
ConeVerdict condition_verdict(const BoxFamily& family, int axis,
                              const VerdictConfig& config = VerdictConfig());

} // namespace movavg
