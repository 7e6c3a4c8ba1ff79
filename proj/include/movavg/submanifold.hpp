#pragma once

#include <cstdint>
#include <vector>

#include "movavg/averaging.hpp"
#include "movavg/sweepout.hpp"
#include "movavg/systems.hpp"
#include "movavg/towers.hpp"

namespace movavg {

// Flat piece U = { u + sum lambda_i v_i : lambda in (0,1)^m } of an
// m-dimensional submanifold of R^d; u, v_1..v_m linearly independent so the
// affine span misses the origin.
struct FlatPiece {
    std::vector<Rational> u;              // offset, d-vector
    std::vector<std::vector<Rational>> V; // m direction columns, d-vectors
    Rational gram_det;                    // det(V^T V), exact
    double gram_factor = 0.0;             // sqrt(gram_det)
    double vol_m = 0.0;                   // vol_m(M); defaults to gram_factor

    int dim() const { return int(u.size()); }
    int piece_dim() const { return int(V.size()); }
};

// Validates independence (rank of [u | V] must be m + 1) and computes the
// Gram factor. vol <= 0 selects the default M = closure of U.
FlatPiece flat_piece(std::vector<Rational> u, std::vector<std::vector<Rational>> V,
                     double vol = 0.0);

struct DependentDirectionsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact volume scale of the dilate: the lambda-parametrized integral of 1
// over tU is t^m * sqrt(det(V^T V)). Returned squared to stay rational.
Rational flat_volume_factor_sq(const FlatPiece& piece, const Rational& t);

enum class FlatPath {
    LambdaParam,  // mean over (0,1)^m in the lambda parametrization
    ReindexedBox, // (1/t^m) integral over (0,t)^m under the re-indexed action
};

struct FlatAverage {
    CVal value;
    std::optional<ExactScalar> exact;
    QuadratureResult quad;
};

// Normalized average of obs over the dilated flat piece t*U through the flow:
// both sides of the change-of-variables identity are exposed as paths.
FlatAverage dilated_flat_average(const TorusSystem& system, const Observable& obs, const XPoint& x,
                                 const FlatPiece& piece, const Rational& t, FlatPath path,
                                 ContinuousMethod method, const Quadrature& q = {});
// sampling variant (quadrature only)
FlatAverage dilated_flat_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                                 const FlatPiece& piece, double t, FlatPath path,
                                 const Quadrature& q = {});

struct ReductionReport {
    CVal lambda_side, box_side;
    double difference = 0.0;
    bool exact_equal = false; // set when both sides ran the exact path
    bool within_tol = false;
};

// Checks the unit-cube parametrization against the (0,t)^m box average under
// the re-indexed action; exact equality on the indicator path.
ReductionReport reduction_check(const TorusSystem& system, const Observable& obs, const XPoint& x,
                                const FlatPiece& piece, const Rational& t, ContinuousMethod method,
                                const Quadrature& q = {});

struct LowerBoundReport {
    double manifold_average_lower = 0.0; // worst-case full-manifold average
    double scaled_unit_average = 0.0;    // (gram / vol_m) * unit-cube average
    bool holds = false;
};

// The inequality chain bounding the full-manifold normalized average from
// below by (gram / vol_m(M)) times the unit-cube average of the indicator.
LowerBoundReport lower_bound_check(const TorusSystem& system, const TorusSet& set, const XPoint& x,
                                   const FlatPiece& piece, const Rational& t,
                                   const Quadrature& q = {});

// ---------------------------------------------------------------------------
// Genericity failure experiment
// ---------------------------------------------------------------------------

struct GenericityConfig {
    std::vector<Rational> u;              // ambient offset, d = m + 1 (default (1,0))
    std::vector<std::vector<Rational>> V; // defaults to ((0,1))
    double eps = 0.1;                     // target mu(E_eps)
    std::int64_t p = 0;                   // 0: smallest p with mu(E) <= eps
    std::size_t samples = 8;
    std::uint64_t seed = 17;
    double pass_threshold = 0.97 - 0.02; // 97/100 minus quadrature tolerance
    double margin = 0.5;                 // contradiction margin over mu(E)
    double vol_factor = 1.0;             // vol_m(M) = vol_factor * gram
    std::optional<Rational> gamma;       // override; default sized so the tower fits
    Quadrature quad;
};

struct GenericityReport {
    std::string axis_condition; // cone verdict of the slab family on axis 1
    std::int64_t p = 0;
    Rational lambda_p;
    std::size_t K_p = 0;
    Rational gamma;
    TorusSet E{0}; // E_eps = H_p, exact
    ExactScalar mu_E;
    ExactScalar mu_Y;
    bool mu_E_within_eps = false;
    bool tower_fits = false;
    bool system_ergodic = false, system_aperiodic = false;
    bool ratio_bound3_ok = false, ratio_bound2_ok = false;

    struct Probe {
        double t;
        std::size_t sample; // index; witnesses come after the random samples
        double average;
        bool exact_one = false; // exact slicing certified average == 1
    };
    std::vector<Probe> rows; // full (t, sample, average) scan
    std::vector<Probe> hits; // rows above the pass threshold
    double best_average = 0.0;
    double best_t = 0.0;
    double lower_bound = 0.0; // (gram / vol) * best average
    bool contradiction = false;
    bool no_oscillation_found = false;
};

// Builds the continuous sweepout plan for [k-1,k) x [0,k)^m, realizes
// E_eps = H_p on a canonical suspension sized so the explicit tower fits,
// and scans dilation parameters for flat averages near 1 while mu(E_eps)
// stays small.
GenericityReport genericity_failure_experiment(const GenericityConfig& config);

} // namespace movavg
