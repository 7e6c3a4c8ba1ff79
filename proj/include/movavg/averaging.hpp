#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "movavg/box_family.hpp"
#include "movavg/parallel.hpp"
#include "movavg/systems.hpp"

namespace movavg {

using CVal = std::complex<double>;

// ---------------------------------------------------------------------------
// Discrete averages A_k
// ---------------------------------------------------------------------------

// Arithmetic mean of obs over the lattice translates x + Theta*(n + j),
// j in prod [0, l_i). Direct evaluation; this is the serial reference the
// batch kernel is tested against.
CVal discrete_box_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                          const BoxEntry& box);

// Indicator numerator as an integer (floating-point orbit, integer count).
std::int64_t discrete_box_indicator_count(const TorusSystem& system, const TorusSet& set,
                                          const DPoint& x, const BoxEntry& box);

// Fully exact indicator numerator: exact orbit of an exact point.
std::int64_t exact_box_indicator_count(const TorusSystem& system, const TorusSet& set,
                                       const XPoint& x, const BoxEntry& box);

struct BatchOptions {
    ExecPolicy policy = ExecPolicy::Serial;
    std::size_t max_cells = std::size_t(1) << 23;
};

// Evaluates obs once over the orbit lattice of the family's bounding box,
// builds a d-dimensional summed-area table (compensated long-double sums),
// and reads off every A_k by inclusion-exclusion in O(2^d) per box.
std::vector<CVal> batch_box_averages(const TorusSystem& system, const Observable& obs,
                                     const DPoint& x, const BoxFamily& family,
                                     const BatchOptions& opts = {});

// Same kernel on an exact integer grid: indicator numerators and box volumes.
struct IndicatorBatch {
    std::vector<std::int64_t> counts;
    std::vector<std::int64_t> volumes;
    double average(std::size_t k) const { return double(counts[k]) / double(volumes[k]); }
};
IndicatorBatch batch_indicator_counts(const TorusSystem& system, const TorusSet& set,
                                      const DPoint& x, const BoxFamily& family,
                                      const BatchOptions& opts = {});

// sup over k in [k_lo, k_hi] of the box average of |obs| plus the argmax.
struct MaximalResult {
    double value = 0.0;
    std::size_t argmax = 0;
};
MaximalResult maximal_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                              const BoxFamily& family, std::size_t k_lo, std::size_t k_hi);

// |A_k(A_h f)(x) - A_k f(x)| with the explicit constant of the composition
// bound: defect <= ||f||_inf * D_max / prod(l_k) where D_max is the exact
// maximal boundary-discrepancy count over shifts from the h-box, and
// D_max <= C(n_h, l_h) = 2 * sum_i (|n_hi| + l_hi) * prod_{j != i} l_kj.
struct CompositionDefect {
    double defect = 0.0;          // route A == route B; both evaluated
    double defect_alt = 0.0;      // shifted-window identity route
    double bound = 0.0;           // ||f||_inf * D_max / prod l_k
    double constant_bound = 0.0;  // ||f||_inf * C(n_h, l_h) / prod l_k
    std::int64_t discrepancy_max = 0;
};
CompositionDefect composition_defect(const TorusSystem& system, const Observable& obs,
                                     const DPoint& x, const BoxEntry& hbox, const BoxEntry& kbox);

// ---------------------------------------------------------------------------
// Convergence experiments at a finite prefix
// ---------------------------------------------------------------------------

struct ConvergenceOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    ExecPolicy policy = ExecPolicy::Parallel;
    bool condition_certified = true; // caller ran the cone verdict
    bool override_condition = false; // run anyway to demonstrate failure
    BatchOptions batch;
};

struct ConvergenceReport {
    std::vector<double> deviation;    // per k: sup over samples |A_k f - mu(f)|
    std::vector<std::size_t> argmax;  // per k: sample attaining the sup
    double final_deviation = 0.0;
    double max_deviation = 0.0;
    CVal mu;
    bool condition_overridden = false;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
};

ConvergenceReport convergence_experiment(const TorusSystem& system, const Observable& obs,
                                         const BoxFamily& family, const ConvergenceOptions& opts);

// ---------------------------------------------------------------------------
// Continuous averages R_k
// ---------------------------------------------------------------------------

struct Quadrature {
    double abs_tol = 1e-9;
    std::size_t max_evals = std::size_t(1) << 22;
    int initial_points = 4;
};

struct QuadratureResult {
    CVal value;
    double err_estimate = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

// Composite tensor-product midpoint rule over prod [0, len_i) with dyadic
// refinement until two successive refinements differ by less than abs_tol.
QuadratureResult tensor_midpoint(const std::function<CVal(const std::vector<double>&)>& f,
                                 const std::vector<double>& lengths, const Quadrature& q = {});

// Exact mean over lambda in prod [0, len_i) of chi_S(base + sum lambda_i dir_i)
// on T^m. Supports one or two integration variables (slab and polygon
// slicing); every slice volume is an exact field element.
ExactScalar exact_affine_indicator_mean(const TorusSet& set, const std::vector<ExactScalar>& base,
                                        const std::vector<std::vector<ExactScalar>>& dirs,
                                        const std::vector<ExactScalar>& lens);

enum class ContinuousMethod { ExactIndicator, TensorMidpoint };

struct ContinuousAverage {
    CVal value;
    std::optional<ExactScalar> exact; // set on the exact-indicator path
    QuadratureResult quad;            // set on the quadrature path
};

// Mean of f(U_t x) over t in [w, w + s). The exact-indicator method requires
// an Indicator observable and an exact base point; quadrature handles any
// observable.
ContinuousAverage continuous_box_average(const TorusSystem& system, const Observable& obs,
                                         const XPoint& x, const std::vector<Rational>& w,
                                         const std::vector<Rational>& s, ContinuousMethod method,
                                         const Quadrature& q = {});

// N_B analogue of maximal_average over a continuous family window.
MaximalResult maximal_continuous_average(const TorusSystem& system, const Observable& obs,
                                         const XPoint& x, const BoxFamily& family,
                                         std::size_t k_lo, std::size_t k_hi,
                                         ContinuousMethod method, const Quadrature& q = {});

} // namespace movavg
