#include "movavg/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "movavg/cone.hpp"
#include "movavg/errors.hpp"
#include "movavg/parallel.hpp"
#include "movavg/rng.hpp"

namespace movavg {

namespace {

Rational det_rational(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m[pivot][c].is_zero()) ++pivot;
        if (pivot == n) return Rational(0);
        if (pivot != c) {
            std::swap(m[pivot], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t cc = c; cc < n; ++cc) m[r][cc] -= f * m[c][cc];
        }
    }
    return det;
}

// Theta * w for a rational vector w, as exact torus coordinates
std::vector<ExactScalar> theta_times(const TorusSystem& system, const std::vector<Rational>& w) {
    std::vector<ExactScalar> t;
    t.reserve(w.size());
    for (const auto& wi : w) t.push_back(ExactScalar(wi));
    return system.translation(t);
}

std::vector<ExactScalar> scale(std::vector<ExactScalar> v, const ExactScalar& f) {
    for (auto& c : v) c *= f;
    return v;
}

std::vector<ExactScalar> add(std::vector<ExactScalar> a, const std::vector<ExactScalar>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

} // namespace

FlatPiece flat_piece(std::vector<Rational> u, std::vector<std::vector<Rational>> V, double vol) {
    FlatPiece piece;
    const int d = int(u.size());
    const int m = int(V.size());
    if (m < 1 || m >= d) throw std::invalid_argument("flat piece needs 1 <= m < d");
    for (const auto& v : V)
        if (int(v.size()) != d) throw std::invalid_argument("direction dimension mismatch");

    // rank of [u | V] must be m + 1
    std::vector<std::vector<Rational>> cols;
    for (int r = 0; r < d; ++r) {
        std::vector<Rational> row;
        row.push_back(u[std::size_t(r)]);
        for (const auto& v : V) row.push_back(v[std::size_t(r)]);
        cols.push_back(std::move(row));
    }
    if (rational_rank(cols) < m + 1)
        throw DependentDirectionsError("offset and directions are linearly dependent");

    // Gram matrix V^T V
    std::vector<std::vector<Rational>> gram(std::size_t(m), std::vector<Rational>(std::size_t(m), Rational(0)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Rational s(0);
            for (int r = 0; r < d; ++r) s += V[std::size_t(i)][std::size_t(r)] * V[std::size_t(j)][std::size_t(r)];
            gram[std::size_t(i)][std::size_t(j)] = s;
        }
    piece.gram_det = det_rational(gram);
    if (piece.gram_det.sign() <= 0) throw DependentDirectionsError("directions are linearly dependent");
    piece.gram_factor = std::sqrt(piece.gram_det.to_double());
    piece.vol_m = vol > 0 ? vol : piece.gram_factor;
    piece.u = std::move(u);
    piece.V = std::move(V);
    return piece;
}

Rational flat_volume_factor_sq(const FlatPiece& piece, const Rational& t) {
    Rational f(1);
    for (int i = 0; i < piece.piece_dim(); ++i) f *= t * t;
    return f * piece.gram_det;
}

FlatAverage dilated_flat_average(const TorusSystem& system, const Observable& obs, const XPoint& x,
                                 const FlatPiece& piece, const Rational& t, FlatPath path,
                                 ContinuousMethod method, const Quadrature& q) {
    if (system.kind() != SystemKind::Suspension)
        throw std::invalid_argument("flat averages need a flow");
    if (system.dim_d() != piece.dim()) throw std::invalid_argument("piece/system dimension mismatch");
    if (t.sign() <= 0) throw std::invalid_argument("dilation parameter must be positive");
    const int m = piece.piece_dim();

    // base point x + Theta(t*u); directions Theta(v_j), scaled per path
    std::vector<Rational> tu = piece.u;
    for (auto& c : tu) c *= t;
    std::vector<ExactScalar> base = add(theta_times(system, tu), x);
    std::vector<std::vector<ExactScalar>> dirs;
    std::vector<ExactScalar> lens;
    for (int j = 0; j < m; ++j) {
        auto dir = theta_times(system, piece.V[std::size_t(j)]);
        if (path == FlatPath::LambdaParam) {
            dirs.push_back(scale(std::move(dir), ExactScalar(t)));
            lens.push_back(ExactScalar(1));
        } else {
            dirs.push_back(std::move(dir));
            lens.push_back(ExactScalar(t));
        }
    }

    FlatAverage out;
    if (method == ContinuousMethod::ExactIndicator) {
        if (obs.kind() != Observable::Kind::Indicator)
            throw std::invalid_argument("exact path needs an indicator observable");
        out.exact = exact_affine_indicator_mean(obs.set(), base, dirs, lens);
        out.value = out.exact->to_double();
        return out;
    }
    // quadrature over the lambda domain
    std::vector<double> lens_d;
    for (const auto& l : lens) lens_d.push_back(l.to_double());
    DPoint base_d;
    for (const auto& c : base) base_d.push_back(c.to_double());
    std::vector<DPoint> dirs_d;
    for (const auto& dir : dirs) {
        DPoint dd;
        for (const auto& c : dir) dd.push_back(c.to_double());
        dirs_d.push_back(std::move(dd));
    }
    out.quad = tensor_midpoint(
        [&](const std::vector<double>& lam) {
            DPoint p = base_d;
            for (std::size_t j = 0; j < lam.size(); ++j)
                for (std::size_t a = 0; a < p.size(); ++a) p[a] += lam[j] * dirs_d[j][a];
            for (auto& c : p) c -= std::floor(c);
            return obs.eval(p);
        },
        lens_d, q);
    out.value = out.quad.value;
    return out;
}

FlatAverage dilated_flat_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                                 const FlatPiece& piece, double t, FlatPath path,
                                 const Quadrature& q) {
    XPoint dummy; // route through the exact-base overload is not possible for
                  // double points; evaluate directly
    if (system.kind() != SystemKind::Suspension)
        throw std::invalid_argument("flat averages need a flow");
    const int m = piece.piece_dim();
    std::vector<double> tu(std::size_t(piece.dim()));
    for (int i = 0; i < piece.dim(); ++i) tu[std::size_t(i)] = piece.u[std::size_t(i)].to_double() * t;
    DPoint base = system.act(x, tu);
    std::vector<DPoint> dirs;
    std::vector<double> lens;
    for (int j = 0; j < m; ++j) {
        std::vector<double> v(std::size_t(piece.dim()));
        for (int i = 0; i < piece.dim(); ++i) v[std::size_t(i)] = piece.V[std::size_t(j)][std::size_t(i)].to_double();
        DPoint origin(std::size_t(system.dim_m()), 0.0);
        DPoint dir = system.act(origin, v); // Theta * v_j mod 1 is fine: only used additively mod 1
        if (path == FlatPath::LambdaParam) {
            for (auto& c : dir) c *= t;
            lens.push_back(1.0);
        } else {
            lens.push_back(t);
        }
        dirs.push_back(std::move(dir));
    }
    FlatAverage out;
    out.quad = tensor_midpoint(
        [&](const std::vector<double>& lam) {
            DPoint p = base;
            for (std::size_t j = 0; j < lam.size(); ++j)
                for (std::size_t a = 0; a < p.size(); ++a) p[a] += lam[j] * dirs[j][a];
            for (auto& c : p) c -= std::floor(c);
            return obs.eval(p);
        },
        lens, q);
    out.value = out.quad.value;
    (void)dummy;
    return out;
}

ReductionReport reduction_check(const TorusSystem& system, const Observable& obs, const XPoint& x,
                                const FlatPiece& piece, const Rational& t, ContinuousMethod method,
                                const Quadrature& q) {
    FlatAverage a = dilated_flat_average(system, obs, x, piece, t, FlatPath::LambdaParam, method, q);
    FlatAverage b = dilated_flat_average(system, obs, x, piece, t, FlatPath::ReindexedBox, method, q);
    ReductionReport rep;
    rep.lambda_side = a.value;
    rep.box_side = b.value;
    rep.difference = std::abs(a.value - b.value);
    if (a.exact && b.exact) {
        rep.exact_equal = *a.exact == *b.exact;
        rep.within_tol = rep.exact_equal;
    } else {
        double tol = 10.0 * (a.quad.err_estimate + b.quad.err_estimate + q.abs_tol);
        rep.within_tol = rep.difference <= tol;
    }
    return rep;
}

LowerBoundReport lower_bound_check(const TorusSystem& system, const TorusSet& set, const XPoint& x,
                                   const FlatPiece& piece, const Rational& t, const Quadrature& q) {
    Observable obs = Observable::indicator(set);
    FlatAverage unit =
        dilated_flat_average(system, obs, x, piece, t, FlatPath::LambdaParam,
                             ContinuousMethod::ExactIndicator, q);
    LowerBoundReport rep;
    double a = unit.value.real();
    rep.scaled_unit_average = piece.gram_factor / piece.vol_m * a;
    // worst case: all manifold mass beyond the flat piece contributes zero
    rep.manifold_average_lower = piece.gram_factor / piece.vol_m * a;
    rep.holds = rep.manifold_average_lower >= rep.scaled_unit_average - 1e-12;
    return rep;
}

GenericityReport genericity_failure_experiment(const GenericityConfig& config) {
    GenericityConfig cfg = config;
    if (cfg.u.empty()) cfg.u = {Rational(1), Rational(0)};
    if (cfg.V.empty()) cfg.V = {{Rational(0), Rational(1)}};
    const int m = int(cfg.V.size());
    if (m < 1 || m > 2)
        throw std::invalid_argument(
            "the explicit tower realizes the experiment for m in {1, 2} (exact slicing handles "
            "one or two integration variables)");
    if (int(cfg.u.size()) != m + 1)
        throw std::invalid_argument("the re-indexed action needs an (m+1)-dimensional offset");
    FlatPiece piece = flat_piece(cfg.u, cfg.V, 0.0);
    piece.vol_m = cfg.vol_factor * piece.gram_factor;

    GenericityReport rep;

    // family B_k = [k-1, k) x [0, k)^m: s_{k1} = 1 stays bounded, the
    // bounded-length route to condition failure
    BoxFamily family = generate_family(GeneratorSpec::parse("flat_slab:m=" + std::to_string(m)), 2048);
    {
        ConeVerdict v = condition_verdict(family, 0);
        if (v.verdict != ConeCondition::BoundedLengths && v.verdict != ConeCondition::FailsEmpirically)
            throw std::logic_error("slab family unexpectedly satisfies the cone condition");
        rep.axis_condition = to_string(v.verdict);
    }

    // choose p (smallest with mu(E) <= eps unless pinned) and the plan
    SweepoutPlan plan;
    std::int64_t p = cfg.p;
    Rational gamma_r;
    for (std::int64_t cand = (cfg.p > 0 ? cfg.p : 1);; ++cand) {
        plan = sweepout_plan(family, 0, cand, /*pad=*/false);
        // the slab axes share L_j = K_p, so one gamma fits them all
        Rational L_rest = plan.L[1];
        gamma_r = cfg.gamma ? *cfg.gamma : Rational(1) / (Rational(3) * L_rest);
        if (cfg.gamma) {
            // a pinned gamma cannot shrink as the plan grows: fail fast
            if (Rational(1) < gamma_r * plan.L[0] || Rational(1) < gamma_r * Rational(3) * L_rest)
                throw TowerDoesNotFitError("gamma = " + gamma_r.str() +
                                           " cannot host the tower sides (L_1 = " +
                                           plan.L[0].str() + ", 3 L_2 = " +
                                           (Rational(3) * L_rest).str() + ")");
        }
        // mu(E) = (4 lambda_p / L_1) mu(Y) = 4 lambda_p gamma prod_j (gamma 3 L_j)
        Rational muE = Rational(4) * plan.lambda_p * gamma_r;
        for (int j = 1; j <= m; ++j) muE *= gamma_r * Rational(3) * plan.L[std::size_t(j)];
        p = cand;
        if (cfg.p > 0 || muE.to_double() <= cfg.eps) break;
        if (cand > 64) throw NoWitnessError("no p <= 64 brings mu(E) below eps");
    }
    rep.p = p;
    rep.lambda_p = plan.lambda_p;
    rep.K_p = plan.K_p;
    rep.gamma = gamma_r;

    // canonical suspension sized to the plan; shear ratios are independent
    // square roots, so the flow is ergodic and aperiodic
    ExactScalar gamma(gamma_r);
    const std::int64_t shear_rads[] = {2, 3, 6};
    std::vector<ExactScalar> shear;
    for (int i = 0; i <= m; ++i) shear.push_back(gamma * ExactScalar::sqrt_of(shear_rads[i]));
    TorusSystem system = TorusSystem::suspension_canonical_n(gamma, shear);
    rep.system_ergodic = system.ergodic();
    rep.system_aperiodic = system.aperiodic();

    std::vector<Rational> sides = {plan.L[0]};
    for (int j = 1; j <= m; ++j) sides.push_back(Rational(3) * plan.L[std::size_t(j)]);
    for (const auto& L : sides) {
        if (Rational(1) < gamma_r * L)
            throw TowerDoesNotFitError("gamma * " + L.str() + " exceeds 1; shrink gamma");
    }
    rep.tower_fits = true;
    SuspensionTower tower = suspension_tower(system, sides);
    ContinuousCounterexample cc = build_continuous_counterexample(plan, tower);
    rep.mu_E = cc.mu_Hp;
    rep.mu_Y = cc.mu_Y;
    rep.mu_E_within_eps = cc.mu_Hp.to_double() <= cfg.eps + 1e-12;
    rep.ratio_bound3_ok = cc.bound3_ok;
    rep.ratio_bound2_ok = cc.bound2_ok;
    rep.E = cc.Hp;
    Observable obs = Observable::indicator(cc.Hp);

    // sample points: seeded rational points (exact slicing keeps the whole
    // scan noise-free) plus exact witnesses in the translated slabs
    SplitMix64 rng(cfg.seed);
    const std::int64_t grid = 1 << 10;
    std::vector<XPoint> points;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        XPoint x;
        for (int a = 0; a < system.dim_m(); ++a)
            x.push_back(ExactScalar(Rational(std::int64_t(rng.below(std::uint64_t(grid))), grid)));
        points.push_back(std::move(x));
    }
    {
        // witnesses U_{(-z,0,...)} y with y in F_p:
        // t = (L_1 - 2 lambda_p, 3/2 L_2, ..., 3/2 L_{m+1})
        std::vector<ExactScalar> tvec = {ExactScalar(plan.L[0] - Rational(2) * plan.lambda_p)};
        for (int j = 1; j <= m; ++j)
            tvec.push_back(ExactScalar(Rational(3, 2) * plan.L[std::size_t(j)]));
        XPoint fiber(std::size_t(system.dim_m()), ExactScalar(0));
        fiber[std::size_t(system.dim_m() - 1)] = ExactScalar(Rational(1, 3));
        XPoint y = system.act(fiber, tvec);
        std::size_t count = std::min<std::size_t>(4, std::size_t(plan.K_p));
        for (std::size_t i = 0; i < count; ++i) {
            Rational z = Rational(std::int64_t(i)) + Rational(1, 2); // interior of Delta
            std::vector<ExactScalar> shift(std::size_t(m + 1), ExactScalar(0));
            shift[0] = ExactScalar(-z);
            points.push_back(system.act(y, shift));
        }
    }

    // t grid: one probe per unit interval [k-1, k), bisection-refined near
    // the threshold
    auto average_at = [&](const XPoint& x, const Rational& t) {
        FlatAverage fa = dilated_flat_average(system, obs, x, piece, t, FlatPath::LambdaParam,
                                              ContinuousMethod::ExactIndicator, cfg.quad);
        return fa;
    };
    const double near = cfg.pass_threshold - 0.05;
    // data-parallel over (point, probe) cells; merged in index order so the
    // report is identical at any thread count
    const std::size_t cells = points.size() * std::size_t(plan.K_p);
    std::vector<GenericityReport::Probe> rows(cells);
    std::exception_ptr scan_error; // exceptions cannot cross the omp region
    parallel_for(cells, ExecPolicy::Parallel, [&](std::size_t cell) {
        try {
        std::size_t s = cell / std::size_t(plan.K_p);
        std::size_t k = cell % std::size_t(plan.K_p) + 1;
        Rational t = Rational(std::int64_t(k)) - Rational(1, 2);
        FlatAverage fa = average_at(points[s], t);
        double v = fa.value.real();
        Rational best_t = t;
        double best_v = v;
        bool best_one = fa.exact && *fa.exact == ExactScalar(1);
        if (v >= near && v < cfg.pass_threshold) {
            // bisection inside [k-1, k) toward a better slice
            Rational lo = Rational(std::int64_t(k) - 1), hi = Rational(std::int64_t(k));
            for (int it = 0; it < 8; ++it) {
                Rational mid = (lo + hi) / Rational(2);
                FlatAverage fm = average_at(points[s], mid);
                if (fm.value.real() > best_v) {
                    best_v = fm.value.real();
                    best_t = mid;
                    best_one = fm.exact && *fm.exact == ExactScalar(1);
                }
                if (fm.value.real() >= cfg.pass_threshold) break;
                // walk toward the probe that looked better
                if (fm.value.real() >= v) lo = mid;
                else hi = mid;
            }
        }
        rows[cell] = GenericityReport::Probe{best_t.to_double(), s, best_v, best_one};
        } catch (...) {
#pragma omp critical
            if (!scan_error) scan_error = std::current_exception();
        }
    });
    if (scan_error) std::rethrow_exception(scan_error);
    for (const auto& row : rows) {
        rep.rows.push_back(row);
        if (row.average >= cfg.pass_threshold) rep.hits.push_back(row);
        if (row.average > rep.best_average) {
            rep.best_average = row.average;
            rep.best_t = row.t;
        }
    }

    rep.lower_bound = piece.gram_factor / piece.vol_m * rep.best_average;
    rep.contradiction = !rep.hits.empty() &&
                        rep.lower_bound >= rep.mu_E.to_double() + cfg.margin &&
                        rep.mu_E_within_eps;
    rep.no_oscillation_found = rep.hits.empty();
    return rep;
}

} // namespace movavg
