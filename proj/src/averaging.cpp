#include "movavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "movavg/rng.hpp"

namespace movavg {

namespace {

struct LatticeGrid {
    std::vector<std::int64_t> lo;   // exponent range [lo, lo + dims) per axis
    std::vector<std::int64_t> dims;
    std::vector<std::size_t> strides;
    std::size_t cells = 1;
};

LatticeGrid bounding_grid(const BoxFamily& family, std::size_t max_cells) {
    const int d = family.dim();
    LatticeGrid g;
    g.lo.assign(std::size_t(d), 0);
    g.dims.assign(std::size_t(d), 0);
    std::vector<std::int64_t> hi(std::size_t(d), 0);
    for (int a = 0; a < d; ++a) {
        std::int64_t lo = family.corner_int(0, a);
        std::int64_t up = lo + family.length_int(0, a);
        for (std::size_t k = 1; k < family.size(); ++k) {
            lo = std::min(lo, family.corner_int(k, a));
            up = std::max(up, family.corner_int(k, a) + family.length_int(k, a));
        }
        g.lo[std::size_t(a)] = lo;
        hi[std::size_t(a)] = up;
    }
    g.strides.assign(std::size_t(d), 1);
    for (int a = 0; a < d; ++a) {
        g.dims[std::size_t(a)] = hi[std::size_t(a)] - g.lo[std::size_t(a)];
        if (g.dims[std::size_t(a)] <= 0) throw std::logic_error("empty bounding grid");
    }
    for (int a = 1; a < d; ++a)
        g.strides[std::size_t(a)] = g.strides[std::size_t(a - 1)] * std::size_t(g.dims[std::size_t(a - 1)]);
    g.cells = g.strides[std::size_t(d - 1)] * std::size_t(g.dims[std::size_t(d - 1)]);
    if (g.cells > max_cells)
        throw std::length_error("bounding box exceeds the configured memory budget");
    return g;
}

void decode(const LatticeGrid& g, std::size_t idx, std::vector<std::int64_t>& out) {
    for (std::size_t a = 0; a < g.dims.size(); ++a) {
        out[a] = g.lo[a] + std::int64_t(idx % std::size_t(g.dims[a]));
        idx /= std::size_t(g.dims[a]);
    }
}

// compensated running sum on long double
struct Kahan {
    long double sum = 0, c = 0;
    void add(long double x) {
        long double y = x - c;
        long double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// in-place inclusive prefix sums along every axis, one axis at a time; each
// line is an independent compensated sum, so the result does not depend on
// the scheduling of lines
template <typename T, typename Add>
void prefix_all_axes(std::vector<T>& data, const LatticeGrid& g, ExecPolicy policy, Add add_line) {
    const int d = int(g.dims.size());
    for (int a = 0; a < d; ++a) {
        const std::size_t stride = g.strides[std::size_t(a)];
        const std::size_t len = std::size_t(g.dims[std::size_t(a)]);
        const std::size_t lines = g.cells / len;
        parallel_for(lines, policy, [&](std::size_t line) {
            // base index of this line: expand `line` over the axes != a
            std::size_t rest = line, base = 0;
            for (int b = 0; b < d; ++b) {
                if (b == a) continue;
                std::size_t dim = std::size_t(g.dims[std::size_t(b)]);
                base += (rest % dim) * g.strides[std::size_t(b)];
                rest /= dim;
            }
            add_line(data, base, stride, len);
        });
    }
}

std::size_t flatten_checked(const LatticeGrid& g, const std::vector<std::int64_t>& coord, bool& valid) {
    std::size_t idx = 0;
    valid = true;
    for (std::size_t a = 0; a < coord.size(); ++a) {
        if (coord[a] < 0) { valid = false; return 0; }
        idx += std::size_t(coord[a]) * g.strides[a];
    }
    return idx;
}

// inclusion-exclusion over the 2^d corners of [a, b)
template <typename T>
T box_sum(const std::vector<T>& sat, const LatticeGrid& g, const std::vector<std::int64_t>& a,
          const std::vector<std::int64_t>& b) {
    const int d = int(g.dims.size());
    T total = 0;
    std::vector<std::int64_t> corner(std::size_t(d), 0);
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        int bits = 0;
        for (int i = 0; i < d; ++i) {
            bool low = mask & (1u << i);
            corner[std::size_t(i)] = (low ? a[std::size_t(i)] : b[std::size_t(i)]) - 1;
            bits += low;
        }
        bool valid;
        std::size_t idx = flatten_checked(g, corner, valid);
        if (!valid) continue;
        if (bits % 2 == 0) total += sat[idx];
        else total -= sat[idx];
    }
    return total;
}

std::vector<std::int64_t> box_coord_lo(const LatticeGrid& g, const BoxFamily& f, std::size_t k) {
    std::vector<std::int64_t> a(g.dims.size());
    for (std::size_t ax = 0; ax < a.size(); ++ax)
        a[ax] = f.corner_int(k, int(ax)) - g.lo[ax];
    return a;
}

} // namespace

CVal discrete_box_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                          const BoxEntry& box) {
    const int d = system.dim_d();
    if (int(box.corner.size()) != d) throw std::invalid_argument("box dimension mismatch");
    std::vector<std::int64_t> j(std::size_t(d), 0);
    std::vector<std::int64_t> len(std::size_t(d), 0);
    std::int64_t total = 1;
    for (int a = 0; a < d; ++a) {
        j[std::size_t(a)] = 0;
        len[std::size_t(a)] = box.length[std::size_t(a)].num();
        total *= len[std::size_t(a)];
    }
    std::vector<std::int64_t> n(std::size_t(d), 0);
    for (int a = 0; a < d; ++a) n[std::size_t(a)] = box.corner[std::size_t(a)].num();

    Kahan re, im;
    std::vector<std::int64_t> e(std::size_t(d), 0);
    for (std::int64_t c = 0; c < total; ++c) {
        for (int a = 0; a < d; ++a) e[std::size_t(a)] = n[std::size_t(a)] + j[std::size_t(a)];
        CVal v = obs.eval(system.act(x, e));
        re.add(v.real());
        im.add(v.imag());
        for (int a = 0; a < d; ++a) {
            if (++j[std::size_t(a)] < len[std::size_t(a)]) break;
            j[std::size_t(a)] = 0;
        }
    }
    return CVal(double(re.sum / (long double)total), double(im.sum / (long double)total));
}

std::int64_t discrete_box_indicator_count(const TorusSystem& system, const TorusSet& set,
                                          const DPoint& x, const BoxEntry& box) {
    const int d = system.dim_d();
    std::vector<std::int64_t> j(std::size_t(d), 0), e(std::size_t(d), 0);
    std::int64_t total = 1, count = 0;
    for (int a = 0; a < d; ++a) total *= box.length[std::size_t(a)].num();
    for (std::int64_t c = 0; c < total; ++c) {
        for (int a = 0; a < d; ++a) e[std::size_t(a)] = box.corner[std::size_t(a)].num() + j[std::size_t(a)];
        if (set.indicator(system.act(x, e))) ++count;
        for (int a = 0; a < d; ++a) {
            if (++j[std::size_t(a)] < box.length[std::size_t(a)].num()) break;
            j[std::size_t(a)] = 0;
        }
    }
    return count;
}

std::int64_t exact_box_indicator_count(const TorusSystem& system, const TorusSet& set,
                                       const XPoint& x, const BoxEntry& box) {
    const int d = system.dim_d();
    std::vector<std::int64_t> j(std::size_t(d), 0), e(std::size_t(d), 0);
    std::int64_t total = 1, count = 0;
    for (int a = 0; a < d; ++a) total *= box.length[std::size_t(a)].num();
    for (std::int64_t c = 0; c < total; ++c) {
        for (int a = 0; a < d; ++a) e[std::size_t(a)] = box.corner[std::size_t(a)].num() + j[std::size_t(a)];
        if (set.contains(system.act(x, e))) ++count;
        for (int a = 0; a < d; ++a) {
            if (++j[std::size_t(a)] < box.length[std::size_t(a)].num()) break;
            j[std::size_t(a)] = 0;
        }
    }
    return count;
}

std::vector<CVal> batch_box_averages(const TorusSystem& system, const Observable& obs,
                                     const DPoint& x, const BoxFamily& family,
                                     const BatchOptions& opts) {
    if (family.mode() != FamilyMode::Discrete)
        throw std::invalid_argument("batch averages need a discrete family");
    LatticeGrid g = bounding_grid(family, opts.max_cells);
    const int d = family.dim();

    std::vector<long double> re(g.cells), im(g.cells);
    parallel_for(g.cells, opts.policy, [&](std::size_t idx) {
        std::vector<std::int64_t> e(std::size_t(d), 0);
        decode(g, idx, e);
        CVal v = obs.eval(system.act(x, e));
        re[idx] = v.real();
        im[idx] = v.imag();
    });

    auto kahan_line = [](std::vector<long double>& data, std::size_t base, std::size_t stride,
                         std::size_t len) {
        Kahan acc;
        for (std::size_t i = 0; i < len; ++i) {
            acc.add(data[base + i * stride]);
            data[base + i * stride] = acc.sum;
        }
    };
    prefix_all_axes(re, g, opts.policy, kahan_line);
    prefix_all_axes(im, g, opts.policy, kahan_line);

    std::vector<CVal> out(family.size());
    parallel_for(family.size(), opts.policy, [&](std::size_t k) {
        auto a = box_coord_lo(g, family, k);
        auto b = a;
        long double vol = 1;
        for (int ax = 0; ax < d; ++ax) {
            b[std::size_t(ax)] += family.length_int(k, ax);
            vol *= (long double)family.length_int(k, ax);
        }
        out[k] = CVal(double(box_sum(re, g, a, b) / vol), double(box_sum(im, g, a, b) / vol));
    });
    return out;
}

IndicatorBatch batch_indicator_counts(const TorusSystem& system, const TorusSet& set,
                                      const DPoint& x, const BoxFamily& family,
                                      const BatchOptions& opts) {
    if (family.mode() != FamilyMode::Discrete)
        throw std::invalid_argument("batch counts need a discrete family");
    LatticeGrid g = bounding_grid(family, opts.max_cells);
    const int d = family.dim();

    std::vector<std::int64_t> grid(g.cells);
    parallel_for(g.cells, opts.policy, [&](std::size_t idx) {
        std::vector<std::int64_t> e(std::size_t(d), 0);
        decode(g, idx, e);
        grid[idx] = set.indicator(system.act(x, e)) ? 1 : 0;
    });
    prefix_all_axes(grid, g, opts.policy,
                    [](std::vector<std::int64_t>& data, std::size_t base, std::size_t stride,
                       std::size_t len) {
                        std::int64_t acc = 0;
                        for (std::size_t i = 0; i < len; ++i) {
                            acc += data[base + i * stride];
                            data[base + i * stride] = acc;
                        }
                    });

    IndicatorBatch out;
    out.counts.resize(family.size());
    out.volumes.resize(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        auto a = box_coord_lo(g, family, k);
        auto b = a;
        std::int64_t vol = 1;
        for (int ax = 0; ax < d; ++ax) {
            b[std::size_t(ax)] += family.length_int(k, ax);
            vol *= family.length_int(k, ax);
        }
        out.counts[k] = box_sum(grid, g, a, b);
        out.volumes[k] = vol;
    }
    return out;
}

MaximalResult maximal_average(const TorusSystem& system, const Observable& obs, const DPoint& x,
                              const BoxFamily& family, std::size_t k_lo, std::size_t k_hi) {
    if (k_lo > k_hi || k_hi >= family.size()) throw std::invalid_argument("empty maximal window");
    MaximalResult r;
    r.argmax = k_lo;
    r.value = -1.0;
    const int d = family.dim();
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const BoxEntry& box = family.entry(k);
        std::vector<std::int64_t> j(std::size_t(d), 0), e(std::size_t(d), 0);
        std::int64_t total = 1;
        for (int a = 0; a < d; ++a) total *= box.length[std::size_t(a)].num();
        Kahan acc;
        for (std::int64_t c = 0; c < total; ++c) {
            for (int a = 0; a < d; ++a)
                e[std::size_t(a)] = box.corner[std::size_t(a)].num() + j[std::size_t(a)];
            acc.add(std::abs(obs.eval(system.act(x, e))));
            for (int a = 0; a < d; ++a) {
                if (++j[std::size_t(a)] < box.length[std::size_t(a)].num()) break;
                j[std::size_t(a)] = 0;
            }
        }
        double v = double(acc.sum / (long double)total);
        if (v > r.value) {
            r.value = v;
            r.argmax = k;
        }
    }
    return r;
}

CompositionDefect composition_defect(const TorusSystem& system, const Observable& obs,
                                     const DPoint& x, const BoxEntry& hbox, const BoxEntry& kbox) {
    const int d = system.dim_d();
    CompositionDefect r;

    std::vector<std::int64_t> j(std::size_t(d), 0), e(std::size_t(d), 0);
    std::int64_t ktotal = 1, htotal = 1;
    for (int a = 0; a < d; ++a) {
        ktotal *= kbox.length[std::size_t(a)].num();
        htotal *= hbox.length[std::size_t(a)].num();
    }

    CVal route_a, route_b, base;
    if (obs.kind() == Observable::Kind::Indicator) {
        // integer numerators make both routes exactly equal rationals
        const TorusSet& set = obs.set();
        std::int64_t num_a = 0, num_b = 0;
        for (std::int64_t c = 0; c < ktotal; ++c) {
            for (int a = 0; a < d; ++a)
                e[std::size_t(a)] = kbox.corner[std::size_t(a)].num() + j[std::size_t(a)];
            num_a += discrete_box_indicator_count(system, set, system.act(x, e), hbox);
            for (int a = 0; a < d; ++a) {
                if (++j[std::size_t(a)] < kbox.length[std::size_t(a)].num()) break;
                j[std::size_t(a)] = 0;
            }
        }
        std::fill(j.begin(), j.end(), 0);
        for (std::int64_t c = 0; c < htotal; ++c) {
            for (int a = 0; a < d; ++a)
                e[std::size_t(a)] = hbox.corner[std::size_t(a)].num() + j[std::size_t(a)];
            num_b += discrete_box_indicator_count(system, set, system.act(x, e), kbox);
            for (int a = 0; a < d; ++a) {
                if (++j[std::size_t(a)] < hbox.length[std::size_t(a)].num()) break;
                j[std::size_t(a)] = 0;
            }
        }
        std::int64_t num_base = discrete_box_indicator_count(system, set, x, kbox);
        Rational composed_a(num_a, ktotal * htotal);
        Rational composed_b(num_b, ktotal * htotal);
        Rational plain(num_base, ktotal);
        route_a = composed_a.to_double();
        route_b = composed_b.to_double();
        base = plain.to_double();
        r.defect = (composed_a - plain).abs().to_double();
        r.defect_alt = (composed_b - plain).abs().to_double();
    } else {
        // route A: naive double sum of A_k(A_h f)
        Kahan re, im;
        for (std::int64_t c = 0; c < ktotal; ++c) {
            for (int a = 0; a < d; ++a)
                e[std::size_t(a)] = kbox.corner[std::size_t(a)].num() + j[std::size_t(a)];
            CVal inner = discrete_box_average(system, obs, system.act(x, e), hbox);
            re.add(inner.real());
            im.add(inner.imag());
            for (int a = 0; a < d; ++a) {
                if (++j[std::size_t(a)] < kbox.length[std::size_t(a)].num()) break;
                j[std::size_t(a)] = 0;
            }
        }
        route_a = CVal(double(re.sum / (long double)ktotal), double(im.sum / (long double)ktotal));

        // route B: shifted-window identity, A_k A_h f = avg_{j in h-box} A_k f(T^{n_h + j} x)
        std::fill(j.begin(), j.end(), 0);
        Kahan re2, im2;
        for (std::int64_t c = 0; c < htotal; ++c) {
            for (int a = 0; a < d; ++a)
                e[std::size_t(a)] = hbox.corner[std::size_t(a)].num() + j[std::size_t(a)];
            CVal shifted = discrete_box_average(system, obs, system.act(x, e), kbox);
            re2.add(shifted.real());
            im2.add(shifted.imag());
            for (int a = 0; a < d; ++a) {
                if (++j[std::size_t(a)] < hbox.length[std::size_t(a)].num()) break;
                j[std::size_t(a)] = 0;
            }
        }
        route_b = CVal(double(re2.sum / (long double)htotal), double(im2.sum / (long double)htotal));

        base = discrete_box_average(system, obs, x, kbox);
        r.defect = std::abs(route_a - base);
        r.defect_alt = std::abs(route_b - base);
    }

    // exact boundary discrepancy: |B_k symdiff (B_k + s)| maximized over the
    // shifts s = n_h + j reachable from the h-box
    auto discrepancy = [&](const std::vector<std::int64_t>& s) {
        std::int64_t inter = 1;
        for (int a = 0; a < d; ++a) {
            std::int64_t l = kbox.length[std::size_t(a)].num();
            std::int64_t keep = l - std::llabs(s[std::size_t(a)]);
            inter *= std::max<std::int64_t>(keep, 0);
        }
        return 2 * (ktotal - inter);
    };
    std::fill(j.begin(), j.end(), 0);
    for (std::int64_t c = 0; c < htotal; ++c) {
        std::vector<std::int64_t> s(std::size_t(d), 0);
        for (int a = 0; a < d; ++a) s[std::size_t(a)] = hbox.corner[std::size_t(a)].num() + j[std::size_t(a)];
        r.discrepancy_max = std::max(r.discrepancy_max, discrepancy(s));
        for (int a = 0; a < d; ++a) {
            if (++j[std::size_t(a)] < hbox.length[std::size_t(a)].num()) break;
            j[std::size_t(a)] = 0;
        }
    }
    double norm = obs.sup_norm();
    r.bound = norm * double(r.discrepancy_max) / double(ktotal);
    // C(n_h, l_h) = 2 sum_i (|n_hi| + l_hi) prod_{j != i} l_kj
    double c_sum = 0;
    for (int i = 0; i < d; ++i) {
        double prod = 1;
        for (int a = 0; a < d; ++a)
            if (a != i) prod *= double(kbox.length[std::size_t(a)].num());
        c_sum += double(std::llabs(hbox.corner[std::size_t(i)].num()) + hbox.length[std::size_t(i)].num()) * prod;
    }
    r.constant_bound = norm * 2.0 * c_sum / double(ktotal);
    return r;
}

ConvergenceReport convergence_experiment(const TorusSystem& system, const Observable& obs,
                                         const BoxFamily& family, const ConvergenceOptions& opts) {
    if (!system.ergodic()) throw std::invalid_argument("convergence experiment needs an ergodic system");
    if (!opts.condition_certified && !opts.override_condition)
        throw std::invalid_argument(
            "family failed the cone condition; pass override_condition to run anyway");

    const std::size_t K = family.size();
    ConvergenceReport rep;
    rep.mu = observable_mean(obs);
    rep.seed = opts.seed;
    rep.samples = opts.samples;
    rep.condition_overridden = opts.override_condition && !opts.condition_certified;

    // sample points drawn up front so the result is independent of scheduling
    SplitMix64 rng(opts.seed);
    std::vector<DPoint> pts(opts.samples);
    for (auto& p : pts) {
        p.resize(std::size_t(system.dim_m()));
        for (auto& c : p) c = rng.uniform();
    }

    std::vector<std::vector<double>> dev(opts.samples);
    BatchOptions batch = opts.batch;
    batch.policy = ExecPolicy::Serial; // parallelism lives at the sample level
    const bool indicator = obs.kind() == Observable::Kind::Indicator;
    parallel_for(opts.samples, opts.policy, [&](std::size_t s) {
        dev[s].resize(K);
        if (indicator) {
            IndicatorBatch b = batch_indicator_counts(system, obs.set(), pts[s], family, batch);
            for (std::size_t k = 0; k < K; ++k)
                dev[s][k] = std::abs(b.average(k) - rep.mu.real());
        } else {
            auto vals = batch_box_averages(system, obs, pts[s], family, batch);
            for (std::size_t k = 0; k < K; ++k) dev[s][k] = std::abs(vals[k] - rep.mu);
        }
    });

    rep.deviation.assign(K, 0.0);
    rep.argmax.assign(K, 0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t s = 0; s < opts.samples; ++s) {
            if (dev[s][k] > rep.deviation[k]) {
                rep.deviation[k] = dev[s][k];
                rep.argmax[k] = s;
            }
        }
        rep.max_deviation = std::max(rep.max_deviation, rep.deviation[k]);
    }
    rep.final_deviation = K > 0 ? rep.deviation.back() : 0.0;
    return rep;
}

QuadratureResult tensor_midpoint(const std::function<CVal(const std::vector<double>&)>& f,
                                 const std::vector<double>& lengths, const Quadrature& q) {
    const std::size_t dims = lengths.size();
    QuadratureResult res;
    CVal prev_mean = 0, prev_extrap = 0;
    int level = 0;
    for (std::size_t n = std::size_t(q.initial_points);; n *= 2) {
        std::size_t total = 1;
        for (std::size_t a = 0; a < dims; ++a) total *= n;
        if (res.evals + total > q.max_evals) {
            res.converged = false;
            return res;
        }
        Kahan re, im;
        std::vector<std::size_t> idx(dims, 0);
        std::vector<double> t(dims);
        for (std::size_t c = 0; c < total; ++c) {
            for (std::size_t a = 0; a < dims; ++a)
                t[a] = (double(idx[a]) + 0.5) / double(n) * lengths[a];
            CVal v = f(t);
            re.add(v.real());
            im.add(v.imag());
            for (std::size_t a = 0; a < dims; ++a) {
                if (++idx[a] < n) break;
                idx[a] = 0;
            }
        }
        res.evals += total;
        CVal mean(double(re.sum / (long double)total), double(im.sum / (long double)total));
        if (level >= 1) {
            // one Richardson level: midpoint error halves its order
            CVal extrap = (4.0 * mean - prev_mean) / 3.0;
            if (level >= 2) {
                res.err_estimate = std::abs(extrap - prev_extrap);
                if (res.err_estimate < q.abs_tol) {
                    res.value = extrap;
                    res.converged = true;
                    return res;
                }
            }
            prev_extrap = extrap;
            res.value = extrap;
        } else {
            res.value = mean;
        }
        prev_mean = mean;
        ++level;
    }
}

namespace {

// lambda-interval set where frac(g0 + slope * lambda) lands in [lo, hi),
// restricted to [0, len)
IntervalSet slice_condition_1d(const ExactScalar& g0, const ExactScalar& slope,
                               const ExactScalar& lo, const ExactScalar& hi,
                               const ExactScalar& len) {
    IntervalSet domain = IntervalSet::single(ExactScalar(0), len);
    if (slope.is_zero()) {
        ExactScalar f = g0.mod1();
        if (lo <= f && f < hi) return domain;
        return IntervalSet();
    }
    ExactScalar g1 = g0 + slope * len;
    ExactScalar gmin = g0 < g1 ? g0 : g1;
    ExactScalar gmax = g0 < g1 ? g1 : g0;
    std::vector<Interval> parts;
    for (std::int64_t n = (gmin - hi).floor_int(); n <= (gmax - lo).floor_int() + 1; ++n) {
        ExactScalar a = (ExactScalar(n) + lo - g0) / slope;
        ExactScalar b = (ExactScalar(n) + hi - g0) / slope;
        if (slope.sign() < 0) std::swap(a, b); // boundary points carry no measure
        parts.push_back({a, b});
    }
    return IntervalSet(std::move(parts)).intersect(domain);
}

using Pt2 = std::array<ExactScalar, 2>;
using Poly = std::vector<Pt2>;

// keep the side a*x + b*y + c >= 0 of a convex polygon
Poly clip_halfplane(const Poly& poly, const ExactScalar& a, const ExactScalar& b,
                    const ExactScalar& c) {
    Poly out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % n];
        ExactScalar fp = a * p[0] + b * p[1] + c;
        ExactScalar fq = a * q[0] + b * q[1] + c;
        int sp = fp.sign(), sq = fq.sign();
        if (sp >= 0) out.push_back(p);
        if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
            ExactScalar t = fp / (fp - fq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

ExactScalar poly_area(const Poly& poly) {
    if (poly.size() < 3) return ExactScalar(0);
    ExactScalar twice(0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % poly.size()];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return twice.abs() / ExactScalar(2);
}

} // namespace

ExactScalar exact_affine_indicator_mean(const TorusSet& set, const std::vector<ExactScalar>& base,
                                        const std::vector<std::vector<ExactScalar>>& dirs,
                                        const std::vector<ExactScalar>& lens) {
    const std::size_t vars = dirs.size();
    const int m = set.dim();
    if (int(base.size()) != m) throw std::invalid_argument("base point dimension mismatch");
    for (const auto& dir : dirs)
        if (int(dir.size()) != m) throw std::invalid_argument("direction dimension mismatch");
    if (vars != lens.size() || vars < 1 || vars > 2)
        throw std::invalid_argument("exact slicing supports one or two integration variables");

    ExactScalar domain_vol(1);
    for (const auto& l : lens) domain_vol *= l;
    if (domain_vol.sign() <= 0) throw std::invalid_argument("empty integration domain");

    auto full_circle = [](const Interval& side) {
        return side.lo.is_zero() && side.hi == ExactScalar(1);
    };

    if (vars == 1) {
        ExactScalar total(0);
        for (const auto& box : set.boxes()) {
            IntervalSet cur = IntervalSet::single(ExactScalar(0), lens[0]);
            for (int a = 0; a < m && !cur.empty(); ++a) {
                if (full_circle(box.sides[std::size_t(a)])) continue;
                IntervalSet cond = slice_condition_1d(base[std::size_t(a)], dirs[0][std::size_t(a)],
                                                      box.sides[std::size_t(a)].lo,
                                                      box.sides[std::size_t(a)].hi, lens[0]);
                cur = cur.intersect(cond);
            }
            total += cur.total_length(); // set boxes are disjoint, so slices are too
        }
        return total / domain_vol;
    }

    // vars == 2: band-and-clip on convex polygons with exact vertices
    Poly rect = {{ExactScalar(0), ExactScalar(0)},
                 {lens[0], ExactScalar(0)},
                 {lens[0], lens[1]},
                 {ExactScalar(0), lens[1]}};
    ExactScalar total(0);
    for (const auto& box : set.boxes()) {
        std::vector<Poly> polys{rect};
        for (int a = 0; a < m && !polys.empty(); ++a) {
            if (full_circle(box.sides[std::size_t(a)])) continue;
            const ExactScalar& g0 = base[std::size_t(a)];
            const ExactScalar& u = dirs[0][std::size_t(a)];
            const ExactScalar& v = dirs[1][std::size_t(a)];
            const ExactScalar& lo = box.sides[std::size_t(a)].lo;
            const ExactScalar& hi = box.sides[std::size_t(a)].hi;
            if (u.is_zero() && v.is_zero()) {
                ExactScalar f = g0.mod1();
                if (!(lo <= f && f < hi)) polys.clear();
                continue;
            }
            std::vector<Poly> next;
            for (const auto& poly : polys) {
                ExactScalar gmin = g0 + u * poly[0][0] + v * poly[0][1];
                ExactScalar gmax = gmin;
                for (const auto& p : poly) {
                    ExactScalar gv = g0 + u * p[0] + v * p[1];
                    if (gv < gmin) gmin = gv;
                    if (gmax < gv) gmax = gv;
                }
                for (std::int64_t n = (gmin - hi).floor_int(); n <= (gmax - lo).floor_int() + 1; ++n) {
                    // keep n + lo <= g < n + hi (boundaries carry no area)
                    Poly piece = clip_halfplane(poly, u, v, g0 - ExactScalar(n) - lo);
                    if (piece.size() < 3) continue;
                    piece = clip_halfplane(piece, -u, -v, ExactScalar(n) + hi - g0);
                    if (piece.size() >= 3) next.push_back(std::move(piece));
                }
            }
            polys = std::move(next);
        }
        for (const auto& poly : polys) total += poly_area(poly);
    }
    return total / domain_vol;
}

ContinuousAverage continuous_box_average(const TorusSystem& system, const Observable& obs,
                                         const XPoint& x, const std::vector<Rational>& w,
                                         const std::vector<Rational>& s, ContinuousMethod method,
                                         const Quadrature& q) {
    if (system.kind() != SystemKind::Suspension)
        throw std::invalid_argument("continuous averages need a flow");
    const int d = system.dim_d();
    if (int(w.size()) != d || int(s.size()) != d)
        throw std::invalid_argument("box dimension mismatch");
    for (const auto& si : s)
        if (si.sign() <= 0) throw std::invalid_argument("box side lengths must be positive");

    ContinuousAverage out;
    if (method == ContinuousMethod::ExactIndicator) {
        if (obs.kind() != Observable::Kind::Indicator)
            throw std::invalid_argument("exact-indicator method needs an indicator observable");
        std::vector<ExactScalar> wx;
        for (const auto& wi : w) wx.push_back(ExactScalar(wi));
        std::vector<ExactScalar> base = system.translation(wx);
        for (int a = 0; a < system.dim_m(); ++a) base[std::size_t(a)] += x[std::size_t(a)];
        std::vector<std::vector<ExactScalar>> dirs;
        for (int i = 0; i < d; ++i) dirs.push_back(system.theta_col(i));
        std::vector<ExactScalar> lens;
        for (const auto& si : s) lens.push_back(ExactScalar(si));
        out.exact = exact_affine_indicator_mean(obs.set(), base, dirs, lens);
        out.value = out.exact->to_double();
        return out;
    }

    DPoint xd;
    for (const auto& c : x) xd.push_back(c.to_double());
    std::vector<double> lens;
    for (const auto& si : s) lens.push_back(si.to_double());
    std::vector<double> wd;
    for (const auto& wi : w) wd.push_back(wi.to_double());
    out.quad = tensor_midpoint(
        [&](const std::vector<double>& t) {
            std::vector<double> shifted(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) shifted[i] = wd[i] + t[i];
            return obs.eval(system.act(xd, shifted));
        },
        lens, q);
    out.value = out.quad.value;
    return out;
}

MaximalResult maximal_continuous_average(const TorusSystem& system, const Observable& obs,
                                         const XPoint& x, const BoxFamily& family,
                                         std::size_t k_lo, std::size_t k_hi,
                                         ContinuousMethod method, const Quadrature& q) {
    if (k_lo > k_hi || k_hi >= family.size()) throw std::invalid_argument("empty maximal window");
    MaximalResult r;
    r.argmax = k_lo;
    r.value = -1.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const BoxEntry& e = family.entry(k);
        double v;
        if (method == ContinuousMethod::ExactIndicator) {
            v = continuous_box_average(system, obs, x, e.corner, e.length, method, q).value.real();
        } else {
            // integrate |f|
            DPoint xd;
            for (const auto& c : x) xd.push_back(c.to_double());
            std::vector<double> lens, wd;
            for (const auto& si : e.length) lens.push_back(si.to_double());
            for (const auto& wi : e.corner) wd.push_back(wi.to_double());
            auto res = tensor_midpoint(
                [&](const std::vector<double>& t) {
                    std::vector<double> shifted(t.size());
                    for (std::size_t i = 0; i < t.size(); ++i) shifted[i] = wd[i] + t[i];
                    return CVal(std::abs(obs.eval(system.act(xd, shifted))), 0.0);
                },
                lens, q);
            v = res.value.real();
        }
        if (v > r.value) {
            r.value = v;
            r.argmax = k;
        }
    }
    return r;
}

} // namespace movavg
