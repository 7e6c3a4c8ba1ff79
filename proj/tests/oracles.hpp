#pragma once

// Independent oracles the unit and acceptance suites check the library
// against. Everything here recomputes expected values from definitions,
// bypassing the production code paths (merged intervals, summed-area tables,
// exact slicing).

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "movavg/box_family.hpp"
#include "movavg/rng.hpp"
#include "movavg/systems.hpp"

namespace oracles {

using movavg::BoxFamily;
using movavg::Rational;

// #{ x in Z : |x - n_ki| <= alpha (lambda - l_ki) for some k } by scanning
// every integer in the enclosing range against the defining inequality.
inline std::int64_t brute_cross_section_count(const BoxFamily& f, int axis, const Rational& alpha,
                                              const Rational& lambda) {
    std::int64_t lo = 0, hi = 0;
    bool any = false;
    std::vector<std::pair<std::int64_t, Rational>> entries; // (n, radius)
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Rational& l = f.entry(k).length[std::size_t(axis)];
        if (lambda < l) continue;
        Rational radius = alpha * (lambda - l);
        std::int64_t n = f.corner_int(k, axis);
        entries.push_back({n, radius});
        std::int64_t a = n - radius.floor() - 1, b = n + radius.floor() + 1;
        if (!any) { lo = a; hi = b; any = true; }
        else { lo = std::min(lo, a); hi = std::max(hi, b); }
    }
    if (!any) return 0;
    // cross-multiplied integer comparison |x - n| * den <= num
    std::vector<std::int64_t> nums, dens, ns;
    for (const auto& [n, radius] : entries) {
        ns.push_back(n);
        nums.push_back(radius.num());
        dens.push_back(radius.den());
    }
    std::int64_t count = 0;
    for (std::int64_t x = lo; x <= hi; ++x) {
        for (std::size_t i = 0; i < ns.size(); ++i) {
            std::int64_t dx = x >= ns[i] ? x - ns[i] : ns[i] - x;
            if (dx * dens[i] <= nums[i]) { ++count; break; }
        }
    }
    return count;
}

// Lebesgue measure of the continuous cross-section by uniform grid counting.
inline double grid_cross_section_length(const BoxFamily& f, int axis, const Rational& alpha,
                                        const Rational& lambda, std::size_t points) {
    double lo = 1e300, hi = -1e300;
    std::vector<std::pair<double, double>> entries;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Rational& l = f.entry(k).length[std::size_t(axis)];
        if (lambda < l) continue;
        double radius = (alpha * (lambda - l)).to_double();
        double w = f.entry(k).corner[std::size_t(axis)].to_double();
        entries.push_back({w, radius});
        lo = std::min(lo, w - radius);
        hi = std::max(hi, w + radius);
    }
    if (entries.empty()) return 0.0;
    lo -= 1.0;
    hi += 1.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < points; ++i) {
        double x = lo + (hi - lo) * (double(i) + 0.5) / double(points);
        for (const auto& [w, radius] : entries) {
            if (std::abs(x - w) <= radius) { ++inside; break; }
        }
    }
    return (hi - lo) * double(inside) / double(points);
}

// Geometric-series closed form of the d = 1 character box average:
// (1/l) sum_{j=0}^{l-1} e^{2 pi i xi (x + (n+j) theta)}.
inline std::complex<double> character_box_average(double theta, std::int64_t xi, double x,
                                                  std::int64_t n, std::int64_t l) {
    const double tau = 2.0 * std::numbers::pi;
    std::complex<double> q = std::polar(1.0, tau * double(xi) * theta);
    std::complex<double> first = std::polar(1.0, tau * double(xi) * (x + double(n) * theta));
    if (std::abs(q - 1.0) < 1e-15) return first;
    return first * (std::pow(q, double(l)) - 1.0) / (double(l) * (q - 1.0));
}

// Separable oscillatory closed form of the continuous character average over
// [w, w+s): e^{2 pi i xi.(x + Theta w)} prod_i (e^{2 pi i c_i s_i} - 1) /
// (2 pi i c_i s_i) with c_i = xi . Theta_col_i.
inline std::complex<double> character_flow_average(const movavg::TorusSystem& sys,
                                                   const std::vector<std::int64_t>& xi,
                                                   const movavg::DPoint& x,
                                                   const std::vector<double>& w,
                                                   const std::vector<double>& s) {
    const double tau = 2.0 * std::numbers::pi;
    double phase = 0;
    for (std::size_t a = 0; a < x.size(); ++a) phase += double(xi[a]) * x[a];
    for (int i = 0; i < sys.dim_d(); ++i) {
        double ci = 0;
        for (int a = 0; a < sys.dim_m(); ++a)
            ci += double(xi[std::size_t(a)]) * sys.theta_col_d(i)[std::size_t(a)];
        phase += ci * w[std::size_t(i)];
    }
    std::complex<double> out = std::polar(1.0, tau * phase);
    for (int i = 0; i < sys.dim_d(); ++i) {
        double ci = 0;
        for (int a = 0; a < sys.dim_m(); ++a)
            ci += double(xi[std::size_t(a)]) * sys.theta_col_d(i)[std::size_t(a)];
        std::complex<double> num = std::polar(1.0, tau * ci * s[std::size_t(i)]) - 1.0;
        std::complex<double> den(0.0, tau * ci * s[std::size_t(i)]);
        out *= num / den; // caller guarantees c_i != 0
    }
    return out;
}

// Random discrete family with corners in [-span, span] and lengths in
// [1, max_len], d axes.
inline BoxFamily random_family(movavg::SplitMix64& rng, int d, std::size_t K, std::int64_t span,
                               std::int64_t max_len) {
    BoxFamily f(movavg::FamilyMode::Discrete, d);
    for (std::size_t k = 0; k < K; ++k) {
        movavg::BoxEntry e;
        for (int a = 0; a < d; ++a) {
            e.corner.push_back(Rational(std::int64_t(rng.below(std::uint64_t(2 * span + 1))) - span));
            e.length.push_back(Rational(1 + std::int64_t(rng.below(std::uint64_t(max_len)))));
        }
        f.append(std::move(e));
    }
    return f;
}

} // namespace oracles
