#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "movavg/exact_scalar.hpp"
#include "movavg/torus_set.hpp"

namespace movavg {

enum class SystemKind { Discrete, Suspension };

// Measure-preserving system on the torus T^m with exact translation data:
// either d commuting rotations (Z^d action, exponent j acts by x + Theta*j)
// or a d-dimensional suspension-style translation flow (x + Theta*t).
// Ergodicity and aperiodicity are certified symbolically at construction by
// exact rank computations on the radical coordinates of Theta.
class TorusSystem {
public:
    static TorusSystem discrete(int m, std::vector<std::vector<ExactScalar>> theta_cols);
    // Product of circle rotations: m = d, Theta diagonal.
    static TorusSystem product_rotation(const std::vector<ExactScalar>& angles);
    // Canonical T^3 suspension of an R^2 flow: Theta = [[g,0],[0,g],[a,b]].
    static TorusSystem suspension_canonical(const ExactScalar& gamma, const ExactScalar& a,
                                            const ExactScalar& b);
    // Canonical T^(d+1) suspension: gamma on the diagonal, shear row below.
    static TorusSystem suspension_canonical_n(const ExactScalar& gamma,
                                              const std::vector<ExactScalar>& shear);
    static TorusSystem suspension(int m, std::vector<std::vector<ExactScalar>> theta_cols);

    SystemKind kind() const { return kind_; }
    int dim_d() const { return d_; }
    int dim_m() const { return m_; }
    bool ergodic() const { return ergodic_; }
    bool aperiodic() const { return aperiodic_; }

    const std::vector<ExactScalar>& theta_col(int i) const { return cols_[i]; }
    const std::vector<double>& theta_col_d(int i) const { return cols_d_[i]; }

    // x + Theta * j mod 1 (discrete exponents)
    XPoint act(const XPoint& x, const std::vector<std::int64_t>& j) const;
    DPoint act(const DPoint& x, const std::vector<std::int64_t>& j) const;
    // x + Theta * t mod 1 (real exponents; exact when t is exact)
    XPoint act(const XPoint& x, const std::vector<ExactScalar>& t) const;
    DPoint act(const DPoint& x, const std::vector<double>& t) const;

    // Translation vector Theta * t as exact coordinates.
    std::vector<ExactScalar> translation(const std::vector<ExactScalar>& t) const;
    std::vector<ExactScalar> translation(const std::vector<std::int64_t>& j) const;

    TorusSystem() = default; // empty system; fill via the named constructors

private:
    void finish_construction();

    SystemKind kind_ = SystemKind::Discrete;
    int d_ = 0, m_ = 0;
    std::vector<std::vector<ExactScalar>> cols_; // d columns, each of length m
    std::vector<std::vector<double>> cols_d_;
    bool ergodic_ = false, aperiodic_ = false;
};

// f in L^1: a torus character, a box-set indicator, or a trigonometric
// polynomial (finite character sum).
class Observable {
public:
    enum class Kind { Character, Indicator, TrigPoly };

    static Observable character(std::vector<std::int64_t> xi);
    static Observable indicator(TorusSet set);
    static Observable trig_poly(std::vector<std::pair<std::vector<std::int64_t>, std::complex<double>>> terms);

    Kind kind() const { return kind_; }
    const std::vector<std::int64_t>& xi() const { return xi_; }
    const TorusSet& set() const { return set_; }
    const auto& terms() const { return terms_; }

    std::complex<double> eval(const DPoint& x) const;
    bool bounded() const { return true; } // all supported variants are bounded
    double sup_norm() const;

private:
    Kind kind_ = Kind::Character;
    std::vector<std::int64_t> xi_;
    TorusSet set_{0};
    std::vector<std::pair<std::vector<std::int64_t>, std::complex<double>>> terms_;
};

// mu(f): 0 for a nonzero character, 1 for xi = 0, the exact measure for an
// indicator, the constant coefficient for a trigonometric polynomial.
std::complex<double> observable_mean(const Observable& obs);
ExactScalar observable_mean_exact(const Observable& obs); // Indicator only

ExactScalar set_measure(const TorusSet& set);

// Exact rank of a rational matrix (Gaussian elimination); shared by the
// certification routines and the tests.
int rational_rank(std::vector<std::vector<Rational>> m);

} // namespace movavg
