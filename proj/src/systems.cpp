#include "movavg/systems.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "movavg/errors.hpp"

namespace movavg {

namespace {

double wrap01(double x) {
    double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0;
}

// Radical coordinates of a field element with respect to a fixed radicand
// list. Coordinates are rational; the rational part itself is excluded or
// included by the caller.
std::vector<std::int64_t> collect_radicands(const std::vector<std::vector<ExactScalar>>& cols) {
    std::vector<std::int64_t> rads;
    auto push = [&](std::int64_t r) {
        if (r == 0) return;
        for (auto e : rads)
            if (e == r) return;
        rads.push_back(r);
    };
    for (const auto& col : cols)
        for (const auto& v : col) {
            push(v.rad1());
            if (v.rad2() != 0) {
                push(v.rad2());
                std::int64_t g = std::gcd(v.rad1(), v.rad2());
                push((v.rad1() / g) * (v.rad2() / g));
            }
        }
    return rads;
}

std::vector<Rational> radical_coords(const ExactScalar& v, const std::vector<std::int64_t>& rads) {
    std::vector<Rational> out;
    out.reserve(rads.size());
    for (auto r : rads) {
        if (v.rad1() == r) out.push_back(v.coeff1());
        else if (v.rad2() == r) out.push_back(v.coeff2());
        else if (v.rad2() != 0 &&
                 (v.rad1() / std::gcd(v.rad1(), v.rad2())) * (v.rad2() / std::gcd(v.rad1(), v.rad2())) == r)
            out.push_back(v.coeff3());
        else out.push_back(Rational(0));
    }
    return out;
}

} // namespace

int rational_rank(std::vector<std::vector<Rational>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
        std::size_t pivot = row;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[row], m[pivot]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (m[r][c].is_zero()) continue;
            Rational f = m[r][c] / m[row][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[r][cc] -= f * m[row][cc];
        }
        ++row;
        ++rank;
    }
    return rank;
}

TorusSystem TorusSystem::discrete(int m, std::vector<std::vector<ExactScalar>> theta_cols) {
    TorusSystem s;
    s.kind_ = SystemKind::Discrete;
    s.m_ = m;
    s.d_ = int(theta_cols.size());
    s.cols_ = std::move(theta_cols);
    for (const auto& col : s.cols_)
        if (int(col.size()) != m) throw std::invalid_argument("theta column dimension mismatch");

    auto rads = collect_radicands(s.cols_);

    // Ergodic <=> no nonzero xi in Z^m with xi . theta_i in Z for all i.
    // Killing all radical parts already forces xi = 0 exactly when the
    // radical coordinate matrix (rows: generator x radicand, cols: xi) has
    // rank m; otherwise a primitive kernel vector scales to a violation.
    {
        std::vector<std::vector<Rational>> mat;
        for (const auto& col : s.cols_) {
            for (std::size_t ri = 0; ri < rads.size(); ++ri) {
                std::vector<Rational> rowv(std::size_t(m), Rational(0));
                for (int j = 0; j < m; ++j) rowv[std::size_t(j)] = radical_coords(col[std::size_t(j)], rads)[ri];
                mat.push_back(std::move(rowv));
            }
        }
        s.ergodic_ = rational_rank(std::move(mat)) == m;
    }
    // Aperiodic <=> no nonzero j in Z^d with Theta*j in Z^m; same rank
    // criterion with the roles of rows and columns exchanged.
    {
        std::vector<std::vector<Rational>> mat;
        for (int a = 0; a < m; ++a) {
            for (std::size_t ri = 0; ri < rads.size(); ++ri) {
                std::vector<Rational> rowv(std::size_t(s.d_), Rational(0));
                for (int i = 0; i < s.d_; ++i)
                    rowv[std::size_t(i)] = radical_coords(s.cols_[std::size_t(i)][std::size_t(a)], rads)[ri];
                mat.push_back(std::move(rowv));
            }
        }
        s.aperiodic_ = rational_rank(std::move(mat)) == s.d_;
    }
    s.finish_construction();
    return s;
}

TorusSystem TorusSystem::product_rotation(const std::vector<ExactScalar>& angles) {
    int m = int(angles.size());
    std::vector<std::vector<ExactScalar>> cols;
    for (int i = 0; i < m; ++i) {
        std::vector<ExactScalar> col(std::size_t(m), ExactScalar(0));
        col[std::size_t(i)] = angles[std::size_t(i)];
        cols.push_back(std::move(col));
    }
    return discrete(m, std::move(cols));
}

TorusSystem TorusSystem::suspension(int m, std::vector<std::vector<ExactScalar>> theta_cols) {
    TorusSystem s;
    s.kind_ = SystemKind::Suspension;
    s.m_ = m;
    s.d_ = int(theta_cols.size());
    s.cols_ = std::move(theta_cols);
    for (const auto& col : s.cols_)
        if (int(col.size()) != m) throw std::invalid_argument("theta column dimension mismatch");
    if (s.d_ >= s.m_)
        throw UncertifiableParametersError("suspension flow needs d < m");

    auto rads = collect_radicands(s.cols_);

    // Ergodic <=> no nonzero xi in Z^m with xi^T Theta = 0 (all coordinates,
    // rational included, must vanish: the equation is over R, not mod 1).
    {
        std::vector<std::vector<Rational>> mat;
        for (const auto& col : s.cols_) {
            // rational slot
            std::vector<Rational> row0(std::size_t(m), Rational(0));
            for (int j = 0; j < m; ++j) row0[std::size_t(j)] = col[std::size_t(j)].coeff0();
            mat.push_back(std::move(row0));
            for (std::size_t ri = 0; ri < rads.size(); ++ri) {
                std::vector<Rational> rowv(std::size_t(m), Rational(0));
                for (int j = 0; j < m; ++j)
                    rowv[std::size_t(j)] = radical_coords(col[std::size_t(j)], rads)[ri];
                mat.push_back(std::move(rowv));
            }
        }
        s.ergodic_ = rational_rank(std::move(mat)) == m;
    }

    // Aperiodic <=> Theta t in Z^m implies t = 0. Solve the top d rows for t
    // (they must be invertible over the field, else a real direction acts
    // trivially) and certify that W = Theta_rest * Theta_top^{-1} maps no
    // nonzero integer vector to a rational vector.
    {
        // field Gaussian elimination to invert the top d x d block
        int d = s.d_;
        std::vector<std::vector<ExactScalar>> a(std::size_t(d),
                                                std::vector<ExactScalar>(std::size_t(2 * d), ExactScalar(0)));
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) a[std::size_t(r)][std::size_t(c)] = s.cols_[std::size_t(c)][std::size_t(r)];
            a[std::size_t(r)][std::size_t(d + r)] = ExactScalar(1);
        }
        bool invertible = true;
        for (int c = 0; c < d && invertible; ++c) {
            int pivot = c;
            while (pivot < d && a[std::size_t(pivot)][std::size_t(c)].is_zero()) ++pivot;
            if (pivot == d) { invertible = false; break; }
            std::swap(a[std::size_t(c)], a[std::size_t(pivot)]);
            ExactScalar inv = a[std::size_t(c)][std::size_t(c)].inverse();
            for (int cc = 0; cc < 2 * d; ++cc) a[std::size_t(c)][std::size_t(cc)] *= inv;
            for (int r = 0; r < d; ++r) {
                if (r == c || a[std::size_t(r)][std::size_t(c)].is_zero()) continue;
                ExactScalar f = a[std::size_t(r)][std::size_t(c)];
                for (int cc = 0; cc < 2 * d; ++cc)
                    a[std::size_t(r)][std::size_t(cc)] -= f * a[std::size_t(c)][std::size_t(cc)];
            }
        }
        if (!invertible) {
            s.aperiodic_ = false;
        } else {
            // W[r][c] = sum_k Theta[d + r][k] * inv[k][c]
            int rest = s.m_ - d;
            std::vector<std::vector<ExactScalar>> w(std::size_t(rest),
                                                    std::vector<ExactScalar>(std::size_t(d), ExactScalar(0)));
            for (int r = 0; r < rest; ++r)
                for (int c = 0; c < d; ++c)
                    for (int k = 0; k < d; ++k)
                        w[std::size_t(r)][std::size_t(c)] +=
                            s.cols_[std::size_t(k)][std::size_t(d + r)] * a[std::size_t(k)][std::size_t(d + c)];
            std::vector<std::vector<ExactScalar>> wcols{std::size_t(d)};
            for (int c = 0; c < d; ++c)
                for (int r = 0; r < rest; ++r) wcols[std::size_t(c)].push_back(w[std::size_t(r)][std::size_t(c)]);
            auto wrads = collect_radicands(wcols);
            std::vector<std::vector<Rational>> mat;
            for (int r = 0; r < rest; ++r) {
                for (std::size_t ri = 0; ri < wrads.size(); ++ri) {
                    std::vector<Rational> rowv(std::size_t(d), Rational(0));
                    for (int c = 0; c < d; ++c)
                        rowv[std::size_t(c)] = radical_coords(w[std::size_t(r)][std::size_t(c)], wrads)[ri];
                    mat.push_back(std::move(rowv));
                }
            }
            s.aperiodic_ = rational_rank(std::move(mat)) == d;
        }
    }
    s.finish_construction();
    return s;
}

TorusSystem TorusSystem::suspension_canonical(const ExactScalar& gamma, const ExactScalar& a,
                                              const ExactScalar& b) {
    return suspension_canonical_n(gamma, {a, b});
}

TorusSystem TorusSystem::suspension_canonical_n(const ExactScalar& gamma,
                                                const std::vector<ExactScalar>& shear) {
    if (gamma.sign() <= 0) throw UncertifiableParametersError("canonical suspension needs gamma > 0");
    const int d = int(shear.size());
    if (d < 1) throw UncertifiableParametersError("canonical suspension needs at least one column");
    std::vector<std::vector<ExactScalar>> cols{std::size_t(d)};
    for (int i = 0; i < d; ++i) {
        cols[std::size_t(i)].assign(std::size_t(d + 1), ExactScalar(0));
        cols[std::size_t(i)][std::size_t(i)] = gamma;
        cols[std::size_t(i)][std::size_t(d)] = shear[std::size_t(i)];
    }
    return suspension(d + 1, std::move(cols));
}

void TorusSystem::finish_construction() {
    cols_d_.clear();
    for (const auto& col : cols_) {
        std::vector<double> cd;
        for (const auto& v : col) cd.push_back(v.to_double());
        cols_d_.push_back(std::move(cd));
    }
}

XPoint TorusSystem::act(const XPoint& x, const std::vector<std::int64_t>& j) const {
    if (int(x.size()) != m_ || int(j.size()) != d_)
        throw std::invalid_argument("act: dimension mismatch");
    XPoint y = x;
    for (int i = 0; i < d_; ++i) {
        if (j[std::size_t(i)] == 0) continue;
        ExactScalar f(j[std::size_t(i)]);
        for (int a = 0; a < m_; ++a) y[std::size_t(a)] += f * cols_[std::size_t(i)][std::size_t(a)];
    }
    for (auto& c : y) c = c.mod1();
    return y;
}

XPoint TorusSystem::act(const XPoint& x, const std::vector<ExactScalar>& t) const {
    if (int(x.size()) != m_ || int(t.size()) != d_)
        throw std::invalid_argument("act: dimension mismatch");
    XPoint y = x;
    for (int i = 0; i < d_; ++i)
        for (int a = 0; a < m_; ++a) y[std::size_t(a)] += t[std::size_t(i)] * cols_[std::size_t(i)][std::size_t(a)];
    for (auto& c : y) c = c.mod1();
    return y;
}

DPoint TorusSystem::act(const DPoint& x, const std::vector<std::int64_t>& j) const {
    DPoint y = x;
    for (int i = 0; i < d_; ++i)
        for (int a = 0; a < m_; ++a) y[std::size_t(a)] += double(j[std::size_t(i)]) * cols_d_[std::size_t(i)][std::size_t(a)];
    for (auto& c : y) c = wrap01(c);
    return y;
}

DPoint TorusSystem::act(const DPoint& x, const std::vector<double>& t) const {
    DPoint y = x;
    for (int i = 0; i < d_; ++i)
        for (int a = 0; a < m_; ++a) y[std::size_t(a)] += t[std::size_t(i)] * cols_d_[std::size_t(i)][std::size_t(a)];
    for (auto& c : y) c = wrap01(c);
    return y;
}

std::vector<ExactScalar> TorusSystem::translation(const std::vector<ExactScalar>& t) const {
    std::vector<ExactScalar> v(std::size_t(m_), ExactScalar(0));
    for (int i = 0; i < d_; ++i)
        for (int a = 0; a < m_; ++a) v[std::size_t(a)] += t[std::size_t(i)] * cols_[std::size_t(i)][std::size_t(a)];
    return v;
}

std::vector<ExactScalar> TorusSystem::translation(const std::vector<std::int64_t>& j) const {
    std::vector<ExactScalar> t;
    for (auto n : j) t.push_back(ExactScalar(n));
    return translation(t);
}

Observable Observable::character(std::vector<std::int64_t> xi) {
    Observable o;
    o.kind_ = Kind::Character;
    o.xi_ = std::move(xi);
    return o;
}

Observable Observable::indicator(TorusSet set) {
    Observable o;
    o.kind_ = Kind::Indicator;
    o.set_ = std::move(set);
    o.set_.freeze();
    return o;
}

Observable Observable::trig_poly(std::vector<std::pair<std::vector<std::int64_t>, std::complex<double>>> terms) {
    Observable o;
    o.kind_ = Kind::TrigPoly;
    o.terms_ = std::move(terms);
    return o;
}

std::complex<double> Observable::eval(const DPoint& x) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (kind_) {
    case Kind::Character: {
        double phase = 0;
        for (std::size_t a = 0; a < xi_.size(); ++a) phase += double(xi_[a]) * x[a];
        return std::polar(1.0, two_pi * phase);
    }
    case Kind::Indicator:
        return set_.indicator(x) ? 1.0 : 0.0;
    case Kind::TrigPoly: {
        std::complex<double> s = 0;
        for (const auto& [xi, coef] : terms_) {
            double phase = 0;
            for (std::size_t a = 0; a < xi.size(); ++a) phase += double(xi[a]) * x[a];
            s += coef * std::polar(1.0, two_pi * phase);
        }
        return s;
    }
    }
    return 0;
}

double Observable::sup_norm() const {
    switch (kind_) {
    case Kind::Character: return 1.0;
    case Kind::Indicator: return set_.empty() ? 0.0 : 1.0;
    case Kind::TrigPoly: {
        double s = 0;
        for (const auto& [xi, coef] : terms_) s += std::abs(coef);
        return s;
    }
    }
    return 0;
}

std::complex<double> observable_mean(const Observable& obs) {
    switch (obs.kind()) {
    case Observable::Kind::Character: {
        for (auto c : obs.xi())
            if (c != 0) return 0.0;
        return 1.0;
    }
    case Observable::Kind::Indicator:
        return obs.set().measure().to_double();
    case Observable::Kind::TrigPoly: {
        std::complex<double> s = 0;
        for (const auto& [xi, coef] : obs.terms()) {
            bool zero = true;
            for (auto c : xi)
                if (c != 0) zero = false;
            if (zero) s += coef;
        }
        return s;
    }
    }
    return 0;
}

ExactScalar observable_mean_exact(const Observable& obs) {
    if (obs.kind() != Observable::Kind::Indicator)
        throw std::invalid_argument("exact mean only defined for indicator observables");
    return obs.set().measure();
}

ExactScalar set_measure(const TorusSet& set) { return set.measure(); }

} // namespace movavg
