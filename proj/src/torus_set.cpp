#include "movavg/torus_set.hpp"

#include <stdexcept>

namespace movavg {

ExactScalar TorusBox::volume() const {
    ExactScalar v(1);
    for (const auto& s : sides) v *= s.length();
    return v;
}

bool TorusBox::empty() const {
    for (const auto& s : sides)
        if (s.empty()) return true;
    return sides.empty();
}

TorusSet TorusSet::full(int dim) {
    TorusSet s(dim);
    TorusBox box;
    for (int a = 0; a < dim; ++a) box.sides.push_back({ExactScalar(0), ExactScalar(1)});
    s.boxes_.push_back(std::move(box));
    return s;
}

std::vector<TorusBox> TorusSet::wrap_box(const std::vector<Interval>& sides) {
    // Wrap each axis independently; an axis either stays one interval or
    // splits in two at the seam. Cartesian-expand the splits.
    std::vector<std::vector<Interval>> per_axis;
    for (const auto& s : sides) {
        ExactScalar len = s.hi - s.lo;
        if (len.sign() <= 0) return {};
        if (ExactScalar(1) < len) throw std::invalid_argument("torus box side longer than 1");
        ExactScalar lo = s.lo.mod1();
        ExactScalar hi = lo + len;
        std::vector<Interval> pieces;
        if (hi <= ExactScalar(1)) {
            pieces.push_back({lo, hi});
        } else {
            pieces.push_back({lo, ExactScalar(1)});
            pieces.push_back({ExactScalar(0), hi - ExactScalar(1)});
        }
        per_axis.push_back(std::move(pieces));
    }
    std::vector<TorusBox> out;
    std::vector<std::size_t> idx(per_axis.size(), 0);
    for (;;) {
        TorusBox box;
        for (std::size_t a = 0; a < per_axis.size(); ++a) box.sides.push_back(per_axis[a][idx[a]]);
        out.push_back(std::move(box));
        std::size_t a = 0;
        for (; a < per_axis.size(); ++a) {
            if (++idx[a] < per_axis[a].size()) break;
            idx[a] = 0;
        }
        if (a == per_axis.size()) break;
    }
    return out;
}

std::vector<TorusBox> TorusSet::box_minus(const TorusBox& a, const TorusBox& b) {
    // Disjoint cover of a \ b by axis sweep: peel the part of `a` outside
    // `b` one axis at a time, shrinking the core as we go.
    TorusBox core = a;
    std::vector<TorusBox> out;
    for (std::size_t ax = 0; ax < a.sides.size(); ++ax) {
        const Interval& ca = core.sides[ax];
        const Interval& cb = b.sides[ax];
        ExactScalar lo = ca.lo < cb.lo ? cb.lo : ca.lo;
        ExactScalar hi = ca.hi < cb.hi ? ca.hi : cb.hi;
        if (!(lo < hi)) return {a}; // disjoint on this axis: nothing removed
        if (ca.lo < lo) {
            TorusBox piece = core;
            piece.sides[ax] = {ca.lo, lo};
            out.push_back(std::move(piece));
        }
        if (hi < ca.hi) {
            TorusBox piece = core;
            piece.sides[ax] = {hi, ca.hi};
            out.push_back(std::move(piece));
        }
        core.sides[ax] = {lo, hi};
    }
    // core is now inside b and is dropped
    return out;
}

void TorusSet::insert_disjoint(const TorusBox& box) {
    std::vector<TorusBox> pieces{box};
    for (const auto& existing : boxes_) {
        std::vector<TorusBox> next;
        for (const auto& p : pieces) {
            auto rest = box_minus(p, existing);
            next.insert(next.end(), rest.begin(), rest.end());
        }
        pieces = std::move(next);
        if (pieces.empty()) return;
    }
    for (auto& p : pieces)
        if (!p.empty()) boxes_.push_back(std::move(p));
    cache_.clear();
}

void TorusSet::add_box(const std::vector<Interval>& sides) {
    if (int(sides.size()) != dim_) throw std::invalid_argument("torus box dimension mismatch");
    for (const auto& wrapped : wrap_box(sides)) insert_disjoint(wrapped);
}

void TorusSet::add(const TorusSet& other) {
    if (other.dim_ != dim_) throw std::invalid_argument("torus set dimension mismatch");
    for (const auto& box : other.boxes_) insert_disjoint(box);
}

ExactScalar TorusSet::measure() const {
    ExactScalar m(0);
    for (const auto& box : boxes_) m += box.volume();
    return m;
}

TorusSet TorusSet::complement() const {
    TorusSet r = full(dim_);
    return r.subtract(*this);
}

TorusSet TorusSet::subtract(const TorusSet& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("torus set dimension mismatch");
    TorusSet r(dim_);
    for (const auto& a : boxes_) {
        std::vector<TorusBox> pieces{a};
        for (const auto& b : other.boxes_) {
            std::vector<TorusBox> next;
            for (const auto& p : pieces) {
                auto rest = box_minus(p, b);
                next.insert(next.end(), rest.begin(), rest.end());
            }
            pieces = std::move(next);
            if (pieces.empty()) break;
        }
        for (auto& p : pieces)
            if (!p.empty()) r.boxes_.push_back(std::move(p));
    }
    return r;
}

TorusSet TorusSet::intersect(const TorusSet& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("torus set dimension mismatch");
    TorusSet r(dim_);
    for (const auto& a : boxes_) {
        for (const auto& b : other.boxes_) {
            TorusBox box;
            bool ok = true;
            for (int ax = 0; ax < dim_ && ok; ++ax) {
                ExactScalar lo = a.sides[ax].lo < b.sides[ax].lo ? b.sides[ax].lo : a.sides[ax].lo;
                ExactScalar hi = a.sides[ax].hi < b.sides[ax].hi ? a.sides[ax].hi : b.sides[ax].hi;
                if (!(lo < hi)) ok = false;
                else box.sides.push_back({lo, hi});
            }
            if (ok) r.boxes_.push_back(std::move(box));
        }
    }
    return r;
}

TorusSet TorusSet::translate(const std::vector<ExactScalar>& shift) const {
    if (int(shift.size()) != dim_) throw std::invalid_argument("translation dimension mismatch");
    TorusSet r(dim_);
    for (const auto& box : boxes_) {
        std::vector<Interval> sides = box.sides;
        for (int ax = 0; ax < dim_; ++ax) {
            sides[ax].lo += shift[ax];
            sides[ax].hi += shift[ax];
        }
        // translated boxes of a disjoint family stay disjoint, only the seam
        // split is needed
        for (const auto& wrapped : wrap_box(sides)) r.boxes_.push_back(wrapped);
    }
    return r;
}

bool TorusSet::contains(const XPoint& x) const {
    if (int(x.size()) != dim_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& box : boxes_) {
        bool in = true;
        for (int ax = 0; ax < dim_ && in; ++ax)
            in = box.sides[ax].lo <= x[ax] && x[ax] < box.sides[ax].hi;
        if (in) return true;
    }
    return false;
}

bool TorusSet::is_subset_of(const TorusSet& other) const {
    return subtract(other).measure().is_zero();
}

void TorusSet::freeze() const {
    cache_.clear();
    cache_.reserve(boxes_.size());
    for (const auto& box : boxes_) {
        std::vector<std::pair<double, double>> b;
        for (const auto& s : box.sides) b.push_back({s.lo.to_double(), s.hi.to_double()});
        cache_.push_back(std::move(b));
    }
}

bool TorusSet::indicator(const DPoint& x) const {
    if (cache_.size() != boxes_.size()) freeze();
    for (const auto& b : cache_) {
        bool in = true;
        for (std::size_t ax = 0; ax < b.size() && in; ++ax)
            in = b[ax].first <= x[ax] && x[ax] < b[ax].second;
        if (in) return true;
    }
    return false;
}

IntervalSet TorusSet::as_interval_set() const {
    if (dim_ != 1) throw std::logic_error("as_interval_set requires a 1-dimensional torus set");
    IntervalSet s;
    std::vector<Interval> parts;
    for (const auto& box : boxes_) parts.push_back(box.sides[0]);
    return IntervalSet(std::move(parts));
}

} // namespace movavg
