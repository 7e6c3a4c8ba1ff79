#include "movavg/interval_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace movavg {

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    normalize();
}

IntervalSet IntervalSet::single(const ExactScalar& lo, const ExactScalar& hi) {
    IntervalSet s;
    s.add(lo, hi);
    return s;
}

void IntervalSet::add(const ExactScalar& lo, const ExactScalar& hi) {
    if (!(lo < hi)) return;
    parts_.push_back({lo, hi});
    normalize();
}

void IntervalSet::add(const IntervalSet& other) {
    for (const auto& p : other.parts_) parts_.push_back(p);
    normalize();
}

void IntervalSet::normalize() {
    std::vector<Interval> in;
    in.reserve(parts_.size());
    for (auto& p : parts_)
        if (!p.empty()) in.push_back(std::move(p));
    std::sort(in.begin(), in.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (auto& p : in) {
        if (!out.empty() && p.lo <= out.back().hi) {
            if (out.back().hi < p.hi) out.back().hi = p.hi;
        } else {
            out.push_back(std::move(p));
        }
    }
    parts_ = std::move(out);
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    IntervalSet r;
    for (const auto& a : parts_) {
        for (const auto& b : other.parts_) {
            ExactScalar lo = a.lo < b.lo ? b.lo : a.lo;
            ExactScalar hi = a.hi < b.hi ? a.hi : b.hi;
            if (lo < hi) r.parts_.push_back({lo, hi});
        }
    }
    r.normalize();
    return r;
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
    std::vector<Interval> cur = parts_;
    for (const auto& b : other.parts_) {
        std::vector<Interval> next;
        for (const auto& a : cur) {
            if (b.hi <= a.lo || a.hi <= b.lo) {
                next.push_back(a);
                continue;
            }
            if (a.lo < b.lo) next.push_back({a.lo, b.lo});
            if (b.hi < a.hi) next.push_back({b.hi, a.hi});
        }
        cur = std::move(next);
    }
    IntervalSet r;
    r.parts_ = std::move(cur);
    r.normalize();
    return r;
}

IntervalSet IntervalSet::translate(const ExactScalar& shift) const {
    IntervalSet r;
    r.parts_ = parts_;
    for (auto& p : r.parts_) {
        p.lo += shift;
        p.hi += shift;
    }
    return r;
}

bool IntervalSet::contains(const ExactScalar& x) const {
    for (const auto& p : parts_) {
        if (p.lo <= x && x < p.hi) return true;
        if (x < p.lo) return false;
    }
    return false;
}

ExactScalar IntervalSet::total_length() const {
    ExactScalar s(0);
    for (const auto& p : parts_) s += p.hi - p.lo;
    return s;
}

const ExactScalar& IntervalSet::sup() const {
    if (parts_.empty()) throw std::domain_error("sup of empty interval set");
    return parts_.back().hi;
}

const ExactScalar& IntervalSet::inf() const {
    if (parts_.empty()) throw std::domain_error("inf of empty interval set");
    return parts_.front().lo;
}

void IntIntervalSet::add(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) return;
    parts_.push_back({lo, hi});
    dirty_ = true;
}

void IntIntervalSet::normalize() {
    if (!dirty_) return;
    std::sort(parts_.begin(), parts_.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto& p : parts_) {
        if (!out.empty() && p.first <= out.back().second + 1) {
            if (out.back().second < p.second) out.back().second = p.second;
        } else {
            out.push_back(p);
        }
    }
    parts_ = std::move(out);
    dirty_ = false;
}

std::int64_t IntIntervalSet::count() const {
    const_cast<IntIntervalSet*>(this)->normalize();
    std::int64_t n = 0;
    for (const auto& p : parts_) n += p.second - p.first + 1;
    return n;
}

bool IntIntervalSet::contains(std::int64_t x) const {
    const_cast<IntIntervalSet*>(this)->normalize();
    auto it = std::upper_bound(parts_.begin(), parts_.end(), std::make_pair(x, INT64_MAX));
    if (it == parts_.begin()) return false;
    --it;
    return x <= it->second;
}

std::int64_t IntIntervalSet::sup() const {
    const_cast<IntIntervalSet*>(this)->normalize();
    if (parts_.empty()) throw std::domain_error("sup of empty integer interval set");
    return parts_.back().second;
}

std::vector<std::int64_t> IntIntervalSet::values() const {
    const_cast<IntIntervalSet*>(this)->normalize();
    std::vector<std::int64_t> v;
    for (const auto& p : parts_)
        for (std::int64_t x = p.first; x <= p.second; ++x) v.push_back(x);
    return v;
}

} // namespace movavg
