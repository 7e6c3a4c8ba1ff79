#pragma once

#include <vector>

#include "movavg/exact_scalar.hpp"

namespace movavg {

// Half-open interval [lo, hi) with exact endpoints. Empty when hi <= lo.
struct Interval {
    ExactScalar lo, hi;
    bool empty() const { return !(lo < hi); }
    ExactScalar length() const { return empty() ? ExactScalar(0) : hi - lo; }
};

// Finite union of half-open intervals on the line, kept sorted and disjoint.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet single(const ExactScalar& lo, const ExactScalar& hi);

    void add(const ExactScalar& lo, const ExactScalar& hi);
    void add(const IntervalSet& other);

    IntervalSet intersect(const IntervalSet& other) const;
    // set difference within this set
    IntervalSet subtract(const IntervalSet& other) const;
    IntervalSet translate(const ExactScalar& shift) const;

    bool contains(const ExactScalar& x) const;
    bool empty() const { return parts_.empty(); }
    ExactScalar total_length() const;
    const ExactScalar& sup() const; // throws when empty
    const ExactScalar& inf() const;

    const std::vector<Interval>& parts() const { return parts_; }

private:
    void normalize();
    std::vector<Interval> parts_;
};

// Sorted disjoint union of integer intervals [lo, hi] (inclusive), used for
// lattice cross-sections.
class IntIntervalSet {
public:
    void add(std::int64_t lo, std::int64_t hi); // ignored when lo > hi
    std::int64_t count() const;
    bool contains(std::int64_t x) const;
    std::int64_t sup() const;
    const std::vector<std::pair<std::int64_t, std::int64_t>>& parts() const { return parts_; }
    std::vector<std::int64_t> values() const; // all members, ascending

private:
    void normalize();
    bool dirty_ = false;
    mutable std::vector<std::pair<std::int64_t, std::int64_t>> parts_;
};

} // namespace movavg
