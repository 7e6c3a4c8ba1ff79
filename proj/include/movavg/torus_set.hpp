#pragma once

#include <vector>

#include "movavg/exact_scalar.hpp"
#include "movavg/interval_set.hpp"

namespace movavg {

// Axis-aligned half-open box on the m-torus. Normalized boxes satisfy
// 0 <= lo < hi <= 1 on every axis.
struct TorusBox {
    std::vector<Interval> sides;
    int dim() const { return int(sides.size()); }
    ExactScalar volume() const;
    bool empty() const;
};

// Finite union of half-open axis-aligned boxes on T^m with exact endpoints,
// stored wrap-normalized and pairwise disjoint. Measure, complement,
// intersection and translation are all exact.
class TorusSet {
public:
    TorusSet() = default;
    explicit TorusSet(int dim) : dim_(dim) {}

    static TorusSet full(int dim);
    static TorusSet empty_set(int dim) { return TorusSet(dim); }

    int dim() const { return dim_; }
    bool empty() const { return boxes_.empty(); }
    const std::vector<TorusBox>& boxes() const { return boxes_; }

    // Inserts a box given by raw (not yet wrapped) endpoints; each side must
    // have 0 < length <= 1. Splits at the 0/1 seam, then disjointifies.
    void add_box(const std::vector<Interval>& sides);
    void add(const TorusSet& other);

    ExactScalar measure() const;
    TorusSet complement() const;
    TorusSet intersect(const TorusSet& other) const;
    TorusSet subtract(const TorusSet& other) const;
    // Rigid translation by `shift` mod 1; preserves measure exactly.
    TorusSet translate(const std::vector<ExactScalar>& shift) const;

    bool contains(const XPoint& x) const;      // exact membership
    bool is_subset_of(const TorusSet& other) const;

    // Sampling path: membership of a floating-point torus point.
    bool indicator(const DPoint& x) const;
    // Must be called after the set stops changing if indicator() is used in
    // hot loops; rebuilds the cached double endpoints.
    void freeze() const;

    // Per-axis interval set of a 1-dimensional slice is only meaningful for
    // dim == 1; exposed for tower interval logic.
    IntervalSet as_interval_set() const;

private:
    static std::vector<TorusBox> wrap_box(const std::vector<Interval>& sides);
    static std::vector<TorusBox> box_minus(const TorusBox& a, const TorusBox& b);
    void insert_disjoint(const TorusBox& box);

    int dim_ = 0;
    std::vector<TorusBox> boxes_;
    mutable std::vector<std::vector<std::pair<double, double>>> cache_;
};

} // namespace movavg
