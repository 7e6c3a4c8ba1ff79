#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "movavg/rational.hpp"

namespace movavg {

enum class FamilyMode { Discrete, Continuous };

// One box of the averaging family: [corner, corner + length) per axis.
// Discrete entries have integer corners and integer lengths >= 1.
struct BoxEntry {
    std::vector<Rational> corner;
    std::vector<Rational> length;
};

// Named family generators.
//   linear:r=R        (k, R*k)            discrete, d=1
//   sqrt              (k, ceil(sqrt(k)))  discrete, d=1
//   squares_unit      (k^2, 1)            discrete, d=1
//   power_unit:base=B (B^k, 1)            discrete, d=1
//   cont_linear:r=R   (k, R*k)            continuous, d=1
//   flat_slab:m=M     [k-1,k) x [0,k)^M   continuous, d=M+1
struct GeneratorSpec {
    std::string name;
    std::int64_t r = 1;
    static GeneratorSpec parse(const std::string& text);
    std::string str() const;
};

// Finite prefix of a box sequence in Z^d or R^d.
class BoxFamily {
public:
    BoxFamily(FamilyMode mode, int dim) : mode_(mode), dim_(dim) {}

    FamilyMode mode() const { return mode_; }
    int dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<BoxEntry>& entries() const { return entries_; }
    const BoxEntry& entry(std::size_t k) const { return entries_[k]; }

    void append(BoxEntry e);

    std::int64_t corner_int(std::size_t k, int axis) const;
    std::int64_t length_int(std::size_t k, int axis) const;

    const std::optional<GeneratorSpec>& origin() const { return origin_; }
    void set_origin(GeneratorSpec g) { origin_ = std::move(g); }

    // Per-entry bitmask: bit a set when axis a was reflected by orthant_split.
    const std::vector<std::uint32_t>& flip_masks() const { return flips_; }
    void set_flip_masks(std::vector<std::uint32_t> f) { flips_ = std::move(f); }

    // min over entries beyond the prefix of the length on `axis`, when known
    // in closed form from the generator (or from a monotone length prefix).
    // Returns nullopt when nothing can be said about the tail.
    std::optional<Rational> tail_min_length(int axis) const;

    // Truncate to the first K entries.
    BoxFamily prefix(std::size_t K) const;

private:
    FamilyMode mode_;
    int dim_;
    std::vector<BoxEntry> entries_;
    std::vector<std::uint32_t> flips_;
    std::optional<GeneratorSpec> origin_;
};

// First K entries of the named sequence; deterministic.
BoxFamily generate_family(const GeneratorSpec& spec, std::int64_t K);

// Splits every box straddling a coordinate hyperplane {x_i = 0} and reflects
// all-negative pieces so that every corner becomes >= 0; records the per-axis
// sign flips. Total union of boxes (lattice points / volume) is preserved.
BoxFamily orthant_split(const BoxFamily& family);

} // namespace movavg
