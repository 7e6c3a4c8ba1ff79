#include "movavg/box_family.hpp"

#include <cmath>
#include <stdexcept>

#include "movavg/errors.hpp"

namespace movavg {

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    GeneratorSpec g;
    auto colon = text.find(':');
    g.name = text.substr(0, colon);
    if (colon != std::string::npos) {
        std::string params = text.substr(colon + 1);
        auto eq = params.find('=');
        if (eq == std::string::npos)
            throw ConfigError("generator parameter must look like key=value: " + text);
        std::string key = params.substr(0, eq);
        std::int64_t val = std::stoll(params.substr(eq + 1));
        if (key == "r" || key == "base" || key == "m") g.r = val;
        else throw ConfigError("unknown generator parameter '" + key + "' in " + text);
    }
    return g;
}

std::string GeneratorSpec::str() const {
    if (name == "linear" || name == "cont_linear") return name + ":r=" + std::to_string(r);
    if (name == "power_unit") return name + ":base=" + std::to_string(r);
    if (name == "flat_slab") return name + ":m=" + std::to_string(r);
    return name;
}

void BoxFamily::append(BoxEntry e) {
    if (int(e.corner.size()) != dim_ || int(e.length.size()) != dim_)
        throw std::invalid_argument("box entry dimension mismatch");
    for (int a = 0; a < dim_; ++a) {
        if (mode_ == FamilyMode::Discrete) {
            if (!e.corner[a].is_integer() || !e.length[a].is_integer())
                throw std::invalid_argument("discrete family entries must be integral");
            if (e.length[a] < Rational(1))
                throw std::invalid_argument("discrete box length must be >= 1");
        } else if (e.length[a].sign() <= 0) {
            throw std::invalid_argument("continuous box length must be > 0");
        }
    }
    entries_.push_back(std::move(e));
    flips_.push_back(0);
}

std::int64_t BoxFamily::corner_int(std::size_t k, int axis) const {
    return entries_[k].corner[axis].num();
}

std::int64_t BoxFamily::length_int(std::size_t k, int axis) const {
    return entries_[k].length[axis].num();
}

std::optional<Rational> BoxFamily::tail_min_length(int axis) const {
    std::int64_t K = std::int64_t(entries_.size());
    if (origin_) {
        const std::string& n = origin_->name;
        if (n == "linear" || n == "cont_linear") return Rational(origin_->r * (K + 1));
        if (n == "sqrt")
            return Rational(std::int64_t(std::ceil(std::sqrt(double(K + 1)))));
        if (n == "squares_unit" || n == "power_unit") return Rational(1);
        if (n == "flat_slab") return axis == 0 ? Rational(1) : Rational(K + 1);
    }
    // raw data: a nondecreasing length column bounds the tail from below
    bool monotone = true;
    for (std::size_t k = 1; k < entries_.size() && monotone; ++k)
        monotone = entries_[k - 1].length[axis] <= entries_[k].length[axis];
    if (monotone && !entries_.empty()) return entries_.back().length[axis];
    return std::nullopt;
}

BoxFamily BoxFamily::prefix(std::size_t K) const {
    BoxFamily f(mode_, dim_);
    for (std::size_t k = 0; k < K && k < entries_.size(); ++k) f.append(entries_[k]);
    if (origin_) f.origin_ = origin_;
    return f;
}

BoxFamily generate_family(const GeneratorSpec& spec, std::int64_t K) {
    if (K < 1) throw ConfigError("prefix length K must be >= 1");
    const std::string& n = spec.name;
    auto make1 = [&](FamilyMode mode) { return BoxFamily(mode, 1); };
    BoxFamily fam = make1(FamilyMode::Discrete);
    if (n == "linear" || n == "cont_linear") {
        if (spec.r < 1) throw ConfigError("generator " + n + " needs r >= 1");
        fam = make1(n == "linear" ? FamilyMode::Discrete : FamilyMode::Continuous);
        for (std::int64_t k = 1; k <= K; ++k)
            fam.append({{Rational(k)}, {Rational(spec.r * k)}});
    } else if (n == "sqrt") {
        fam = make1(FamilyMode::Discrete);
        for (std::int64_t k = 1; k <= K; ++k) {
            std::int64_t l = std::int64_t(std::ceil(std::sqrt(double(k))));
            while (l * l < k) ++l;
            while ((l - 1) * (l - 1) >= k) --l;
            fam.append({{Rational(k)}, {Rational(l)}});
        }
    } else if (n == "squares_unit") {
        fam = make1(FamilyMode::Discrete);
        for (std::int64_t k = 1; k <= K; ++k)
            fam.append({{Rational(k * k)}, {Rational(1)}});
    } else if (n == "power_unit") {
        if (spec.r < 2) throw ConfigError("generator power_unit needs base >= 2");
        fam = make1(FamilyMode::Discrete);
        std::int64_t p = spec.r;
        for (std::int64_t k = 1; k <= K; ++k) {
            fam.append({{Rational(p)}, {Rational(1)}});
            if (p > INT64_MAX / spec.r) throw std::overflow_error("power_unit corner overflow");
            p *= spec.r;
        }
    } else if (n == "flat_slab") {
        std::int64_t m = spec.r;
        if (m < 1) throw ConfigError("generator flat_slab needs m >= 1");
        BoxFamily f(FamilyMode::Continuous, int(m + 1));
        for (std::int64_t k = 1; k <= K; ++k) {
            BoxEntry e;
            e.corner.assign(std::size_t(m + 1), Rational(0));
            e.length.assign(std::size_t(m + 1), Rational(k));
            e.corner[0] = Rational(k - 1);
            e.length[0] = Rational(1);
            f.append(std::move(e));
        }
        f.set_origin(spec);
        return f;
    } else {
        throw ConfigError("unknown family generator '" + n + "'");
    }
    fam.set_origin(spec);
    return fam;
}

BoxFamily orthant_split(const BoxFamily& family) {
    BoxFamily out(family.mode(), family.dim());
    std::vector<std::uint32_t> flips;
    const int d = family.dim();
    for (const auto& e : family.entries()) {
        // start with the whole box, split axis by axis
        struct Piece {
            BoxEntry box;
            std::uint32_t flip = 0;
        };
        std::vector<Piece> pieces{{e, 0}};
        for (int a = 0; a < d; ++a) {
            std::vector<Piece> next;
            for (auto& p : pieces) {
                Rational lo = p.box.corner[a];
                Rational hi = lo + p.box.length[a];
                if (lo < Rational(0) && Rational(0) < hi) {
                    Piece neg = p, pos = p;
                    neg.box.length[a] = -lo;
                    pos.box.corner[a] = Rational(0);
                    pos.box.length[a] = hi;
                    next.push_back(std::move(neg));
                    next.push_back(std::move(pos));
                } else {
                    next.push_back(std::move(p));
                }
            }
            pieces = std::move(next);
        }
        for (auto& p : pieces) {
            for (int a = 0; a < d; ++a) {
                Rational lo = p.box.corner[a];
                Rational hi = lo + p.box.length[a];
                if (hi <= Rational(0)) {
                    // all-negative along axis a: reflect; on the lattice this is
                    // x -> -1-x, so [n, n+l) maps to [-n-l, -n)
                    p.box.corner[a] = -hi;
                    p.flip |= (1u << a);
                }
            }
            out.append(std::move(p.box));
            flips.push_back(p.flip);
        }
    }
    out.set_flip_masks(std::move(flips));
    if (family.origin()) out.set_origin(*family.origin());
    return out;
}

} // namespace movavg
