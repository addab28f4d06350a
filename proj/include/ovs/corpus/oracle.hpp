#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ovs/ovskit/space.hpp"

namespace ovs::corpus {

/// A cone known only through an exact membership test.
struct OracleCone {
    std::size_t dim = 0;
    std::function<bool(const Vector&)> member;
    std::function<bool(const Vector&)> closure_member;  // optional companion set (may be empty)

    /// Small random rational point: numerators in [-4, 4], denominators in [1, 4].
    Vector sample(std::mt19937_64& rng) const {
        Vector v(dim);
        for (auto& c : v) {
            long num = static_cast<long>(rng() % 9) - 4;
            long den = static_cast<long>(rng() % 4) + 1;
            c = Rational(num, den);
        }
        return v;
    }
};

inline OracleCone as_oracle(const SemilinearSet& s) {
    return {s.dim(), [s](const Vector& p) { return s.contains(p); }, {}};
}
inline OracleCone as_oracle(const OVSpace& v) { return as_oracle(v.positive()); }

/// Coefficients (a, b, c) of a t^2 + b t + c. Members are the polynomials
/// strictly positive on Q (and 0); the companion set is the nonnegative ones.
inline OracleCone poly_pos_cone_deg2() {
    auto disc = [](const Vector& p) { return p[1] * p[1] - Rational(4) * p[0] * p[2]; };
    OracleCone o;
    o.dim = 3;
    o.member = [disc](const Vector& p) {
        if (p.size() != 3) throw DimensionMismatch("degree 2 polynomial needs 3 coefficients");
        const auto &a = p[0], &b = p[1], &c = p[2];
        if (a.sign() > 0) return disc(p).sign() < 0;
        return a.is_zero() && b.is_zero() && c.sign() >= 0;
    };
    o.closure_member = [disc](const Vector& p) {
        if (p.size() != 3) throw DimensionMismatch("degree 2 polynomial needs 3 coefficients");
        const auto &a = p[0], &b = p[1], &c = p[2];
        if (a.sign() > 0) return disc(p).sign() <= 0;
        return a.is_zero() && b.is_zero() && c.sign() >= 0;
    };
    return o;
}

struct Property {
    enum class Kind { Archimedean, AlmostArchimedean, Element, AlmostElement } kind = Kind::Archimedean;
    Vector element;  // for the element forms

    static Property archimedean() { return {Kind::Archimedean, {}}; }
    static Property almost_archimedean() { return {Kind::AlmostArchimedean, {}}; }
    static Property archimedean_element(Vector x) { return {Kind::Element, std::move(x)}; }
    static Property almost_archimedean_element(Vector x) { return {Kind::AlmostElement, std::move(x)}; }
};

inline std::string property_name(const Property& p) {
    switch (p.kind) {
        case Property::Kind::Archimedean: return "archimedean";
        case Property::Kind::AlmostArchimedean: return "almost-archimedean";
        case Property::Kind::Element: return "arch-element";
        case Property::Kind::AlmostElement: return "almost-arch-element";
    }
    return "?";
}

/// Hypothesis holds at every n in [n_min, n_max] and the conclusion fails.
///   archimedean:        x - n y in K,      conclusion -y in K
///   almost-archimedean: x - n y in K,      conclusion y = 0
///   element:            x + n y in K,      conclusion y in K
///   almost element:     x + n y in K,      conclusion y = 0
struct Evidence {
    Vector x, y;
    long n_min = 0, n_max = 0;
    std::size_t pairs_tried = 0;
};

struct FalsifyOptions {
    std::size_t budget = 10000;  // candidate pairs
    std::uint64_t seed = 0;
    long n_max = 1000;
    std::size_t random_candidates = 32;
};

namespace detail {

inline std::vector<Vector> candidate_points(const OracleCone& o, std::uint64_t seed, std::size_t random_count) {
    const std::size_t n = o.dim;
    std::vector<Vector> out;
    auto push = [&](Vector v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    };
    auto unit = [n](std::size_t i, long s) {
        Vector e(n);
        e[i] = Rational(s);
        return e;
    };
    for (std::size_t i = 0; i < n; ++i) push(unit(i, 1));
    for (std::size_t i = 0; i < n; ++i) push(unit(i, -1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            push(unit(i, 1) + unit(j, 1));
            push(unit(i, 1) - unit(j, 1));
            push(unit(j, 1) - unit(i, 1));
        }
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < random_count; ++k) {
        Vector v = o.sample(rng);
        if (!is_zero_vector(v)) push(std::move(v));
    }
    return out;
}

}  // namespace detail

/// Refutation-only search for a counterexample. None means the budget ran
/// out, not that the property holds.
inline std::optional<Evidence> falsify(const OracleCone& o, const Property& prop, const FalsifyOptions& opt = {}) {
    if (opt.budget == 0) throw InvalidArgument("falsify budget must be at least 1");
    const bool element = prop.kind == Property::Kind::Element || prop.kind == Property::Kind::AlmostElement;
    const bool almost = prop.kind == Property::Kind::AlmostArchimedean || prop.kind == Property::Kind::AlmostElement;
    if (element) {
        if (prop.element.size() != o.dim) throw DimensionMismatch("element outside the oracle's space");
        if (!o.member(prop.element)) throw NotPositiveElement(vector_str(prop.element) + " is not positive");
    }
    const long lo = almost ? -opt.n_max : 1;
    const long hi = opt.n_max;
    // sign of n in the hypothesis: x - n y for the space forms, x + n y for elements
    const Rational step = element ? Rational(1) : Rational(-1);

    auto pts = detail::candidate_points(o, opt.seed, opt.random_candidates);
    std::vector<Vector> xs = element ? std::vector<Vector>{prop.element} : pts;
    std::size_t tried = 0;
    for (const auto& x : xs) {
        if (!element && !o.member(x)) continue;
        for (const auto& y : pts) {
            if (tried == opt.budget) return std::nullopt;
            ++tried;
            bool conclusion;
            if (almost) conclusion = is_zero_vector(y);
            else if (element) conclusion = o.member(y);
            else conclusion = o.member(-y);
            if (conclusion) continue;
            bool all = true;
            for (long n = lo; n <= hi && all; ++n) all = o.member(x + (step * Rational(n)) * y);
            if (all) return Evidence{x, y, lo, hi, tried};
        }
    }
    return std::nullopt;
}

}  // namespace ovs::corpus
