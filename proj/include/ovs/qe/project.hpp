#pragma once

#include "ovs/ovskit/space.hpp"
#include "ovs/qe/decide.hpp"

namespace ovs::qe {

/// Image of a semilinear set under a linear map:  { y : exists x in S, y = M x }.
inline SemilinearSet project(const SemilinearSet& set, const LinearMap& map, const Limits& limits = {}) {
    if (map.domain() != set.dim())
        throw DimensionMismatch("map domain Q^" + std::to_string(map.domain()) + " vs set in Q^" +
                                std::to_string(set.dim()));
    auto src = var_block("_src", set.dim());
    auto image = map.apply(exprs(src));
    auto ys = coords(map.codomain());
    std::vector<Formula> parts{set.at(exprs(src))};
    for (std::size_t i = 0; i < ys.size(); ++i) parts.push_back(Formula::eq(ys[i] - image[i]));
    return SemilinearSet(map.codomain(), eliminate_exists(Formula::conj(parts), src, limits));
}

/// Preimage { x : M x in S } (no quantifier needed).
inline SemilinearSet preimage(const SemilinearSet& set, const LinearMap& map) {
    if (map.codomain() != set.dim()) throw DimensionMismatch("map codomain does not match the set");
    return SemilinearSet(map.domain(), set.at(map.apply(coords(map.domain()))));
}

inline bool equivalent(const SemilinearSet& a, const SemilinearSet& b, const Limits& limits = {}) {
    if (a.dim() != b.dim()) return false;
    return equivalent(a.formula(), b.formula(), limits);
}

inline bool subset(const SemilinearSet& a, const SemilinearSet& b, const Limits& limits = {}) {
    if (a.dim() != b.dim()) throw DimensionMismatch("subset test across dimensions");
    return !satisfiable(a.formula() && !b.formula(), limits);
}

inline bool is_empty(const SemilinearSet& a, const Limits& limits = {}) { return !satisfiable(a.formula(), limits); }

/// Some member of the set, if any.
inline std::optional<Vector> sample(const SemilinearSet& a, const Limits& limits = {}) {
    auto m = find_model(a.formula(), limits);
    if (!m) return std::nullopt;
    return read_vector(*m, var_block("x", a.dim()));
}

}  // namespace ovs::qe
