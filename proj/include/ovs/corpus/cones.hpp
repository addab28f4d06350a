#pragma once

#include <string>
#include <vector>

#include "ovs/qe/project.hpp"

namespace ovs::corpus {

/// {x : x_i >= 0 for all i}
inline OVSpace closed_orthant(std::size_t n) {
    std::vector<Formula> ks;
    for (const auto& x : coords(n)) ks.push_back(Formula::ge(x));
    return OVSpace(n, Formula::conj(ks));
}

/// {x : x_i > 0 for all i} u {0}. For a finite index set this is the
/// strict-minimum ordering of functions on it.
inline OVSpace open_orthant_cone(std::size_t n) {
    auto xs = coords(n);
    std::vector<Formula> ks;
    for (const auto& x : xs) ks.push_back(Formula::gt(x));
    return OVSpace(n, Formula::conj(ks) || zero_formula(xs));
}

/// {x1 > 0} u {0}
inline OVSpace strict_halfspace_cone(std::size_t n) {
    auto xs = coords(n);
    if (n == 0) return OVSpace(0, Formula::top());
    return OVSpace(n, Formula::gt(xs[0]) || zero_formula(xs));
}

namespace detail {
inline Formula lex_formula(const std::vector<AffineExpr>& xs, std::size_t from) {
    if (from == xs.size()) return Formula::top();
    Formula rest = lex_formula(xs, from + 1);
    if (from + 1 == xs.size()) return Formula::ge(xs[from]);
    return Formula::gt(xs[from]) || (Formula::eq(xs[from]) && rest);
}
}  // namespace detail

/// First nonzero coordinate positive, or x = 0.
inline OVSpace lex_cone(std::size_t n) { return OVSpace(n, detail::lex_formula(coords(n), 0)); }

/// m lexicographic pairs (x_{2k-1}, x_{2k}) in dimension 2m.
inline OVSpace lex_pair_product(std::size_t m) {
    auto xs = coords(2 * m);
    std::vector<Formula> ks;
    for (std::size_t k = 0; k < m; ++k)
        ks.push_back(detail::lex_formula({xs[2 * k], xs[2 * k + 1]}, 0));
    return OVSpace(2 * m, Formula::conj(ks));
}

/// {x : c . x >= 0}
inline OVSpace halfspace_wedge(std::size_t n, const Vector& c) {
    if (c.size() != n) throw DimensionMismatch("normal vector has " + std::to_string(c.size()) + " entries");
    auto xs = coords(n);
    AffineExpr e;
    for (std::size_t i = 0; i < n; ++i) e.axpy(c[i], xs[i]);
    return OVSpace(n, Formula::ge(e));
}

inline OVSpace full_wedge(std::size_t n) { return OVSpace(n, Formula::top()); }
inline OVSpace zero_cone(std::size_t n) { return OVSpace(n, zero_formula(coords(n))); }

/// Conic hull of the generators: exists lambda >= 0 with x = sum lambda_i g_i.
inline OVSpace generated_wedge(std::size_t n, const std::vector<Vector>& gens, const Limits& limits = {}) {
    for (const auto& g : gens)
        if (g.size() != n) throw DimensionMismatch("generator " + vector_str(g) + " is not in Q^" + std::to_string(n));
    auto xs = coords(n);
    auto lam = var_block("_lam", gens.size());
    std::vector<Formula> ks;
    for (Var l : lam) ks.push_back(Formula::ge(AffineExpr(l)));
    for (std::size_t i = 0; i < n; ++i) {
        AffineExpr e = xs[i];
        for (std::size_t k = 0; k < gens.size(); ++k) e.axpy(-gens[k][i], AffineExpr(lam[k]));
        ks.push_back(Formula::eq(e));
    }
    return OVSpace(n, qe::eliminate_exists(Formula::conj(ks), lam, limits));
}

struct Entry {
    std::string name;
    OVSpace space;
};

/// Named corpus used by the property suites and the CLI corpus script.
inline std::vector<Entry> standard_corpus() {
    std::vector<Entry> out;
    auto add = [&](std::string name, OVSpace s) { out.push_back({std::move(name), std::move(s)}); };
    add("closed_orthant 1", closed_orthant(1));
    add("closed_orthant 2", closed_orthant(2));
    add("closed_orthant 3", closed_orthant(3));
    add("closed_orthant 6", closed_orthant(6));
    add("strict_halfspace_cone 2", strict_halfspace_cone(2));
    add("lex_cone 2", lex_cone(2));
    add("lex_cone 3", lex_cone(3));
    add("open_orthant_cone 2", open_orthant_cone(2));
    add("open_orthant_cone 3", open_orthant_cone(3));
    add("open_orthant_cone 4", open_orthant_cone(4));
    add("lex_pair_product 1", lex_pair_product(1));
    add("lex_pair_product 2", lex_pair_product(2));
    add("lex_pair_product 3", lex_pair_product(3));
    add("hull (1,1) (1,-1)", generated_wedge(2, {{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}}));
    add("hull (1,0,0) (1,1,0) (1,0,1)",
        generated_wedge(3, {{Rational(1), Rational(0), Rational(0)},
                            {Rational(1), Rational(1), Rational(0)},
                            {Rational(1), Rational(0), Rational(1)}}));
    add("halfspace_wedge 2 1 0", halfspace_wedge(2, {Rational(1), Rational(0)}));
    add("zero_cone 2", zero_cone(2));
    add("full_wedge 1", full_wedge(1));
    return out;
}

}  // namespace ovs::corpus
