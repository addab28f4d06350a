#pragma once

#include <optional>
#include <utility>

#include "ovs/ovskit/predicates.hpp"

namespace ovs {

/// Infinitely small elements as a set and as a verified subspace basis.
struct Infinitesimals {
    SemilinearSet set;
    Subspace subspace;
};

/// Basis of a semilinear set that should be a subspace: grow a spanning set
/// by witnesses outside the current span until no annihilating functional is
/// violated, then certify the span is the whole set.
inline Subspace extract_subspace(const SemilinearSet& s, const Limits& limits = {}) {
    const std::size_t n = s.dim();
    auto xs = coords(n);
    auto xv = var_block("x", n);
    std::vector<Vector> found;
    for (std::size_t round = 0; round <= n; ++round) {
        Subspace w(n, found);
        bool grew = false;
        for (const auto& c : w.annihilator()) {
            AffineExpr cx;
            for (std::size_t i = 0; i < n; ++i) cx.axpy(c[i], xs[i]);
            if (auto m = qe::find_model(s.formula() && Formula::ne(cx), limits)) {
                found.push_back(read_vector(*m, xv));
                grew = true;
                break;
            }
        }
        if (!grew) break;
    }
    Subspace span(n, found);
    if (!qe::equivalent(s.formula(), span.formula(xs), limits))
        throw NotASubspace("set " + s.str() + " is not the span of " + span.str());
    return span;
}

/// Formula in x1..xn: exists y, forall t >= 1, -y <= t x <= y.
inline SemilinearSet infinitesimal_set(const OVSpace& v, const Limits& limits = {}) {
    require_wedge(v, limits);
    const std::size_t n = v.dim();
    auto x = coords(n);
    auto y = var_block("_y", n);
    const auto& p = v.positive();
    Formula f = encode::ray_from_one(p, exprs(y), -x) && encode::ray_from_one(p, exprs(y), x);
    return SemilinearSet(n, qe::eliminate_exists(f, y, limits));
}

inline Infinitesimals infinitesimals(const OVSpace& v, const Limits& limits = {}) {
    auto set = infinitesimal_set(v, limits);
    auto sub = extract_subspace(set, limits);
    return {std::move(set), std::move(sub)};
}

/// { x : exists xi in V+, forall n >= 1, n x + xi in V+ }.
inline SemilinearSet d_wedge_set(const OVSpace& v, const Limits& limits = {}) {
    require_wedge(v, limits);
    const std::size_t n = v.dim();
    auto xi = var_block("_xi", n);
    const auto& p = v.positive();
    Formula f = p.at(exprs(xi)) && encode::ray_from_one(p, exprs(xi), coords(n));
    return SemilinearSet(n, qe::eliminate_exists(f, xi, limits));
}

/// D-wedge with its postconditions checked: contains V+, is a wedge, and
/// D cap -D is the set of infinitesimals.
inline SemilinearSet d_wedge(const OVSpace& v, const Limits& limits = {}) {
    auto d = d_wedge_set(v, limits);
    if (!qe::subset(v.positive(), d, limits)) throw PostconditionFailed("V+ is not contained in D");
    if (!is_wedge(d, limits)) throw PostconditionFailed("D is not a wedge");
    auto x = coords(v.dim());
    auto n = infinitesimal_set(v, limits);
    if (!qe::equivalent(d.at(x) && d.at(-x), n.formula(), limits))
        throw PostconditionFailed("D cap -D differs from the infinitesimals");
    return d;
}

/// Formula in x1..xn: x is a u-uniform limit of elements of A for some u in V+,
///   exists u in V+ forall e > 0 exists a in A : -e u <= x - a <= e u.
/// The admissible e are upward closed, so "all e > 0" is the limit e -> 0+.
inline SemilinearSet uniform_closure_set(const OVSpace& v, const SemilinearSet& a_set, const Limits& limits = {}) {
    require_wedge(v, limits);
    if (a_set.dim() != v.dim()) throw DimensionMismatch("set and space dimensions differ");
    const std::size_t n = v.dim();
    auto x = coords(n);
    auto a = var_block("_a", n);
    auto w = var_block("_w", n);  // stands for e*u
    auto u = var_block("_u", n);
    const auto& p = v.positive();
    Formula near = qe::eliminate_exists(
        a_set.at(exprs(a)) && p.at(exprs(w) - x + exprs(a)) && p.at(exprs(w) + x - exprs(a)), a, limits);
    qe::Ray ray;
    for (std::size_t i = 0; i < n; ++i) ray.moves.emplace(w[i], std::pair{AffineExpr(), AffineExpr(u[i])});
    Formula lim = qe::ray_limit(near, ray, qe::RayLimit::ZeroPlus);
    return SemilinearSet(n, qe::eliminate_exists(p.at(exprs(u)) && lim, u, limits));
}

inline bool uniform_closure_member(const OVSpace& v, const SemilinearSet& a_set, const Vector& x,
                                   const Limits& limits = {}) {
    return uniform_closure_set(v, a_set, limits).contains(x);
}

inline Verdict is_uniformly_closed(const OVSpace& v, const SemilinearSet& a_set, const Limits& limits = {}) {
    auto closure = uniform_closure_set(v, a_set, limits);
    if (auto m = qe::find_model(closure.formula() && !a_set.formula(), limits))
        return Verdict::no({{"x", read_vector(*m, var_block("x", v.dim()))}}, "uniform limit outside the set");
    return Verdict::yes();
}

/// Quotient by an order ideal, ordered by the image of V+.
inline std::pair<OVSpace, QuotientPresentation> quotient(const OVSpace& v, const Subspace& ideal,
                                                         const Limits& limits = {}) {
    if (ideal.ambient() != v.dim()) throw DimensionMismatch("ideal lives in a different space");
    if (auto oi = is_order_ideal(v, ideal.as_set(), limits); !oi)
        throw NotAnOrderIdeal(ideal.str() + " is not an order ideal (" + oi.note + ")");
    auto qp = QuotientPresentation::of(ideal);
    OVSpace q(qe::project(v.positive(), qp.projection, limits));
    return {std::move(q), std::move(qp)};
}

/// Least upper bound of {u, w}. None when no supremum exists; throws
/// NonUniqueSupremum when the set of least upper bounds is not a point.
inline std::optional<Vector> exists_sup(const OVSpace& v, const Vector& u, const Vector& w,
                                        std::size_t lattice_dim_max, const Limits& limits = {}) {
    if (v.dim() > lattice_dim_max)
        throw InvalidArgument("lattice checks limited to dimension " + std::to_string(lattice_dim_max));
    if (u.size() != v.dim() || w.size() != v.dim()) throw DimensionMismatch("points do not match the space");
    const std::size_t n = v.dim();
    auto s = coords(n);
    auto z = var_block("_z", n);
    const auto& p = v.positive();
    auto eu = exprs(u), ew = exprs(w);
    Formula below_some_bound = qe::eliminate_exists(
        p.at(exprs(z) - eu) && p.at(exprs(z) - ew) && !p.at(exprs(z) - s), z, limits);
    Formula sup = p.at(s - eu) && p.at(s - ew) && !below_some_bound;
    auto m = qe::find_model(sup, limits);
    if (!m) return std::nullopt;
    Vector s0 = read_vector(*m, var_block("x", n));
    if (auto other = qe::find_model(sup && nonzero_formula(s - exprs(s0)), limits))
        throw NonUniqueSupremum("both " + vector_str(s0) + " and " +
                                vector_str(read_vector(*other, var_block("x", n))) + " are least upper bounds");
    return s0;
}

/// Every pair has a supremum. By translation invariance it suffices to test
/// pairs (0, d).
inline Verdict is_riesz(const OVSpace& v, std::size_t lattice_dim_max, const Limits& limits = {}) {
    if (v.dim() > lattice_dim_max)
        throw InvalidArgument("lattice checks limited to dimension " + std::to_string(lattice_dim_max));
    const std::size_t n = v.dim();
    auto d = var_block("_d", n);
    auto s = var_block("_s", n);
    auto z = var_block("_z", n);
    const auto& p = v.positive();
    Formula undercut = qe::eliminate_exists(
        p.at(exprs(z)) && p.at(exprs(z) - exprs(d)) && !p.at(exprs(z) - exprs(s)), z, limits);
    Formula has_sup =
        qe::eliminate_exists(p.at(exprs(s)) && p.at(exprs(s) - exprs(d)) && !undercut, s, limits);
    if (auto m = qe::find_model(!has_sup, limits))
        return Verdict::no({{"u", Vector(n)}, {"v", read_vector(*m, d)}}, "no supremum of u and v");
    return Verdict::yes();
}

}  // namespace ovs
