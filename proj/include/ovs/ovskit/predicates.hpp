#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ovs/ovskit/space.hpp"
#include "ovs/qe/project.hpp"

namespace ovs {

/// Outcome of a decided predicate. A false verdict carries named witness
/// vectors (e.g. "x", "y") that refute the property.
struct Verdict {
    bool holds = true;
    std::map<std::string, Vector> witness;
    std::string note;

    explicit operator bool() const { return holds; }
    static Verdict yes(std::string note = {}) { return {true, {}, std::move(note)}; }
    static Verdict no(std::map<std::string, Vector> w, std::string note = {}) {
        return {false, std::move(w), std::move(note)};
    }
};

namespace encode {

/// forall t >= 1 : base + t*dir in S.
/// Valid for convex S: the admissible t form an interval, so the condition is
/// "t = 1 admissible and every large t admissible".
inline Formula ray_from_one(const SemilinearSet& s, const std::vector<AffineExpr>& base,
                            const std::vector<AffineExpr>& dir) {
    qe::Ray ray;
    auto xs = var_block("x", s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) ray.moves.emplace(xs[i], std::pair{base[i], dir[i]});
    return s.at(base + dir) && qe::ray_limit(s.formula(), ray, qe::RayLimit::PlusInfinity);
}

/// forall t in Q : base + t*dir in S, for convex S (both tails admissible).
inline Formula full_line(const SemilinearSet& s, const std::vector<AffineExpr>& base,
                         const std::vector<AffineExpr>& dir) {
    qe::Ray up, down;
    auto xs = var_block("x", s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) {
        up.moves.emplace(xs[i], std::pair{base[i], dir[i]});
        down.moves.emplace(xs[i], std::pair{base[i], -dir[i]});
    }
    return qe::ray_limit(s.formula(), up, qe::RayLimit::PlusInfinity) &&
           qe::ray_limit(s.formula(), down, qe::RayLimit::PlusInfinity);
}

/// forall e in (0, 1] : e*scaled + fixed in S, for convex S.
inline Formula shrinking_segment(const SemilinearSet& s, const std::vector<AffineExpr>& fixed,
                                 const std::vector<AffineExpr>& scaled) {
    qe::Ray ray;
    auto xs = var_block("x", s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) ray.moves.emplace(xs[i], std::pair{fixed[i], scaled[i]});
    return s.at(fixed + scaled) && qe::ray_limit(s.formula(), ray, qe::RayLimit::ZeroPlus);
}

/// The set's formula with every constant term b replaced by b*s; for s = 1/r > 0
/// it describes { x : r x in S }.
inline Formula rescaled(const SemilinearSet& set, Var s) {
    return set.formula().map_atoms([&](const Atom& a) {
        AffineExpr e = a.expr - AffineExpr(a.expr.constant());
        e.axpy(a.expr.constant(), AffineExpr(s));
        return Formula::atom(e, a.rel);
    });
}

}  // namespace encode

namespace detail {

inline std::optional<Point> model(const Formula& f, const Limits& limits) { return qe::find_model(f, limits); }

inline Vector zero(std::size_t n) { return Vector(n); }

}  // namespace detail

/// W + W in W and rW in W for r >= 0.
inline Verdict is_wedge(const SemilinearSet& s, const Limits& limits = {}) {
    const std::size_t n = s.dim();
    auto x = var_block("_x", n);
    auto y = var_block("_y", n);
    if (!s.contains(detail::zero(n))) {
        if (auto m = qe::sample(s, limits)) return Verdict::no({{"r", {Rational(0)}}, {"x", *m}}, "0*x not in set");
        return Verdict::yes("empty set");
    }
    Var sc = Var::named("_s");
    Formula scaled = Formula::gt(sc) && s.at(exprs(x)) && !encode::rescaled(s, sc).substitute([&] {
        std::map<Var, AffineExpr> sub;
        for (std::size_t i = 0; i < n; ++i) sub.emplace(Var::coord(i + 1), AffineExpr(x[i]));
        return sub;
    }());
    if (auto m = detail::model(scaled, limits)) {
        Rational r = m->at(sc).inverse();
        return Verdict::no({{"r", {r}}, {"x", read_vector(*m, x)}}, "r*x not in set");
    }
    Formula sum = s.at(exprs(x)) && s.at(exprs(y)) && !s.at(exprs(x) + exprs(y));
    if (auto m = detail::model(sum, limits))
        return Verdict::no({{"x", read_vector(*m, x)}, {"y", read_vector(*m, y)}}, "x+y not in set");
    return Verdict::yes();
}

/// Wedge with K cap -K = {0}.
inline Verdict is_cone(const SemilinearSet& s, const Limits& limits = {}) {
    auto w = is_wedge(s, limits);
    if (!w) return w;
    const std::size_t n = s.dim();
    if (!s.contains(detail::zero(n))) return Verdict::no({}, "empty set: K cap -K is not {0}");
    auto x = exprs(var_block("_x", n));
    if (auto m = detail::model(s.at(x) && s.at(-x) && nonzero_formula(x), limits))
        return Verdict::no({{"x", read_vector(*m, var_block("_x", n))}}, "x and -x both positive");
    return Verdict::yes();
}

/// K - K = V.
inline Verdict is_generating(const SemilinearSet& s, const Limits& limits = {}) {
    const std::size_t n = s.dim();
    auto a = var_block("_a", n);
    auto v = var_block("_v", n);
    Formula diff = qe::eliminate_exists(s.at(exprs(a)) && s.at(exprs(a) - exprs(v)), a, limits);
    if (auto m = detail::model(!diff, limits)) return Verdict::no({{"v", read_vector(*m, v)}}, "v not in K - K");
    return Verdict::yes();
}

inline Verdict require_wedge(const OVSpace& space, const Limits& limits) {
    if (auto cached = space.flags().get("wedge")) {
        if (!*cached) throw NotAWedge("positive set " + space.positive().str() + " is not a wedge");
        return Verdict::yes();
    }
    auto w = is_wedge(space.positive(), limits);
    space.flags().set("wedge", w.holds);
    if (!w) throw NotAWedge("positive set " + space.positive().str() + " is not a wedge (" + w.note + ")");
    return w;
}

inline bool leq(const OVSpace& v, const Vector& x, const Vector& y) {
    if (x.size() != v.dim() || y.size() != v.dim()) throw DimensionMismatch("points do not match the space");
    return v.positive().contains(y - x);
}

inline bool order_interval_member(const OVSpace& v, const Vector& z, const Vector& a, const Vector& b) {
    return leq(v, a, z) && leq(v, z, b);
}

/// Outcome of the order-unit test; `Undecided` when e is not positive.
struct OrderUnitResult {
    enum class Status { Yes, No, Undecided } status = Status::Undecided;
    std::optional<Vector> witness;  // an x with no t >= 0 such that te - x >= 0
    std::string note;
};

/// For every x some t >= 0 has te - x in V+. Requires e in V+, where the
/// admissible t are upward closed and rational t can be replaced by integers.
inline OrderUnitResult is_order_unit(const OVSpace& v, const Vector& e, const Limits& limits = {}) {
    if (e.size() != v.dim()) throw DimensionMismatch("order unit candidate has the wrong size");
    require_wedge(v, limits);
    if (!v.positive().contains(e))
        return {OrderUnitResult::Status::Undecided, std::nullopt, "not positive; literal definition undecided"};
    const std::size_t n = v.dim();
    auto x = var_block("_x", n);
    Var t = Var::named("_t");
    std::vector<AffineExpr> te;
    for (const auto& c : e) te.push_back(AffineExpr::term(t, c));
    Formula dominated = qe::eliminate_exists(Formula::ge(t) && v.positive().at(te - exprs(x)), {t}, limits);
    if (auto m = detail::model(!dominated, limits))
        return {OrderUnitResult::Status::No, read_vector(*m, x), "x is not dominated by any multiple of e"};
    return {OrderUnitResult::Status::Yes, std::nullopt, {}};
}

/// [a, b] in A for all a, b in A.
inline Verdict is_order_convex(const OVSpace& v, const SemilinearSet& a_set, const Limits& limits = {}) {
    if (a_set.dim() != v.dim()) throw DimensionMismatch("set and space dimensions differ");
    const std::size_t n = v.dim();
    auto a = exprs(var_block("_a", n));
    auto b = exprs(var_block("_b", n));
    auto z = var_block("_z", n);
    Formula f = a_set.at(a) && a_set.at(b) && v.positive().at(exprs(z) - a) && v.positive().at(b - exprs(z)) &&
                !a_set.at(exprs(z));
    if (auto m = detail::model(f, limits))
        return Verdict::no({{"a", read_vector(*m, var_block("_a", n))},
                            {"b", read_vector(*m, var_block("_b", n))},
                            {"z", read_vector(*m, z)}},
                           "a <= z <= b with z outside the set");
    return Verdict::yes();
}

/// Closed under addition and under all rational scalings (0, negation, positive rescaling).
inline Verdict is_subspace(const SemilinearSet& s, const Limits& limits = {}) {
    const std::size_t n = s.dim();
    if (!s.contains(detail::zero(n))) return Verdict::no({}, "0 not in set");
    auto x = var_block("_x", n);
    if (auto m = detail::model(s.at(exprs(x)) && !s.at(-exprs(x)), limits))
        return Verdict::no({{"x", read_vector(*m, x)}}, "-x not in set");
    auto w = is_wedge(s, limits);
    if (!w) return w;
    return Verdict::yes();
}

inline Verdict is_order_ideal(const OVSpace& v, const SemilinearSet& a_set, const Limits& limits = {}) {
    auto sub = is_subspace(a_set, limits);
    if (!sub) return sub;
    return is_order_convex(v, a_set, limits);
}

/// x - n*y in V+ for all n forces -y in V+. Witness (x, y) on failure.
inline Verdict is_archimedean(const OVSpace& v, const Limits& limits = {}) {
    require_wedge(v, limits);
    if (auto cached = v.flags().get("archimedean"); cached && *cached) return Verdict::yes();
    const std::size_t n = v.dim();
    auto x = var_block("_x", n);
    auto y = var_block("_y", n);
    const auto& p = v.positive();
    Formula bad = p.at(exprs(x)) && encode::ray_from_one(p, exprs(x), -exprs(y)) && !p.at(-exprs(y));
    auto m = detail::model(bad, limits);
    v.flags().set("archimedean", !m);
    if (m) return Verdict::no({{"x", read_vector(*m, x)}, {"y", read_vector(*m, y)}}, "x - ny >= 0 for all n, -y not >= 0");
    return Verdict::yes();
}

/// Archimedean property through order-infimum form: every lower bound z of
/// { y/n : n >= 1 } for positive y satisfies z <= 0. Independent encoding
/// (limit at 0+ of y/n) used to cross-check `is_archimedean`.
inline Verdict is_archimedean_via_infimum(const OVSpace& v, const Limits& limits = {}) {
    require_wedge(v, limits);
    const std::size_t n = v.dim();
    auto y = var_block("_y", n);
    auto z = var_block("_z", n);
    const auto& p = v.positive();
    Formula bad = p.at(exprs(y)) && encode::shrinking_segment(p, -exprs(z), exprs(y)) && !p.at(-exprs(z));
    if (auto m = detail::model(bad, limits))
        return Verdict::no({{"y", read_vector(*m, y)}, {"z", read_vector(*m, z)}}, "z <= y/n for all n, z not <= 0");
    return Verdict::yes();
}

/// x - n*y in V+ for all integers n forces y = 0; equivalently V+ contains
/// no line. Both encodings are decided and must agree.
inline Verdict is_almost_archimedean(const OVSpace& v, const Limits& limits = {}) {
    require_wedge(v, limits);
    const std::size_t n = v.dim();
    auto x = var_block("_x", n);
    auto y = var_block("_y", n);
    const auto& p = v.positive();

    Formula integer_form = encode::full_line(p, exprs(x), -exprs(y)) && nonzero_formula(exprs(y));
    auto m1 = detail::model(integer_form, limits);

    // No line  x + t*y  (t in Q) through a positive x: rescaled to  e*x +/- y, e in (0,1].
    Formula line_form = p.at(exprs(x)) && encode::shrinking_segment(p, exprs(y), exprs(x)) &&
                        encode::shrinking_segment(p, -exprs(y), exprs(x)) && nonzero_formula(exprs(y));
    bool has_line = qe::satisfiable(line_form, limits);

    if (m1.has_value() != has_line)
        throw EncodingDisagreement("integer-quantifier and no-line encodings disagree on " + p.str());
    v.flags().set("almost_archimedean", !has_line);
    if (m1)
        return Verdict::no({{"x", read_vector(*m1, x)}, {"y", read_vector(*m1, y)}},
                           "x + ty in V+ for all t with y != 0");
    return Verdict::yes();
}

/// x + n*y in V+ for all n forces y in V+.
inline Verdict is_archimedean_element(const OVSpace& v, const Vector& x, const Limits& limits = {}) {
    require_wedge(v, limits);
    if (x.size() != v.dim()) throw DimensionMismatch("element has the wrong size");
    if (!v.positive().contains(x)) throw NotPositiveElement(vector_str(x) + " is not in V+");
    auto y = var_block("_y", v.dim());
    const auto& p = v.positive();
    Formula bad = encode::ray_from_one(p, exprs(x), exprs(y)) && !p.at(exprs(y));
    if (auto m = detail::model(bad, limits))
        return Verdict::no({{"y", read_vector(*m, y)}}, "x + ny >= 0 for all n, y not >= 0");
    return Verdict::yes();
}

/// x + n*y in V+ for all integers n forces y = 0.
inline Verdict is_almost_archimedean_element(const OVSpace& v, const Vector& x, const Limits& limits = {}) {
    require_wedge(v, limits);
    if (x.size() != v.dim()) throw DimensionMismatch("element has the wrong size");
    if (!v.positive().contains(x)) throw NotPositiveElement(vector_str(x) + " is not in V+");
    auto y = var_block("_y", v.dim());
    Formula bad = encode::full_line(v.positive(), exprs(x), exprs(y)) && nonzero_formula(exprs(y));
    if (auto m = detail::model(bad, limits))
        return Verdict::no({{"y", read_vector(*m, y)}}, "x + ny >= 0 for all integers n, y != 0");
    return Verdict::yes();
}

}  // namespace ovs
