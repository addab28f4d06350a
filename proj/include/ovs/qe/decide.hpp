#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ovs/qe/eliminate.hpp"

namespace ovs::qe {

enum class Quantifier { Exists, Forall };

struct Block {
    Quantifier quantifier;
    std::vector<Var> vars;
};

/// Quantifier prefix (outermost first) over a quantifier-free matrix.
struct PrenexFormula {
    std::vector<Block> blocks;
    Formula matrix;

    static PrenexFormula exists(std::vector<Var> vars, Formula m) {
        return {{{Quantifier::Exists, std::move(vars)}}, std::move(m)};
    }
    static PrenexFormula forall(std::vector<Var> vars, Formula m) {
        return {{{Quantifier::Forall, std::move(vars)}}, std::move(m)};
    }

    std::set<Var> bound_vars() const {
        std::set<Var> out;
        for (const auto& b : blocks) out.insert(b.vars.begin(), b.vars.end());
        return out;
    }
    std::set<Var> free_vars() const {
        auto fv = matrix.free_vars();
        for (const auto& b : blocks)
            for (Var v : b.vars) fv.erase(v);
        return fv;
    }
};

/// Assignment satisfying an existential block.
struct Witness {
    Point assignment;
};

/// Quantifier-free formula equivalent to `blocks[from..]` applied to the matrix.
inline Formula reduce_blocks(const PrenexFormula& s, std::size_t from, const Limits& limits) {
    Formula f = s.matrix;
    for (std::size_t i = s.blocks.size(); i > from; --i) {
        const Block& b = s.blocks[i - 1];
        f = b.quantifier == Quantifier::Exists ? eliminate_exists(f, b.vars, limits)
                                               : eliminate_forall(f, b.vars, limits);
    }
    return f;
}

/// A satisfying assignment of a quantifier-free formula, or none.
inline std::optional<Point> find_model(const Formula& f, const Limits& limits = {}) {
    std::optional<Point> model;
    auto vars = f.free_vars();
    std::vector<Var> all(vars.begin(), vars.end());
    for_each_cell(
        f,
        [&](const Cell& c) {
            auto p = project_cell(c, all, limits);
            if (!p.cell) return false;
            model = back_substitute(p.trace, Point{});
            if (!model) throw InternalInvariantViolation("back-substitution failed on a feasible cell");
            return true;
        },
        limits, feasible_filter(limits));
    if (model) {
        for (Var v : all) model->try_emplace(v, Rational(0));
        if (!f.eval(*model)) throw InternalInvariantViolation("model does not satisfy its formula");
    }
    return model;
}

inline bool satisfiable(const Formula& f, const Limits& limits = {}) { return find_model(f, limits).has_value(); }

/// Truth value of a closed sentence. Universal blocks are handled as
/// negated existential ones.
inline bool decide(const PrenexFormula& s, const Limits& limits = {}) {
    if (auto fv = s.free_vars(); !fv.empty())
        throw InvalidArgument("decide expects a sentence; '" + fv.begin()->name() + "' is free");
    if (s.blocks.empty()) return s.matrix.eval(Point{});
    Formula inner = reduce_blocks(s, 1, limits);
    if (s.blocks.front().quantifier == Quantifier::Exists) return satisfiable(inner, limits);
    return !satisfiable(Formula::negate(inner), limits);
}

/// For a sentence whose outermost block is existential: an assignment to that
/// block making the (reduced) remainder true, or none if the sentence is false.
inline std::optional<Witness> find_witness(const PrenexFormula& s, const Limits& limits = {}) {
    if (s.blocks.empty() || s.blocks.front().quantifier != Quantifier::Exists)
        throw InvalidArgument("find_witness needs a leading existential block");
    if (auto fv = s.free_vars(); !fv.empty())
        throw InvalidArgument("find_witness expects a sentence; '" + fv.begin()->name() + "' is free");
    Formula inner = reduce_blocks(s, 1, limits);
    auto model = find_model(inner, limits);
    if (!model) return std::nullopt;
    Witness w;
    for (Var v : s.blocks.front().vars) {
        auto it = model->find(v);
        w.assignment[v] = it == model->end() ? Rational(0) : it->second;
    }
    if (!inner.eval(w.assignment)) throw InternalInvariantViolation("witness does not satisfy the matrix");
    return w;
}

/// Counterexample to f <-> g (a point where they differ), or none if equivalent.
inline std::optional<Point> distinguishing_point(const Formula& f, const Formula& g, const Limits& limits = {}) {
    if (auto p = find_model(f && !g, limits)) return p;
    return find_model(g && !f, limits);
}

/// Decides  forall vars. f <-> g.
inline bool equivalent(const Formula& f, const Formula& g, const Limits& limits = {}) {
    return !distinguishing_point(f, g, limits).has_value();
}

// ---------------------------------------------------------------------------
// Limits along a ray. For a formula whose variables are moved along
// v = base_v + s * dir_v, every atom is eventually sign-constant as s tends
// to +infinity (or to 0 from above), and so is the whole boolean combination.

enum class RayLimit { PlusInfinity, ZeroPlus };

struct Ray {
    std::map<Var, std::pair<AffineExpr, AffineExpr>> moves;  // var -> (base, direction)
};

namespace detail {

inline Formula lex_atom(const AffineExpr& dominant, const AffineExpr& minor, Rel rel) {
    switch (rel) {
        case Rel::GT: return Formula::gt(dominant) || (Formula::eq(dominant) && Formula::gt(minor));
        case Rel::GE: return Formula::gt(dominant) || (Formula::eq(dominant) && Formula::ge(minor));
        case Rel::EQ: return Formula::eq(dominant) && Formula::eq(minor);
    }
    return Formula::bottom();
}

}  // namespace detail

/// Truth of `f` at base + s*dir for all sufficiently large s (PlusInfinity)
/// or all sufficiently small positive s (ZeroPlus).
inline Formula ray_limit(const Formula& f, const Ray& ray, RayLimit where) {
    std::map<Var, AffineExpr> base;
    for (const auto& [v, bd] : ray.moves) base.emplace(v, bd.first);
    return f.map_atoms([&](const Atom& a) {
        AffineExpr constant_part = a.expr.substitute(base);
        AffineExpr slope;
        for (const auto& [v, bd] : ray.moves) slope.axpy(a.expr.coeff(v), bd.second);
        return where == RayLimit::PlusInfinity ? detail::lex_atom(slope, constant_part, a.rel)
                                               : detail::lex_atom(constant_part, slope, a.rel);
    });
}

}  // namespace ovs::qe
