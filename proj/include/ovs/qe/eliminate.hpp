#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ovs/linarith/dnf.hpp"

namespace ovs::qe {

/// Record of one eliminated variable: the atoms that mentioned it just
/// before elimination. Replaying these in reverse order recovers values.
struct EliminationStep {
    Var var;
    std::vector<Atom> bounds;
};

struct CellProjection {
    std::optional<Cell> cell;  // none: the cell was infeasible
    std::vector<EliminationStep> trace;
};

namespace detail {

inline bool cell_mentions(const Cell& c, Var v) {
    return std::any_of(c.begin(), c.end(), [v](const Atom& a) { return a.expr.mentions(v); });
}

// Variable choice: an equality partner first, otherwise the fewest
// lower*upper combinations (ties broken by name).
inline Var pick_variable(const Cell& c, const std::vector<Var>& pending) {
    std::optional<Var> best;
    std::size_t best_cost = 0;
    bool best_eq = false;
    for (Var v : pending) {
        std::size_t lo = 0, hi = 0;
        bool eq = false;
        for (const auto& a : c) {
            int s = a.expr.coeff(v).sign();
            if (s == 0) continue;
            if (a.rel == Rel::EQ) eq = true;
            else if (s > 0) ++lo;
            else ++hi;
        }
        std::size_t cost = lo * hi;
        bool better = !best || (eq && !best_eq) ||
                      (eq == best_eq && (cost < best_cost || (cost == best_cost && name_less(v, *best))));
        if (better) {
            best = v;
            best_cost = cost;
            best_eq = eq;
        }
    }
    return *best;
}

}  // namespace detail

/// Eliminates one variable from a conjunction. Exact over the rationals:
/// equalities are solved and substituted, otherwise every lower bound is
/// combined with every upper bound (strict if either side is strict).
inline std::optional<Cell> eliminate_var(const Cell& cell, Var v, const Limits& limits,
                                         std::vector<Atom>* bounds_out = nullptr) {
    std::vector<const Atom*> eqs, lower, upper;
    Cell rest;
    for (const auto& a : cell) {
        int s = a.expr.coeff(v).sign();
        if (s == 0) rest.push_back(a);
        else if (a.rel == Rel::EQ) eqs.push_back(&a);
        else if (s > 0) lower.push_back(&a);
        else upper.push_back(&a);
    }
    if (bounds_out) {
        bounds_out->clear();
        for (const auto& a : cell)
            if (a.expr.mentions(v)) bounds_out->push_back(a);
    }
    Cell out;
    for (const auto& a : rest)
        if (!add_atom(out, a)) return std::nullopt;

    if (!eqs.empty()) {
        // Pick the equality with the fewest terms; v := -(rest)/c.
        const Atom* pivot = *std::min_element(eqs.begin(), eqs.end(), [](const Atom* x, const Atom* y) {
            return x->expr.terms().size() < y->expr.terms().size();
        });
        Rational c = pivot->expr.coeff(v);
        AffineExpr value = pivot->expr.without(v) * (-c.inverse());
        for (const auto& a : cell) {
            if (&a == pivot || !a.expr.mentions(v)) continue;
            if (!add_atom(out, Atom{a.expr.substitute(v, value), a.rel})) return std::nullopt;
        }
        return out;
    }

    if (lower.size() * upper.size() + out.size() > limits.atom_budget)
        throw BudgetExceeded("elimination of '" + v.name() + "' needs more than " +
                             std::to_string(limits.atom_budget) + " atoms");
    for (const Atom* lo : lower) {
        Rational a = lo->expr.coeff(v);  // > 0
        for (const Atom* up : upper) {
            Rational b = -up->expr.coeff(v);  // > 0
            AffineExpr combined = lo->expr * b + up->expr * a;
            Rel r = (lo->rel == Rel::GT || up->rel == Rel::GT) ? Rel::GT : Rel::GE;
            if (!add_atom(out, Atom{combined.without(v), r})) return std::nullopt;
        }
    }
    return out;
}

/// Projects a conjunction onto the complement of `vars`.
inline CellProjection project_cell(const Cell& cell, const std::vector<Var>& vars, const Limits& limits) {
    CellProjection res;
    Cell cur = cell;
    std::vector<Var> pending;
    for (Var v : vars)
        if (detail::cell_mentions(cur, v)) pending.push_back(v);
    while (!pending.empty()) {
        Var v = detail::pick_variable(cur, pending);
        EliminationStep step{v, {}};
        auto next = eliminate_var(cur, v, limits, &step.bounds);
        res.trace.push_back(std::move(step));
        if (!next) return res;
        cur = std::move(*next);
        pending.clear();
        for (Var w : vars)
            if (detail::cell_mentions(cur, w)) pending.push_back(w);
    }
    res.cell = std::move(cur);
    return res;
}

/// Exact satisfiability of a conjunction over the rationals.
inline bool cell_satisfiable(const Cell& cell, const Limits& limits) {
    std::set<Var> vs;
    for (const auto& a : cell) a.expr.collect_vars(vs);
    auto p = project_cell(cell, std::vector<Var>(vs.begin(), vs.end()), limits);
    return p.cell.has_value();  // all variables gone: remaining atoms are constants, already folded
}

/// Chooses a value for `var` given the values of all later-eliminated
/// variables: midpoint of the tightest finite bounds, bound +/- 1 when one
/// sided, 0 when unconstrained. Returns none if the bounds are inconsistent.
inline std::optional<Rational> choose_value(const EliminationStep& step, const Point& p) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& a : step.bounds) {
        Rational c = a.expr.coeff(step.var);
        Rational rest = a.expr.without(step.var).eval(p);
        Rational bound = -rest / c;  // c*v + rest rel 0
        if (a.rel == Rel::EQ) return bound;
        bool strict = a.rel == Rel::GT;
        if (c.sign() > 0) {
            if (!lo || bound > *lo || (bound == *lo && strict)) { lo = bound; lo_strict = strict; }
        } else {
            if (!hi || bound < *hi || (bound == *hi && strict)) { hi = bound; hi_strict = strict; }
        }
    }
    if (lo && hi) {
        if (*lo > *hi) return std::nullopt;
        if (*lo == *hi) {
            if (lo_strict || hi_strict) return std::nullopt;
            return *lo;
        }
        return (*lo + *hi) / Rational(2);
    }
    if (lo) return *lo + Rational(1);
    if (hi) return *hi - Rational(1);
    return Rational(0);
}

/// Extends `p` (values of the variables surviving the projection) to the
/// eliminated ones by replaying the trace backwards.
inline std::optional<Point> back_substitute(const std::vector<EliminationStep>& trace, Point p) {
    for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
        // A variable that cancelled out of every later cell is free.
        std::set<Var> vs;
        for (const auto& a : it->bounds) a.expr.collect_vars(vs);
        for (Var w : vs)
            if (w != it->var) p.try_emplace(w, Rational(0));
        auto v = choose_value(*it, p);
        if (!v) return std::nullopt;
        p[it->var] = *v;
    }
    return p;
}

/// Branch filter for the DNF search: full satisfiability of the partial cell.
inline CellFilter feasible_filter(const Limits& limits) {
    if (!limits.prune_infeasible) return {};
    return [&limits](const Cell& c) { return cell_satisfiable(c, limits); };
}

/// Drops cells a full elimination proves empty.
inline Dnf prune_cells(Dnf d, const Limits& limits) {
    if (!limits.prune_infeasible) return d;
    std::erase_if(d, [&](const Cell& c) { return !cell_satisfiable(c, limits); });
    return d;
}

/// Quantifier-free equivalent of  exists vars. f  over the rationals.
inline Formula eliminate_exists(const Formula& f, const std::vector<Var>& vars, const Limits& limits = {}) {
    Dnf out;
    bool is_true = false;
    for_each_cell(
        f,
        [&](const Cell& c) {
            auto p = project_cell(c, vars, limits);
            if (!p.cell) return false;
            if (p.cell->empty()) {
                is_true = true;
                return true;
            }
            out.push_back(std::move(*p.cell));
            if (out.size() > limits.cell_budget)
                throw BudgetExceeded("elimination produced more than " + std::to_string(limits.cell_budget) +
                                     " cells");
            return false;
        },
        limits, feasible_filter(limits));
    if (is_true) return Formula::top();
    canonical_order(out);
    out = prune_cells(std::move(out), limits);
    merge_cells(out);
    return dnf_formula(out);
}

inline Formula eliminate_exists(const Formula& f, std::initializer_list<Var> vars, const Limits& limits = {}) {
    return eliminate_exists(f, std::vector<Var>(vars), limits);
}

/// Quantifier-free equivalent of  forall vars. f.
inline Formula eliminate_forall(const Formula& f, const std::vector<Var>& vars, const Limits& limits = {}) {
    return Formula::negate(eliminate_exists(Formula::negate(f), vars, limits)).nnf();
}

}  // namespace ovs::qe
