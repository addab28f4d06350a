#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "ovs/linarith/formula.hpp"

namespace ovs {

/// Budgets bounding every decision. Exceeding one is a hard error, never a
/// silent truncation.
struct Limits {
    std::size_t cell_budget = 100000;  // DNF cells produced by one expansion
    std::size_t atom_budget = 10000;   // atoms alive in one elimination cell
    bool prune_infeasible = true;      // drop cells refuted by a full elimination
};

/// A conjunction of canonical atoms.
using Cell = std::vector<Atom>;
/// A disjunction of cells.
using Dnf = std::vector<Cell>;

namespace detail {

// +1 if the term lists are equal, -1 if negated, 0 otherwise.
inline int proportional(const AffineExpr& a, const AffineExpr& b) {
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    if (ta.size() != tb.size()) return 0;
    bool same = true, opp = true;
    for (std::size_t i = 0; i < ta.size() && (same || opp); ++i) {
        if (ta[i].first != tb[i].first) return 0;
        if (same && ta[i].second != tb[i].second) same = false;
        if (opp && ta[i].second != -tb[i].second) opp = false;
    }
    return same ? 1 : (opp ? -1 : 0);
}

inline bool is_ineq(Rel r) { return r != Rel::EQ; }

}  // namespace detail

/// Conjoins `raw` to `cell`, pruning by pairwise coefficient proportionality.
/// Returns false when the cell becomes infeasible.
inline bool add_atom(Cell& cell, const Atom& raw) {
    auto ca = canonicalize(raw);
    if (auto* b = std::get_if<bool>(&ca)) return *b;
    Atom a = std::get<Atom>(std::move(ca));
    const Rational& ca_const = a.expr.constant();

    for (std::size_t i = 0; i < cell.size(); ++i) {
        const Atom& o = cell[i];
        int p = detail::proportional(o.expr, a.expr);
        if (p == 0) continue;
        const Rational& co = o.expr.constant();
        if (p == 1) {
            if (o.rel == Rel::EQ && a.rel == Rel::EQ) {
                if (co == ca_const) return true;
                return false;
            }
            if (o.rel == Rel::EQ || a.rel == Rel::EQ) {
                // h = -c_eq, so the inequality reduces to c_ineq - c_eq rel 0.
                const Atom& eq = o.rel == Rel::EQ ? o : a;
                const Atom& in = o.rel == Rel::EQ ? a : o;
                Atom reduced{AffineExpr(in.expr.constant() - eq.expr.constant()), in.rel};
                if (!reduced.holds(reduced.expr.constant())) return false;
                if (o.rel == Rel::EQ) return true;  // new inequality implied
                cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(i));
                return add_atom(cell, a);
            }
            // Same direction: keep the tighter one.
            bool new_tighter = ca_const < co || (ca_const == co && a.rel == Rel::GT && o.rel == Rel::GE);
            if (!new_tighter) return true;
            cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(i));
            --i;
            continue;
        }
        // Opposite homogeneous parts: h + co rel 0 and -h + ca rel 0.
        if (o.rel == Rel::EQ || a.rel == Rel::EQ) {
            const Atom& eq = o.rel == Rel::EQ ? o : a;
            const Atom& in = o.rel == Rel::EQ ? a : o;
            Atom reduced{AffineExpr(in.expr.constant() + eq.expr.constant()), in.rel};
            if (!reduced.holds(reduced.expr.constant())) return false;
            if (o.rel == Rel::EQ) return true;
            cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(i));
            return add_atom(cell, a);
        }
        Rational gap = co + ca_const;  // -co <= h <= ca
        if (gap.sign() < 0) return false;
        if (gap.is_zero()) {
            if (o.rel == Rel::GT || a.rel == Rel::GT) return false;
            Atom eq{o.expr, Rel::EQ};
            cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(i));
            return add_atom(cell, eq);
        }
    }
    cell.push_back(std::move(a));
    return true;
}

/// Ordering used for canonical printing: variables by name, then coefficient,
/// then constant, then relation.
inline bool atom_print_less(const Atom& a, const Atom& b) {
    auto sorted = [](const AffineExpr& e) {
        auto t = e.terms();
        std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) { return name_less(x.first, y.first); });
        return t;
    };
    auto ta = sorted(a.expr);
    auto tb = sorted(b.expr);
    for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
        if (ta[i].first != tb[i].first) return name_less(ta[i].first, tb[i].first);
        if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
    }
    if (ta.size() != tb.size()) return ta.size() < tb.size();
    if (a.expr.constant() != b.expr.constant()) return a.expr.constant() < b.expr.constant();
    return a.rel < b.rel;
}

inline void sort_cell(Cell& c) { std::sort(c.begin(), c.end(), atom_print_less); }

inline bool cell_print_less(const Cell& a, const Cell& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), atom_print_less);
}

/// Sorts atoms and cells, removes duplicate cells and cells that syntactically
/// contain another cell.
inline void canonical_order(Dnf& d) {
    for (auto& c : d) sort_cell(c);
    std::sort(d.begin(), d.end(), cell_print_less);
    d.erase(std::unique(d.begin(), d.end()), d.end());
    if (std::any_of(d.begin(), d.end(), [](const Cell& c) { return c.empty(); })) {
        d.assign(1, Cell{});
        return;
    }
    Dnf kept;
    for (std::size_t i = 0; i < d.size(); ++i) {
        bool subsumed = false;
        for (std::size_t j = 0; j < d.size() && !subsumed; ++j) {
            if (i == j || d[j].size() >= d[i].size()) continue;
            subsumed = std::all_of(d[j].begin(), d[j].end(), [&](const Atom& a) {
                return std::find(d[i].begin(), d[i].end(), a) != d[i].end();
            });
        }
        if (!subsumed) kept.push_back(d[i]);
    }
    d = std::move(kept);
}

/// Merges cells that differ in one atom whose alternatives cover a larger set:
///   C & e > 0  |  C & e = 0   ->  C & e >= 0
///   C & e >= 0 |  C & -e > 0  ->  C
inline void merge_cells(Dnf& d) {
    bool changed = true;
    while (changed) {
        changed = false;
        canonical_order(d);
        for (std::size_t i = 0; i < d.size() && !changed; ++i) {
            for (std::size_t j = 0; j < d.size() && !changed; ++j) {
                if (i == j || d[i].size() != d[j].size()) continue;
                // Find the single differing position.
                std::size_t diff = d[i].size();
                std::size_t ndiff = 0;
                std::size_t dj = 0;
                for (std::size_t k = 0; k < d[i].size(); ++k) {
                    auto it = std::find(d[j].begin(), d[j].end(), d[i][k]);
                    if (it == d[j].end()) {
                        ++ndiff;
                        diff = k;
                    }
                }
                if (ndiff != 1) continue;
                for (std::size_t k = 0; k < d[j].size(); ++k)
                    if (std::find(d[i].begin(), d[i].end(), d[j][k]) == d[i].end()) dj = k;
                const Atom& a = d[i][diff];
                const Atom& b = d[j][dj];
                int p = detail::proportional(a.expr, b.expr);
                if (p == 0) continue;
                std::optional<std::optional<Atom>> merged;  // outer: merge found; inner: replacement (none = drop)
                if (p == 1 && a.expr.constant() == b.expr.constant()) {
                    if ((a.rel == Rel::GT && b.rel == Rel::EQ) || (a.rel == Rel::EQ && b.rel == Rel::GT))
                        merged = std::optional<Atom>(Atom{a.rel == Rel::GT ? a.expr : b.expr, Rel::GE});
                }
                if (p == -1 && a.expr.constant() == -b.expr.constant()) {
                    bool ge_gt = (a.rel == Rel::GE && b.rel == Rel::GT) || (a.rel == Rel::GT && b.rel == Rel::GE);
                    if (ge_gt) merged = std::optional<Atom>();
                    // e = 0 | e > 0 with EQ sign-normalised the other way
                    if ((a.rel == Rel::EQ && b.rel == Rel::GT) || (a.rel == Rel::GT && b.rel == Rel::EQ)) {
                        const Atom& g = a.rel == Rel::GT ? a : b;
                        merged = std::optional<Atom>(Atom{g.expr, Rel::GE});
                    }
                }
                if (!merged) continue;
                Cell c;
                bool ok = true;
                for (std::size_t k = 0; k < d[i].size(); ++k)
                    if (k != diff) ok = ok && add_atom(c, d[i][k]);
                if (*merged) ok = ok && add_atom(c, **merged);
                if (!ok) continue;
                Dnf next;
                for (std::size_t k = 0; k < d.size(); ++k)
                    if (k != i && k != j) next.push_back(d[k]);
                next.push_back(std::move(c));
                d = std::move(next);
                changed = true;
            }
        }
    }
}

inline Formula cell_formula(const Cell& c) {
    std::vector<Formula> ks;
    ks.reserve(c.size());
    for (const auto& a : c) ks.push_back(Formula::atom(a));
    return Formula::conj(ks);
}

inline Formula dnf_formula(const Dnf& d) {
    std::vector<Formula> ks;
    ks.reserve(d.size());
    for (const auto& c : d) ks.push_back(cell_formula(c));
    return Formula::disj(ks);
}

/// Optional extra test on partial cells; false cuts the branch.
using CellFilter = std::function<bool(const Cell&)>;

/// Depth-first enumeration of the DNF cells of `f` with incremental pairwise
/// pruning of contradictory partial cells. `visit` returns true to stop early.
/// Returns true iff stopped early. Dead ends count against the cell budget
/// too, otherwise a long conjunction of clauses can search forever.
inline bool for_each_cell(const Formula& f, const std::function<bool(const Cell&)>& visit,
                          const Limits& limits = {}, const CellFilter& keep = {}) {
    Formula g = f.nnf();
    std::size_t produced = 0;
    auto count = [&] {
        if (++produced > limits.cell_budget)
            throw BudgetExceeded("DNF expansion exceeded " + std::to_string(limits.cell_budget) + " cells");
    };
    std::function<bool(Cell&, std::vector<Formula>&)> expand = [&](Cell& cell,
                                                                   std::vector<Formula>& pending) -> bool {
        if (pending.empty()) {
            count();
            return visit(cell);
        }
        Formula h = pending.back();
        pending.pop_back();
        bool stop = false;
        switch (h.kind()) {
            case Formula::Kind::True: stop = expand(cell, pending); break;
            case Formula::Kind::False: break;
            case Formula::Kind::Atom: {
                Cell next = cell;
                bool ok = add_atom(next, h.atom_value());
                // the filter only sees cells that actually changed
                if (ok && keep && next.size() >= 2 && next != cell) ok = keep(next);
                if (ok)
                    stop = expand(next, pending);
                else
                    count();
                break;
            }
            case Formula::Kind::And: {
                auto more = pending;
                for (const auto& k : h.children()) more.push_back(k);
                stop = expand(cell, more);
                break;
            }
            case Formula::Kind::Or: {
                // already implied by the cell: nothing to branch on
                bool implied = std::any_of(h.children().begin(), h.children().end(), [&](const Formula& k) {
                    if (k.kind() != Formula::Kind::Atom) return false;
                    Cell probe = cell;
                    return add_atom(probe, k.atom_value()) && probe == cell;
                });
                if (implied) {
                    stop = expand(cell, pending);
                    break;
                }
                // With a filter, make the branches disjoint (a | b == a | (!a & b)) so the
                // search visits each region once instead of once per covering literal.
                std::vector<Formula> refuted;
                for (const auto& k : h.children()) {
                    auto more = pending;
                    more.insert(more.end(), refuted.begin(), refuted.end());
                    more.push_back(k);
                    if (expand(cell, more)) { stop = true; break; }
                    if (keep && k.kind() == Formula::Kind::Atom) refuted.push_back(Formula::negate(k).nnf());
                }
                break;
            }
            case Formula::Kind::Not:
                throw InternalInvariantViolation("Not node survived NNF conversion");
        }
        pending.push_back(h);
        return stop;
    };
    Cell start;
    std::vector<Formula> pending{g};
    return expand(start, pending);
}

/// Equivalent disjunction of conjunctive cells, canonically ordered.
inline Dnf to_dnf_cells(const Formula& f, const Limits& limits = {}) {
    Dnf out;
    for_each_cell(f, [&](const Cell& c) { out.push_back(c); return false; }, limits);
    merge_cells(out);
    return out;
}

inline Formula to_dnf(const Formula& f, const Limits& limits = {}) { return dnf_formula(to_dnf_cells(f, limits)); }

}  // namespace ovs
