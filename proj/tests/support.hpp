#pragma once

// Test-side oracles that do not use the elimination engine, and seeded
// generators for randomized instances.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ovs/archkit/archimedeanize.hpp"
#include "ovs/corpus/cones.hpp"

namespace ovs::probe {

inline std::vector<Atom> atoms_of(const Formula& f) {
    std::vector<Atom> out;
    f.map_atoms([&](const Atom& a) {
        out.push_back(a);
        return Formula::atom(a);
    });
    return out;
}

inline std::vector<Rational> sorted_unique(std::vector<Rational> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Points that meet every sign pattern of a set of sorted breakpoints:
/// each breakpoint, the midpoints, and one point beyond each end.
inline std::vector<Rational> sample_line(const std::vector<Rational>& roots) {
    if (roots.empty()) return {Rational(0)};
    std::vector<Rational> out{roots.front() - Rational(1)};
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out.push_back(roots[i]);
        if (i + 1 < roots.size()) out.push_back((roots[i] + roots[i + 1]) / Rational(2));
    }
    out.push_back(roots.back() + Rational(1));
    return out;
}

/// exists v. g, for g whose only free variable is v.
inline bool exists_univariate(const Formula& g, Var v) {
    std::vector<Rational> roots;
    for (const auto& a : atoms_of(g)) {
        Rational c = a.expr.coeff(v);
        if (!c.is_zero()) roots.push_back(-a.expr.without(v).constant() / c);
    }
    for (const auto& r : sample_line(sorted_unique(roots)))
        if (g.eval(Point{{v, r}})) return true;
    return false;
}

/// exists u v. g, for g whose free variables are among {u, v}. The truth of
/// exists v. g(u, v) can only change where an atom free of v changes sign or
/// where the v-roots of two atoms cross.
inline bool exists_bivariate(const Formula& g, Var u, Var v) {
    auto as = atoms_of(g);
    std::vector<Rational> crit;
    for (std::size_t i = 0; i < as.size(); ++i) {
        Rational au = as[i].expr.coeff(u), av = as[i].expr.coeff(v), ad = as[i].expr.constant();
        if (av.is_zero()) {
            if (!au.is_zero()) crit.push_back(-ad / au);
            continue;
        }
        for (std::size_t j = i + 1; j < as.size(); ++j) {
            Rational bu = as[j].expr.coeff(u), bv = as[j].expr.coeff(v), bd = as[j].expr.constant();
            if (bv.is_zero()) continue;
            // -(au u + ad)/av = -(bu u + bd)/bv
            Rational k = au / av - bu / bv;
            if (!k.is_zero()) crit.push_back((bd / bv - ad / av) / k);
        }
    }
    for (const auto& cu : sample_line(sorted_unique(crit)))
        if (exists_univariate(g.partial_eval(Point{{u, cu}}), v)) return true;
    return false;
}

/// exists vars. f at a point assigning every other free variable (1 or 2 vars).
inline bool exists_oracle(const Formula& f, const std::vector<Var>& vars, const Point& params) {
    Formula g = f.partial_eval(params);
    if (vars.size() == 1) return exists_univariate(g, vars[0]);
    if (vars.size() == 2) return exists_bivariate(g, vars[0], vars[1]);
    throw InvalidArgument("oracle handles one or two eliminated variables");
}

// ----- seeded generators

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin(unsigned percent = 50) { return rng_() % 100 < percent; }
    Rational rational(long num = 4, long den = 4) { return Rational(integer(-num, num), integer(1, den)); }

    Atom atom(const std::vector<Var>& vars, long coeff = 3) {
        AffineExpr e(Rational(integer(-coeff, coeff)));
        for (Var v : vars)
            if (coin(60)) e.axpy(Rational(integer(-coeff, coeff)), AffineExpr(v));
        if (e.terms().empty()) e.axpy(Rational(1), AffineExpr(vars[static_cast<std::size_t>(integer(0, static_cast<long>(vars.size()) - 1))]));
        Rel r = static_cast<Rel>(integer(0, 2));
        return {e, r};
    }

    /// Random boolean combination with exactly `atoms` atom leaves.
    Formula formula(const std::vector<Var>& vars, std::size_t atoms) {
        if (atoms <= 1) {
            Formula a = Formula::atom(atom(vars));
            return coin(15) ? Formula::negate(a) : a;
        }
        std::size_t left = 1 + static_cast<std::size_t>(integer(0, static_cast<long>(atoms) - 2));
        Formula l = formula(vars, left), r = formula(vars, atoms - left);
        Formula f = coin() ? (l && r) : (l || r);
        return coin(10) ? Formula::negate(f) : f;
    }

    Vector vector(std::size_t n, long num = 4, long den = 4) {
        Vector v(n);
        for (auto& c : v) c = rational(num, den);
        return v;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Evaluation points for the free variables `vars` of f: random rationals,
/// plus points on each atom's boundary and just off it.
inline std::vector<Point> probe_points(const Formula& f, const std::vector<Var>& vars, std::size_t count, Gen& g) {
    std::vector<Point> out;
    auto random_point = [&] {
        Point p;
        for (Var v : vars) p[v] = g.rational(5, 4);
        return p;
    };
    std::vector<Atom> as;
    for (const auto& a : atoms_of(f)) {
        bool only_params = true;
        for (const auto& [v, c] : a.expr.terms())
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) only_params = false;
        if (only_params && !a.expr.terms().empty()) as.push_back(a);
    }
    while (out.size() < count) {
        Point p = random_point();
        if (!as.empty() && g.coin(40)) {
            // move one coordinate so that an atom sits on its boundary, maybe nudged
            const Atom& a = as[static_cast<std::size_t>(g.integer(0, static_cast<long>(as.size()) - 1))];
            const auto& [v, c] = a.expr.terms()[static_cast<std::size_t>(g.integer(0, static_cast<long>(a.expr.terms().size()) - 1))];
            Point q = p;
            q.erase(v);
            Rational rest = a.expr.without(v).eval(q);
            Rational val = -rest / c;
            long nudge = g.integer(-1, 1);
            p[v] = val + Rational(nudge, 1000);
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Grid {-2, -3/2, ..., 2}^n as vectors.
inline std::vector<Vector> grid(std::size_t n, const std::vector<Rational>& values) {
    std::vector<Vector> out{Vector{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Vector> next;
        for (const auto& v : out)
            for (const auto& x : values) {
                auto w = v;
                w.push_back(x);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<Rational> small_values() {
    return {Rational(-2), Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1), Rational(2)};
}

// ----- positive maps into Archimedean targets

struct MapTriple {
    std::string name;
    OVSpace v;
    LinearMap phi;
    OVSpace u;
};

inline LinearMap map_of(std::initializer_list<std::initializer_list<long>> rows, std::size_t cols) {
    std::vector<Vector> rs;
    for (auto r : rows) {
        Vector v;
        for (long x : r) v.push_back(Rational(x));
        rs.push_back(std::move(v));
    }
    return LinearMap(cols, rs.size(), Matrix::from_rows(rs, cols));
}

inline std::vector<MapTriple> map_triples() {
    using namespace corpus;
    return {
        {"lex 2 first", lex_cone(2), map_of({{1, 0}}, 2), closed_orthant(1)},
        {"lex 2 doubled", lex_cone(2), map_of({{2, 0}, {1, 0}}, 2), closed_orthant(2)},
        {"strict half 2", strict_halfspace_cone(2), map_of({{3, 0}}, 2), closed_orthant(1)},
        {"lex 3 first", lex_cone(3), map_of({{1, 0, 0}}, 3), closed_orthant(1)},
        {"pairs 2 firsts", lex_pair_product(2), map_of({{1, 0, 0, 0}, {0, 0, 1, 0}}, 4), closed_orthant(2)},
        {"pairs 2 sum", lex_pair_product(2), map_of({{1, 0, 1, 0}}, 4), closed_orthant(1)},
        {"quadrant sum", closed_orthant(2), map_of({{1, 1}}, 2), closed_orthant(1)},
        {"quadrant shear", closed_orthant(2), map_of({{1, 0}, {1, 1}}, 2), closed_orthant(2)},
        {"open 2 weights", open_orthant_cone(2), map_of({{1, 2}}, 2), closed_orthant(1)},
        {"open 3 blocks", open_orthant_cone(3), map_of({{1, 0, 0}, {0, 1, 1}}, 3), closed_orthant(2)},
        {"pairs 1 zero", lex_pair_product(1), LinearMap::zero(2, 2), closed_orthant(2)},
        {"pairs 3 firsts", lex_pair_product(3), map_of({{1, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 1, 0}}, 6), closed_orthant(2)},
    };
}

}  // namespace ovs::probe
