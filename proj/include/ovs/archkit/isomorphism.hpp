#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ovs/ovskit/predicates.hpp"

namespace ovs::arch {

/// Result of the bounded isomorphism search. `NotIsomorphic` is only reported
/// when an order invariant differs; an exhausted search is `Unknown`.
struct IsoResult {
    enum class Status { Isomorphic, NotIsomorphic, Unknown } status = Status::Unknown;
    std::optional<Matrix> transform;  // T with T(A+) = B+
    std::string note;
};

namespace detail {

inline Vector primitive(Vector v) {
    mpz_class l = 1, g = 0;
    for (const auto& x : v) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.raw().get_den_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.raw().get_num_mpz_t());
    }
    if (g == 0) return v;
    Rational k(mpq_class(l, g));
    return k * std::move(v);
}

// Candidate directions: +/- unit vectors, one sample per DNF cell, and one per
// cell with an inequality tightened to equality (finds boundary rays).
inline std::vector<Vector> candidates(const SemilinearSet& s, const Limits& limits) {
    const std::size_t n = s.dim();
    std::vector<Vector> out;
    auto push = [&](Vector v) {
        if (is_zero_vector(v)) return;
        v = primitive(std::move(v));
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    };
    for (std::size_t i = 0; i < n; ++i) {
        Vector e(n);
        e[i] = Rational(1);
        push(e);
        push(-e);
    }
    auto xs = var_block("x", n);
    auto cells = to_dnf_cells(s.formula(), limits);
    for (const auto& c : cells) {
        std::vector<Cell> variants{c};
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k].rel == Rel::EQ) continue;
            Cell t = c;
            t[k].rel = Rel::EQ;
            variants.push_back(t);
        }
        for (const auto& v : variants) {
            auto m = qe::find_model(cell_formula(v), limits);
            if (m) push(read_vector(*m, xs));
        }
    }
    return out;
}

}  // namespace detail

/// Searches for T invertible with T(A+) = B+ among matrices mapping
/// candidate directions of A onto candidate directions of B.
inline IsoResult order_isomorphic(const OVSpace& a, const OVSpace& b, std::size_t dim_max = 3,
                                  const Limits& limits = {}) {
    if (a.dim() != b.dim()) throw DimensionMismatch("spaces of different dimension");
    if (a.dim() > dim_max) throw InvalidArgument("isomorphism search limited to dimension " + std::to_string(dim_max));
    const std::size_t n = a.dim();

    auto invariant = [&](auto pred, const char* name) -> std::optional<IsoResult> {
        bool pa = pred(a.positive()).holds, pb = pred(b.positive()).holds;
        if (pa != pb) return IsoResult{IsoResult::Status::NotIsomorphic, std::nullopt,
                                       std::string(name) + " differs: no isomorphism"};
        return std::nullopt;
    };
    if (auto r = invariant([&](const SemilinearSet& s) { return is_generating(s, limits); }, "generating")) return *r;
    if (auto r = invariant([&](const SemilinearSet& s) { return is_wedge(s, limits); }, "wedge")) return *r;
    if (is_wedge(a.positive(), limits)) {
        if (auto r = invariant([&](const SemilinearSet& s) { return is_cone(s, limits); }, "cone")) return *r;
        if (auto r = invariant([&](const SemilinearSet& s) { return is_archimedean(OVSpace(s), limits); },
                               "Archimedean"))
            return *r;
    }

    if (n == 0) return {IsoResult::Status::Isomorphic, Matrix(0, 0), "zero-dimensional"};

    auto ca = detail::candidates(a.positive(), limits);
    auto cb = detail::candidates(b.positive(), limits);
    // Source frame: first independent n-tuple of A's candidates.
    auto frame = Subspace::span(n, ca).basis();
    if (frame.size() < n) return {IsoResult::Status::Unknown, std::nullopt, "no source frame"};
    Matrix src = Matrix::from_rows(frame, n).transpose();  // columns = frame
    Matrix src_inv = inverse(src);

    std::size_t decisions = 0;
    const std::size_t max_decisions = 2000;
    std::vector<std::size_t> pick(n, 0);
    std::function<std::optional<IsoResult>(std::size_t)> search = [&](std::size_t k) -> std::optional<IsoResult> {
        if (k == n) {
            std::vector<Vector> cols;
            for (auto i : pick) cols.push_back(cb[i]);
            Matrix dst = Matrix::from_rows(cols, n).transpose();
            if (rank(dst) < n) return std::nullopt;
            Matrix t = dst * src_inv;
            // Cheap filter on the candidates before a full decision.
            for (const auto& c : ca)
                if (a.positive().contains(c) != b.positive().contains(t.apply(c))) return std::nullopt;
            if (++decisions > max_decisions) return IsoResult{IsoResult::Status::Unknown, std::nullopt, "search budget exhausted"};
            LinearMap tm(t);
            // T(A+) = B+  <=>  A+ = T^{-1}(B+)
            if (qe::equivalent(a.positive().formula(), b.positive().at(tm.apply(coords(n))), limits))
                return IsoResult{IsoResult::Status::Isomorphic, t, {}};
            return std::nullopt;
        }
        for (std::size_t i = 0; i < cb.size(); ++i) {
            if (std::find(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), i) !=
                pick.begin() + static_cast<std::ptrdiff_t>(k))
                continue;
            pick[k] = i;
            if (auto r = search(k + 1)) return r;
        }
        return std::nullopt;
    };
    if (auto r = search(0)) return *r;
    return {IsoResult::Status::Unknown, std::nullopt, "no isomorphism found"};
}

}  // namespace ovs::arch
