#pragma once

#include <vector>

#include "ovs/ovskit/structure.hpp"

namespace ovs::arch {

/// One quotient stage of the infinitesimal chain.
struct ArchStep {
    std::size_t index = 0;
    Subspace ideal;             // in the coordinates of this stage
    Subspace pulled_back_ideal;  // kernel of the composite projection, original coordinates
    QuotientPresentation map;
};

struct ArchResult {
    OVSpace source;
    std::vector<ArchStep> steps;
    LinearMap composite;          // p_V: Q^n -> Q^m
    LinearMap composite_section;  // right inverse of p_V spanned by the complement bases
    OVSpace stabilized;           // last quotient with the projected positive cone
    OVSpace final_space;          // same quotient ordered by its D-wedge
    std::size_t stabilization_depth = 0;
};

/// Quotients by the infinitesimals until none remain, then orders the
/// stabilized quotient by its D-wedge. Each nonzero ideal lowers the
/// dimension, so there are at most dim V stages.
inline ArchResult archimedeanize(const OVSpace& v, const Limits& limits = {}) {
    if (auto c = is_cone(v.positive(), limits); !c)
        throw NotACone("positive set " + v.positive().str() + " is not a cone (" + c.note + ")");

    ArchResult res;
    res.source = v;
    res.composite = LinearMap::identity(v.dim());
    res.composite_section = LinearMap::identity(v.dim());
    OVSpace current = v;
    for (std::size_t stage = 0; stage <= v.dim(); ++stage) {
        auto inf = infinitesimals(current, limits);
        if (inf.subspace.dim() == 0) break;
        if (stage == v.dim()) throw InternalInvariantViolation("infinitesimal chain did not stabilize");
        auto [next, qp] = quotient(current, inf.subspace, limits);
        ArchStep step;
        step.index = stage + 1;
        step.ideal = inf.subspace;
        res.composite = qp.projection.after(res.composite);
        res.composite_section = res.composite_section.after(qp.section);
        step.pulled_back_ideal = res.composite.kernel();
        if (!res.steps.empty() && !(res.steps.back().pulled_back_ideal.contained_in(step.pulled_back_ideal) &&
                                    res.steps.back().pulled_back_ideal.dim() < step.pulled_back_ideal.dim()))
            throw InternalInvariantViolation("infinitesimal chain is not strictly increasing");
        step.map = std::move(qp);
        res.steps.push_back(std::move(step));
        current = std::move(next);
    }
    res.stabilization_depth = res.steps.size();
    res.stabilized = current;
    res.final_space = OVSpace(d_wedge(current, limits));
    if (!is_archimedean(res.final_space, limits))
        throw InternalInvariantViolation("final D-wedge " + res.final_space.positive().str() + " is not Archimedean");
    if (!(res.composite.after(res.composite_section) == LinearMap::identity(res.composite.codomain())))
        throw InternalInvariantViolation("composite section is not a right inverse");
    return res;
}

/// phi(V+) in U+.
inline Verdict is_positive_map(const LinearMap& phi, const OVSpace& v, const OVSpace& u, const Limits& limits = {}) {
    if (phi.domain() != v.dim() || phi.codomain() != u.dim())
        throw DimensionMismatch("map Q^" + std::to_string(phi.domain()) + " -> Q^" + std::to_string(phi.codomain()) +
                                " between spaces of dimension " + std::to_string(v.dim()) + " and " +
                                std::to_string(u.dim()));
    auto x = var_block("_x", v.dim());
    if (auto m = qe::find_model(v.positive().at(exprs(x)) && !u.positive().at(phi.apply(exprs(x))), limits))
        return Verdict::no({{"x", read_vector(*m, x)}}, "positive x with phi(x) not positive");
    return Verdict::yes();
}

struct Factorization {
    LinearMap induced;  // phi~ on the final quotient
    bool unique = false;  // p_V surjective
};

/// The unique positive map phi~ with phi~ . p_V = phi.
inline Factorization factor_through(const ArchResult& res, const LinearMap& phi, const OVSpace& u,
                                    const Limits& limits = {}) {
    if (phi.domain() != res.source.dim() || phi.codomain() != u.dim())
        throw DimensionMismatch("map shape does not match the spaces");
    if (!is_archimedean(u, limits)) throw TargetNotArchimedean("target " + u.positive().str() + " is not Archimedean");
    if (auto pos = is_positive_map(phi, res.source, u, limits); !pos)
        throw MapNotPositive("phi maps " + vector_str(pos.witness.at("x")) + " outside U+");
    const Subspace ker = res.composite.kernel();
    for (const auto& k : ker.basis())
        if (!is_zero_vector(phi(k)))
            throw KernelConditionFailed("phi does not vanish on " + vector_str(k) + " in ker p_V");
    LinearMap induced = phi.after(res.composite_section);
    if (!(induced.after(res.composite) == phi))
        throw KernelConditionFailed("phi~ . p_V differs from phi");
    if (auto pos = is_positive_map(induced, res.final_space, u, limits); !pos)
        throw InternalInvariantViolation("phi~ is not positive for the D-wedge at " +
                                         vector_str(pos.witness.at("x")));
    return {std::move(induced), res.composite.surjective()};
}

}  // namespace ovs::arch
