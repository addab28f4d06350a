#include <gtest/gtest.h>

#include "ovs/archkit/isomorphism.hpp"
#include "ovs/corpus/cones.hpp"
#include "support.hpp"

using namespace ovs;
using namespace ovs::corpus;
using arch::IsoResult;
using ovs::probe::map_of;

namespace {

Var X1 = Var::coord(1);
Vector vec(std::initializer_list<long> xs) {
    Vector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}
OVSpace half_line() { return closed_orthant(1); }

// permute coordinates of a cone: x_i -> x_{perm[i]}
OVSpace permuted(const OVSpace& v, const std::vector<std::size_t>& perm) {
    auto xs = coords(v.dim());
    std::vector<AffineExpr> moved;
    for (std::size_t i = 0; i < v.dim(); ++i) moved.push_back(xs[perm[i]]);
    return OVSpace(v.dim(), v.positive().at(moved));
}

}  // namespace

TEST(Archimedeanize, LexPlane) {
    auto r = arch::archimedeanize(lex_cone(2));
    EXPECT_EQ(r.stabilization_depth, 1u);
    EXPECT_EQ(r.final_space.dim(), 1u);
    EXPECT_TRUE(qe::equivalent(r.final_space.positive().formula(), Formula::ge(X1)));
    EXPECT_EQ(r.composite.matrix(), Matrix::from_rows({vec({1, 0})}, 2));
    EXPECT_TRUE(is_archimedean(r.final_space));
    EXPECT_EQ(infinitesimals(r.stabilized).subspace.dim(), 0u);
}

TEST(Archimedeanize, ClosedOrthantIsFixed) {
    for (std::size_t n = 1; n <= 3; ++n) {
        auto r = arch::archimedeanize(closed_orthant(n));
        EXPECT_EQ(r.stabilization_depth, 0u);
        EXPECT_TRUE(qe::equivalent(r.final_space.positive(), closed_orthant(n).positive()));
        EXPECT_EQ(r.composite, LinearMap::identity(n));
    }
}

TEST(Archimedeanize, StrictHalfspace) {
    auto r = arch::archimedeanize(strict_halfspace_cone(2));
    EXPECT_EQ(r.stabilization_depth, 1u);
    EXPECT_EQ(r.final_space.dim(), 1u);
    EXPECT_TRUE(qe::equivalent(r.final_space.positive().formula(), Formula::ge(X1)));
}

TEST(Archimedeanize, RejectsWedges) {
    EXPECT_THROW(arch::archimedeanize(full_wedge(2)), NotACone);
    EXPECT_THROW(arch::archimedeanize(halfspace_wedge(2, vec({1, 0}))), NotACone);
}

TEST(PositiveMap, Examples) {
    auto first = map_of({{1, 0}}, 2), second = map_of({{0, 1}}, 2);
    EXPECT_TRUE(arch::is_positive_map(first, lex_cone(2), half_line()));
    EXPECT_TRUE(arch::is_positive_map(LinearMap::zero(2, 1), lex_cone(2), half_line()));
    auto v = arch::is_positive_map(second, lex_cone(2), half_line());
    ASSERT_FALSE(v.holds);
    const auto& x = v.witness.at("x");
    EXPECT_TRUE(lex_cone(2).positive().contains(x));
    EXPECT_FALSE(half_line().positive().contains(second(x)));
    EXPECT_TRUE(lex_cone(2).positive().contains(vec({1, -1})));
    EXPECT_THROW(arch::is_positive_map(first, lex_cone(3), half_line()), DimensionMismatch);
}

TEST(Factor, Examples) {
    auto r = arch::archimedeanize(lex_cone(2));
    auto f = arch::factor_through(r, map_of({{1, 0}}, 2), half_line());
    EXPECT_EQ(f.induced, LinearMap::identity(1));
    EXPECT_TRUE(f.unique);

    auto z = arch::factor_through(r, LinearMap::zero(2, 1), half_line());
    EXPECT_EQ(z.induced, LinearMap::zero(1, 1));

    auto d = arch::factor_through(r, map_of({{1, 0}, {1, 0}}, 2), closed_orthant(2));
    EXPECT_EQ(d.induced, map_of({{1}, {1}}, 1));
    EXPECT_TRUE(arch::is_positive_map(d.induced, r.final_space, closed_orthant(2)));
}

TEST(Factor, Errors) {
    auto r = arch::archimedeanize(lex_cone(2));
    EXPECT_THROW(arch::factor_through(r, map_of({{0, 1}}, 2), half_line()), MapNotPositive);
    EXPECT_THROW(arch::factor_through(r, map_of({{1, 0}, {0, 1}}, 2), lex_cone(2)), TargetNotArchimedean);
    EXPECT_THROW(arch::factor_through(r, map_of({{1, 0, 0}}, 3), half_line()), DimensionMismatch);
}

TEST(Isomorphic, Examples) {
    OVSpace neg(1, Formula::ge(-AffineExpr(X1)));
    auto a = arch::order_isomorphic(half_line(), neg);
    ASSERT_EQ(a.status, IsoResult::Status::Isomorphic);
    ASSERT_TRUE(a.transform);
    EXPECT_EQ(*a.transform, Matrix::from_rows({vec({-1})}, 1));

    auto b = arch::order_isomorphic(half_line(), zero_cone(1));
    EXPECT_NE(b.status, IsoResult::Status::Isomorphic);

    EXPECT_EQ(arch::order_isomorphic(closed_orthant(2), lex_cone(2)).status, IsoResult::Status::NotIsomorphic);
    EXPECT_THROW(arch::order_isomorphic(closed_orthant(2), closed_orthant(3)), DimensionMismatch);
}

TEST(Isomorphic, TransformIsChecked) {
    auto hull = generated_wedge(2, {vec({1, 1}), vec({1, -1})});
    auto r = arch::order_isomorphic(closed_orthant(2), hull);
    ASSERT_EQ(r.status, IsoResult::Status::Isomorphic);
    LinearMap t(*r.transform);
    EXPECT_TRUE(arch::is_positive_map(t, closed_orthant(2), hull));
    LinearMap back(inverse(*r.transform));
    EXPECT_TRUE(arch::is_positive_map(back, hull, closed_orthant(2)));
}

TEST(Properties, TerminationAndFinalArchimedean) {
    for (const auto& e : standard_corpus()) {
        if (!is_cone(e.space.positive())) continue;
        auto r = arch::archimedeanize(e.space);
        EXPECT_LE(r.stabilization_depth, e.space.dim()) << e.name;
        EXPECT_TRUE(is_archimedean(r.final_space)) << e.name;
        // composite is the product of the step projections
        LinearMap prod = LinearMap::identity(e.space.dim());
        for (const auto& s : r.steps) prod = s.map.projection.after(prod);
        EXPECT_EQ(prod, r.composite) << e.name;
    }
}

TEST(Properties, Idempotent) {
    for (const auto& e : standard_corpus()) {
        if (e.space.dim() > 4 || !is_cone(e.space.positive())) continue;
        auto r = arch::archimedeanize(e.space);
        if (!is_cone(r.final_space.positive())) continue;
        auto again = arch::archimedeanize(r.final_space);
        EXPECT_EQ(again.stabilization_depth, 0u) << e.name;
        EXPECT_TRUE(qe::equivalent(again.final_space.positive(), r.final_space.positive())) << e.name;
    }
}

TEST(Properties, StepNesting) {
    for (const auto& e : standard_corpus()) {
        if (!is_cone(e.space.positive())) continue;
        auto r = arch::archimedeanize(e.space);
        for (std::size_t i = 1; i < r.steps.size(); ++i) {
            EXPECT_TRUE(r.steps[i - 1].pulled_back_ideal.contained_in(r.steps[i].pulled_back_ideal));
            EXPECT_LT(r.steps[i - 1].pulled_back_ideal.dim(), r.steps[i].pulled_back_ideal.dim());
        }
    }
}

TEST(Properties, BasisIndependence) {
    int checked = 0;
    for (const auto& e : standard_corpus()) {
        const std::size_t n = e.space.dim();
        if (n < 2 || n > 3 || !is_cone(e.space.positive())) continue;
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = n - 1 - i;
        auto a = arch::archimedeanize(e.space);
        auto b = arch::archimedeanize(permuted(e.space, perm));
        ASSERT_EQ(a.final_space.dim(), b.final_space.dim()) << e.name;
        if (a.final_space.dim() == 0) continue;
        EXPECT_EQ(arch::order_isomorphic(a.final_space, b.final_space).status, IsoResult::Status::Isomorphic) << e.name;
        ++checked;
    }
    EXPECT_GE(checked, 5);
}

TEST(Properties, UniversalProperty) {
    auto ts = probe::map_triples();
    ASSERT_GE(ts.size(), 10u);
    for (const auto& t : ts) {
        ASSERT_TRUE(arch::is_positive_map(t.phi, t.v, t.u)) << t.name;
        auto r = arch::archimedeanize(t.v);
        auto f = arch::factor_through(r, t.phi, t.u);
        EXPECT_EQ(f.induced.after(r.composite), t.phi);
        EXPECT_TRUE(arch::is_positive_map(f.induced, r.final_space, t.u));
        EXPECT_TRUE(f.unique);
        EXPECT_EQ(rank(r.composite.matrix()), r.composite.codomain());
    }
}
