#include <gtest/gtest.h>

#include "ovs/corpus/registry.hpp"
#include "support.hpp"

using namespace ovs;
using namespace ovs::corpus;

namespace {

Var X1 = Var::coord(1), X2 = Var::coord(2);
Vector vec(std::initializer_list<long> xs) {
    Vector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

}  // namespace

TEST(Constructors, Examples) {
    EXPECT_EQ(to_dnf_cells(lex_cone(2).positive().formula()).size(), 2u);
    EXPECT_TRUE(qe::equivalent(lex_cone(2).positive().formula(),
                               Formula::gt(X1) || (Formula::eq(X1) && Formula::ge(X2))));
    EXPECT_TRUE(qe::equivalent(closed_orthant(1).positive().formula(), Formula::ge(X1)));
    EXPECT_TRUE(lex_pair_product(2).positive().contains(vec({1, -9, 0, 3})));
    EXPECT_FALSE(lex_pair_product(2).positive().contains(vec({1, -9, 0, -3})));
    EXPECT_TRUE(open_orthant_cone(3).positive().contains(vec({0, 0, 0})));
    EXPECT_FALSE(open_orthant_cone(3).positive().contains(vec({1, 1, 0})));
    EXPECT_TRUE(halfspace_wedge(2, vec({1, -1})).positive().contains(vec({3, 2})));
    EXPECT_THROW(halfspace_wedge(2, vec({1})), DimensionMismatch);
}

TEST(Constructors, LexConeIsFirstNonzeroPositive) {
    OVSpace l = lex_cone(3);
    for (const auto& p : probe::grid(3, probe::small_values())) {
        int s = 0;
        for (const auto& c : p)
            if (!c.is_zero()) {
                s = c.sign();
                break;
            }
        ASSERT_EQ(l.positive().contains(p), s >= 0) << vector_str(p);
    }
}

TEST(Hull, Examples) {
    EXPECT_TRUE(qe::equivalent(generated_wedge(2, {vec({1, 0}), vec({0, 1})}).positive(), closed_orthant(2).positive()));

    auto h = generated_wedge(2, {vec({1, 1}), vec({1, -1})});
    Formula hand = Formula::ge(AffineExpr(X1) - AffineExpr(X2)) && Formula::ge(AffineExpr(X1) + AffineExpr(X2));
    EXPECT_TRUE(qe::equivalent(h.positive().formula(), hand));
    for (const auto& p : probe::grid(2, probe::small_values()))
        EXPECT_EQ(h.positive().contains(p), hand.eval(Point{{X1, p[0]}, {X2, p[1]}}));

    EXPECT_TRUE(qe::equivalent(generated_wedge(3, {}).positive(), zero_cone(3).positive()));
    EXPECT_THROW(generated_wedge(2, {vec({1})}), DimensionMismatch);
}

TEST(Hull, PointedGeneratorsGiveCones) {
    std::vector<std::vector<Vector>> gens{
        {vec({1, 0}), vec({1, 1})},
        {vec({1, 0, 0}), vec({1, 1, 0}), vec({1, 0, 1})},
        {vec({2, 1}), vec({1, 2}), vec({1, 1})},
    };
    for (const auto& g : gens) {
        auto w = generated_wedge(g[0].size(), g);
        EXPECT_TRUE(is_wedge(w.positive()));
        EXPECT_TRUE(is_cone(w.positive()));
        for (const auto& v : g) EXPECT_TRUE(w.positive().contains(v));
    }
}

TEST(PolynomialOracle, Examples) {
    auto o = poly_pos_cone_deg2();
    EXPECT_EQ(o.dim, 3u);
    EXPECT_TRUE(o.member(vec({0, 0, 1})));
    EXPECT_FALSE(o.member(vec({-1, 0, 0})));
    EXPECT_FALSE(o.member(vec({1, 0, 0})));
    EXPECT_TRUE(o.closure_member(vec({1, 0, 0})));
    EXPECT_TRUE(o.member(vec({0, 0, 0})));
    EXPECT_TRUE(o.member(vec({1, 1, 1})));
    EXPECT_FALSE(o.member(vec({1, 2, 1})));
    EXPECT_TRUE(o.closure_member(vec({1, 2, 1})));
    EXPECT_FALSE(o.member(vec({0, 1, 5})));
    EXPECT_THROW(o.member(vec({1, 1})), DimensionMismatch);
}

TEST(PolynomialOracle, MatchesPointwisePositivity) {
    // membership against sign checks at many sample t plus the vertex
    std::mt19937_64 rng(9);
    auto o = poly_pos_cone_deg2();
    for (int i = 0; i < 400; ++i) {
        Vector p = o.sample(rng);
        const auto &a = p[0], &b = p[1], &c = p[2];
        auto at = [&](const Rational& t) { return a * t * t + b * t + c; };
        std::vector<Rational> ts;
        for (long k = -40; k <= 40; ++k) ts.push_back(Rational(k, 4));
        if (!a.is_zero()) ts.push_back(-b / (Rational(2) * a));
        if (a.is_zero() && !b.is_zero()) ts.push_back(-c / b);
        bool all_pos = true, all_nonneg = true;
        for (const auto& t : ts) {
            all_pos = all_pos && at(t).sign() > 0;
            all_nonneg = all_nonneg && at(t).sign() >= 0;
        }
        if (is_zero_vector(p)) all_pos = true;
        EXPECT_EQ(o.member(p), all_pos) << vector_str(p);
        if (a.sign() != 0 || !b.is_zero()) {
            EXPECT_EQ(o.closure_member(p), all_nonneg) << vector_str(p);
        }
    }
}

TEST(Falsify, PolynomialArchimedeanWitness) {
    auto ev = falsify(poly_pos_cone_deg2(), Property::archimedean());
    ASSERT_TRUE(ev);
    EXPECT_EQ(ev->x, vec({0, 0, 1}));
    EXPECT_EQ(ev->y, vec({-1, 0, 0}));
    EXPECT_EQ(ev->n_min, 1);
    EXPECT_EQ(ev->n_max, 1000);
    auto o = poly_pos_cone_deg2();
    for (long n = 1; n <= 1000; ++n) ASSERT_TRUE(o.member(ev->x - Rational(n) * ev->y));
    EXPECT_FALSE(o.member(-ev->y));
    EXPECT_TRUE(o.closure_member(-ev->y));
}

TEST(Falsify, Examples) {
    EXPECT_FALSE(falsify(as_oracle(closed_orthant(2)), Property::archimedean()));
    auto ev = falsify(as_oracle(lex_cone(2)), Property::almost_archimedean());
    ASSERT_TRUE(ev);
    EXPECT_EQ(ev->x, vec({1, 0}));
    EXPECT_EQ(ev->y, vec({0, 1}));
    EXPECT_EQ(ev->n_min, -1000);
}

TEST(Falsify, ElementForms) {
    auto ev = falsify(as_oracle(lex_cone(2)), Property::archimedean_element(vec({1, 0})));
    ASSERT_TRUE(ev);
    for (long n = 1; n <= 1000; ++n) ASSERT_TRUE(lex_cone(2).positive().contains(vec({1, 0}) + Rational(n) * ev->y));
    EXPECT_FALSE(lex_cone(2).positive().contains(ev->y));
    EXPECT_FALSE(falsify(as_oracle(closed_orthant(2)), Property::archimedean_element(vec({1, 1}))));
    EXPECT_THROW(falsify(as_oracle(closed_orthant(2)), Property::archimedean_element(vec({-1, 1}))), NotPositiveElement);
}

TEST(Falsify, BudgetAndDeterminism) {
    FalsifyOptions zero;
    zero.budget = 0;
    EXPECT_THROW(falsify(as_oracle(lex_cone(2)), Property::archimedean(), zero), InvalidArgument);
    FalsifyOptions one;
    one.budget = 1;
    EXPECT_FALSE(falsify(as_oracle(lex_cone(2)), Property::archimedean(), one));
    FalsifyOptions seeded;
    seeded.seed = 42;
    auto a = falsify(poly_pos_cone_deg2(), Property::archimedean(), seeded);
    auto b = falsify(poly_pos_cone_deg2(), Property::archimedean(), seeded);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->x, b->x);
    EXPECT_EQ(a->y, b->y);
    EXPECT_EQ(a->pairs_tried, b->pairs_tried);
}

TEST(Properties, OracleAgreesWithExact) {
    for (const auto& e : standard_corpus()) {
        if (e.space.dim() > 4) continue;
        auto o = as_oracle(e.space);
        struct Case {
            Property prop;
            bool exact;
        };
        std::vector<Case> cases{{Property::archimedean(), is_archimedean(e.space).holds},
                                {Property::almost_archimedean(), is_almost_archimedean(e.space).holds}};
        for (std::uint64_t seed : {0ull, 1ull, 7ull}) {
            FalsifyOptions fo;
            fo.seed = seed;
            fo.n_max = 200;
            for (const auto& c : cases) {
                auto ev = falsify(o, c.prop, fo);
                if (c.exact) {
                    EXPECT_FALSE(ev) << e.name << " " << property_name(c.prop);
                } else if (ev) {
                    // evidence is consistent with the exact semantics: the hypothesis holds on the checked range
                    // and the conclusion fails
                    const auto& p = e.space.positive();
                    if (c.prop.kind == Property::Kind::Archimedean) {
                        EXPECT_FALSE(p.contains(-ev->y));
                        for (long n = 1; n <= 1000; ++n) ASSERT_TRUE(p.contains(ev->x - Rational(n) * ev->y));
                    } else {
                        EXPECT_FALSE(is_zero_vector(ev->y));
                        for (long n = -1000; n <= 1000; ++n) ASSERT_TRUE(p.contains(ev->x - Rational(n) * ev->y));
                    }
                }
            }
        }
    }
}

TEST(Properties, LexPairProducts) {
    for (std::size_t m = 1; m <= 3; ++m) {
        OVSpace v = lex_pair_product(m);
        auto inf = infinitesimals(v);
        std::vector<Formula> firsts;
        for (std::size_t k = 0; k < m; ++k) firsts.push_back(Formula::eq(Var::coord(2 * k + 1)));
        EXPECT_TRUE(qe::equivalent(inf.set.formula(), Formula::conj(firsts))) << m;
        EXPECT_EQ(inf.subspace.dim(), m);
        auto [q, qp] = quotient(v, inf.subspace);
        EXPECT_TRUE(qe::equivalent(q.positive(), closed_orthant(m).positive())) << m;
        auto r = arch::archimedeanize(v);
        EXPECT_EQ(r.stabilization_depth, 1u) << m;
        EXPECT_TRUE(qe::equivalent(r.final_space.positive(), closed_orthant(m).positive())) << m;
    }
}

TEST(Registry, NamesAndDimensions) {
    EXPECT_EQ(corpus_dim("lex_pair_product", {Rational(3)}), 6u);
    EXPECT_EQ(corpus_dim("poly_pos_deg2", {}), 3u);
    EXPECT_EQ(corpus_dim("halfspace_wedge", {Rational(2), Rational(1), Rational(0)}), 2u);
    EXPECT_THROW(corpus_dim("nope", {}), InvalidArgument);
    EXPECT_THROW(corpus_dim("lex_cone", {Rational(1, 2)}), InvalidArgument);
    EXPECT_THROW(corpus_dim("lex_cone", {}), InvalidArgument);
    for (const auto& name : corpus_names()) {
        std::vector<Rational> args;
        if (name == "halfspace_wedge") args = {Rational(2), Rational(1), Rational(1)};
        else if (name != "poly_pos_deg2") args = {Rational(2)};
        auto item = corpus_build(name, args);
        std::size_t dim = std::holds_alternative<OVSpace>(item) ? std::get<OVSpace>(item).dim()
                                                                : std::get<OracleCone>(item).dim;
        EXPECT_EQ(dim, corpus_dim(name, args)) << name;
    }
}
