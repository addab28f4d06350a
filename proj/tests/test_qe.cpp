#include <gtest/gtest.h>

#include "ovs/corpus/cones.hpp"
#include "ovs/corpus/oracle.hpp"
#include "support.hpp"

using namespace ovs;
using ovs::probe::Gen;
using qe::PrenexFormula;

namespace {

Var X1 = Var::coord(1), X2 = Var::coord(2);
Formula k2_formula() { return Formula::gt(X1) || (Formula::eq(X1) && Formula::ge(X2)); }
OVSpace k2() { return OVSpace(2, k2_formula()); }

std::vector<Rational> five() { return {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)}; }

Point point_of(const std::vector<Var>& vs, const Vector& v) {
    Point p;
    for (std::size_t i = 0; i < vs.size(); ++i) p[vs[i]] = v[i];
    return p;
}

// forall x y: x in K and x - t y in K for t >= 1 implies -y in K
PrenexFormula archimedean_sentence(const OVSpace& v) {
    auto x = var_block("_x", v.dim()), y = var_block("_y", v.dim());
    const auto& p = v.positive();
    Formula bad = p.at(exprs(x)) && encode::ray_from_one(p, exprs(x), -exprs(y)) && !p.at(-exprs(y));
    std::vector<Var> all = x;
    all.insert(all.end(), y.begin(), y.end());
    return PrenexFormula::forall(all, !bad);
}

}  // namespace

TEST(Eliminate, Examples) {
    Var x = Var::named("x"), y = Var::named("y");
    EXPECT_TRUE(qe::eliminate_exists(Formula::gt(x) && Formula::gt(Rational(1) - AffineExpr(x)), {x}).is_true());
    Formula sandwich = Formula::ge(AffineExpr(y) - AffineExpr(x)) && Formula::ge(AffineExpr(x) - AffineExpr(y));
    EXPECT_TRUE(qe::eliminate_exists(sandwich, {y}).is_true());
    EXPECT_TRUE(qe::eliminate_exists(Formula::gt(x) && Formula::gt(-AffineExpr(x)), {x}).is_false());
}

TEST(Eliminate, K2SecondCoordinateOnGrid) {
    Formula e = qe::eliminate_exists(k2_formula(), {X2});
    EXPECT_EQ(e.free_vars(), std::set<Var>{X1});
    for (const auto& a : five()) {
        bool expect = probe::exists_univariate(k2_formula().partial_eval({{X1, a}}), X2);
        EXPECT_EQ(e.eval({{X1, a}}), expect);
        EXPECT_EQ(e.eval({{X1, a}}), a.sign() >= 0);
    }
}

TEST(Eliminate, ForallIsDualOfExists) {
    Var x = Var::named("x"), y = Var::named("y");
    Formula f = Formula::ge(AffineExpr(y) - AffineExpr(x)) || Formula::gt(AffineExpr(x));
    Formula fa = qe::eliminate_forall(f, {x});
    Formula ex = !qe::eliminate_exists(!f, {x});
    for (const auto& v : probe::small_values()) EXPECT_EQ(fa.eval(Point{{y, v}}), ex.eval(Point{{y, v}}));
}

TEST(Eliminate, SoundnessAgainstSamplePointOracle) {
    Gen g(21);
    for (int inst = 0; inst < 120; ++inst) {
        std::size_t nv = 2 + static_cast<std::size_t>(g.integer(0, 2));
        std::vector<Var> vs;
        for (std::size_t i = 0; i < nv; ++i) vs.push_back(Var::named("v" + std::to_string(i)));
        std::size_t k = (nv >= 3 && g.coin(30)) ? 2 : 1;
        std::vector<Var> elim(vs.begin(), vs.begin() + static_cast<long>(k));
        std::vector<Var> params(vs.begin() + static_cast<long>(k), vs.end());
        Formula f = g.formula(vs, 1 + static_cast<std::size_t>(g.integer(0, k == 2 ? 4 : 7)));
        Formula e = qe::eliminate_exists(f, elim);
        for (Var v : elim) ASSERT_FALSE(e.free_vars().count(v));
        for (const auto& p : probe::probe_points(f, params, 200, g))
            ASSERT_EQ(e.eval(p), probe::exists_oracle(f, elim, p)) << f.str();
    }
}

TEST(Decide, Examples) {
    Var x = Var::named("x"), y = Var::named("y");
    PrenexFormula s{{{qe::Quantifier::Forall, {x}}, {qe::Quantifier::Exists, {y}}},
                    Formula::gt(AffineExpr(y) - AffineExpr(x))};
    EXPECT_TRUE(qe::decide(s));
    EXPECT_FALSE(qe::decide(PrenexFormula::exists({x}, Formula::gt(x) && Formula::gt(-AffineExpr(x)))));
    PrenexFormula s2{{{qe::Quantifier::Exists, {y}}, {qe::Quantifier::Forall, {x}}},
                     Formula::gt(AffineExpr(y) - AffineExpr(x))};
    EXPECT_FALSE(qe::decide(s2));
}

TEST(Decide, QuadrantArchimedeanSentence) {
    OVSpace q = corpus::closed_orthant(2);
    EXPECT_TRUE(qe::decide(archimedean_sentence(q)));
    EXPECT_FALSE(qe::decide(archimedean_sentence(k2())));
    corpus::FalsifyOptions fo;
    fo.budget = 10000;
    fo.n_max = 50;
    fo.random_candidates = 200;
    EXPECT_FALSE(corpus::falsify(corpus::as_oracle(q), corpus::Property::archimedean(), fo).has_value());
}

TEST(Decide, OpenSentenceRejected) {
    Var x = Var::named("x"), y = Var::named("y");
    EXPECT_THROW(qe::decide(PrenexFormula::exists({x}, Formula::gt(AffineExpr(x) - AffineExpr(y)))), InvalidArgument);
}

TEST(Witness, MidpointOfTightestBounds) {
    Var x = Var::named("x");
    auto w = qe::find_witness(PrenexFormula::exists({x}, Formula::gt(x) && Formula::gt(Rational(1) - AffineExpr(x))));
    ASSERT_TRUE(w);
    EXPECT_EQ(w->assignment.at(x), Rational(1, 2));
    auto one_sided = qe::find_witness(PrenexFormula::exists({x}, Formula::gt(AffineExpr(x) - Rational(3))));
    ASSERT_TRUE(one_sided);
    EXPECT_EQ(one_sided->assignment.at(x), Rational(4));
    EXPECT_FALSE(qe::find_witness(PrenexFormula::exists({x}, Formula::gt(x) && Formula::gt(-AffineExpr(x)))));
}

TEST(Witness, NegatedArchimedeanK2) {
    auto s = archimedean_sentence(k2());
    auto neg = PrenexFormula::exists(s.blocks[0].vars, !s.matrix);
    auto w = qe::find_witness(neg);
    ASSERT_TRUE(w);
    Vector x = read_vector(w->assignment, var_block("_x", 2)), y = read_vector(w->assignment, var_block("_y", 2));
    SemilinearSet p = k2().positive();
    for (long n = 1; n <= 1000; ++n) ASSERT_TRUE(p.contains(x - Rational(n) * y));
    EXPECT_FALSE(p.contains(-y));
    // the hand witness is valid as well
    Point hand = point_of(var_block("_x", 2), {Rational(1), Rational(0)});
    hand.merge(point_of(var_block("_y", 2), {Rational(0), Rational(1)}));
    EXPECT_TRUE(neg.matrix.eval(hand));
}

TEST(Witness, NegatedAlmostArchimedeanK2) {
    auto v = is_almost_archimedean(k2());
    ASSERT_FALSE(v.holds);
    Vector x = v.witness.at("x"), y = v.witness.at("y");
    EXPECT_FALSE(is_zero_vector(y));
    for (long n = -1000; n <= 1000; ++n) ASSERT_TRUE(k2().positive().contains(x + Rational(n) * y));
}

TEST(Witness, AlwaysSatisfiesMatrix) {
    Gen g(8);
    int found = 0;
    for (int inst = 0; inst < 200; ++inst) {
        std::vector<Var> vs{Var::named("a"), Var::named("b"), Var::named("c")};
        Formula f = g.formula(vs, 1 + static_cast<std::size_t>(g.integer(0, 7)));
        auto w = qe::find_witness(PrenexFormula::exists(vs, f));
        bool sat = qe::decide(PrenexFormula::exists(vs, f));
        ASSERT_EQ(w.has_value(), sat);
        if (w) {
            ++found;
            ASSERT_TRUE(f.eval(w->assignment)) << f.str();
        }
    }
    EXPECT_GT(found, 20);
}

TEST(Equivalent, Examples) {
    Var x = Var::named("x");
    EXPECT_TRUE(qe::equivalent(Formula::ge(x), !Formula::gt(-AffineExpr(x))));
    EXPECT_FALSE(qe::equivalent(Formula::gt(x), Formula::ge(x)));
    auto d = qe::distinguishing_point(Formula::gt(x), Formula::ge(x));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->at(x), Rational(0));
    EXPECT_TRUE(qe::equivalent(infinitesimal_set(k2()).formula(), Formula::eq(X1)));
}

TEST(Project, Examples) {
    LinearMap first(Matrix::from_rows({{Rational(1), Rational(0)}}, 2));
    auto p = qe::project(k2().positive(), first);
    EXPECT_EQ(p.dim(), 1u);
    EXPECT_TRUE(qe::equivalent(p.formula(), Formula::ge(X1)));

    auto id = qe::project(k2().positive(), LinearMap::identity(2));
    EXPECT_TRUE(qe::equivalent(id, k2().positive()));

    LinearMap sum(Matrix::from_rows({{Rational(1), Rational(1)}}, 2));
    auto s = qe::project(corpus::closed_orthant(2).positive(), sum);
    for (const auto& v : probe::small_values()) {
        // grid oracle: some quadrant point (a, v - a) with a in a sample range
        bool hit = false;
        for (const auto& a : probe::small_values())
            hit = hit || (a.sign() >= 0 && (v - a).sign() >= 0);
        EXPECT_EQ(s.contains(Vector{v}), hit);
    }
}

TEST(Project, PreimageAndSubset) {
    LinearMap first(Matrix::from_rows({{Rational(1), Rational(0)}}, 2));
    SemilinearSet half(1, Formula::ge(X1));
    auto pre = qe::preimage(half, first);
    EXPECT_TRUE(qe::subset(k2().positive(), pre));
    EXPECT_FALSE(qe::subset(pre, k2().positive()));
    EXPECT_TRUE(qe::is_empty(SemilinearSet(1, Formula::gt(X1) && Formula::gt(-AffineExpr(X1)))));
    auto smp = qe::sample(k2().positive());
    ASSERT_TRUE(smp);
    EXPECT_TRUE(k2().positive().contains(*smp));
}

TEST(Project, Functoriality) {
    Gen g(31);
    auto corpus = corpus::standard_corpus();
    int checked = 0;
    for (const auto& e : corpus) {
        const std::size_t n = e.space.dim();
        if (n > 3 || n == 0) continue;
        for (int rep = 0; rep < 2; ++rep) {
            std::size_t m = 1 + static_cast<std::size_t>(g.integer(0, 1));
            Matrix a(m, n), b(1, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) a(i, j) = Rational(g.integer(-2, 2));
            for (std::size_t j = 0; j < m; ++j) b(0, j) = Rational(g.integer(-2, 2));
            LinearMap A(n, m, a), B(m, 1, b);
            auto two = qe::project(qe::project(e.space.positive(), A), B);
            auto one = qe::project(e.space.positive(), B.after(A));
            ASSERT_TRUE(qe::equivalent(two, one)) << e.name;
            ++checked;
        }
    }
    EXPECT_GE(checked, 10);
}

TEST(Duality, CorpusSentences) {
    for (const auto& e : corpus::standard_corpus()) {
        if (e.space.dim() > 3) continue;
        const auto& p = e.space.positive();
        auto x = var_block("_x", p.dim());
        std::vector<Formula> matrices{
            p.at(exprs(x)) && p.at(-exprs(x)),
            !p.at(exprs(x)) || p.at(exprs(x) + exprs(x)),
            archimedean_sentence(e.space).matrix,
        };
        for (const auto& m : matrices) {
            std::vector<Var> bound = x;
            for (Var v : m.free_vars())
                if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
            bool all = qe::decide(PrenexFormula::forall(bound, m));
            bool ex_not = qe::decide(PrenexFormula::exists(bound, !m));
            ASSERT_EQ(all, !ex_not) << e.name;
        }
    }
}
