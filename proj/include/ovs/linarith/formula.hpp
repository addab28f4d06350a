#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ovs/linarith/affine.hpp"

namespace ovs {

/// Immutable quantifier-free formula over affine atoms. Shares structure;
/// every constructor folds constants and flattens nested connectives.
class Formula {
public:
    enum class Kind { True, False, Atom, And, Or, Not };

    Formula() : Formula(make_const(true)) {}

    static Formula top() { return make_const(true); }
    static Formula bottom() { return make_const(false); }
    static Formula constant(bool b) { return make_const(b); }

    static Formula atom(const Atom& a) {
        auto c = canonicalize(a);
        if (auto* b = std::get_if<bool>(&c)) return constant(*b);
        auto n = std::make_shared<Node>();
        n->kind = Kind::Atom;
        n->atom = std::get<Atom>(std::move(c));
        return Formula(std::move(n));
    }
    static Formula atom(AffineExpr e, Rel r) { return atom(Atom{std::move(e), r}); }
    static Formula gt(AffineExpr e) { return atom(std::move(e), Rel::GT); }
    static Formula ge(AffineExpr e) { return atom(std::move(e), Rel::GE); }
    static Formula eq(AffineExpr e) { return atom(std::move(e), Rel::EQ); }
    /// e != 0, encoded as (e > 0) or (-e > 0).
    static Formula ne(const AffineExpr& e) { return disj({gt(e), gt(-e)}); }

    static Formula conj(const std::vector<Formula>& kids) { return nary(Kind::And, kids); }
    static Formula disj(const std::vector<Formula>& kids) { return nary(Kind::Or, kids); }

    static Formula negate(const Formula& f) {
        switch (f.kind()) {
            case Kind::True: return bottom();
            case Kind::False: return top();
            case Kind::Not: return f.node_->kids.front();
            default: break;
        }
        auto n = std::make_shared<Node>();
        n->kind = Kind::Not;
        n->kids.push_back(f);
        return Formula(std::move(n));
    }

    friend Formula operator&&(const Formula& a, const Formula& b) { return conj({a, b}); }
    friend Formula operator||(const Formula& a, const Formula& b) { return disj({a, b}); }
    friend Formula operator!(const Formula& a) { return negate(a); }
    static Formula implies(const Formula& a, const Formula& b) { return disj({negate(a), b}); }
    static Formula iff(const Formula& a, const Formula& b) {
        return conj({implies(a, b), implies(b, a)});
    }

    Kind kind() const { return node_->kind; }
    bool is_true() const { return kind() == Kind::True; }
    bool is_false() const { return kind() == Kind::False; }
    const Atom& atom_value() const { return node_->atom; }
    const std::vector<Formula>& children() const { return node_->kids; }

    std::set<Var> free_vars() const {
        std::set<Var> out;
        collect(out);
        return out;
    }

    bool eval(const Point& p) const {
        switch (kind()) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::Atom: return node_->atom.eval(p);
            case Kind::Not: return !node_->kids.front().eval(p);
            case Kind::And: {
                // Evaluate every child so unassigned variables are always reported.
                bool r = true;
                for (const auto& k : node_->kids) r = k.eval(p) && r;
                return r;
            }
            case Kind::Or: {
                bool r = false;
                for (const auto& k : node_->kids) r = k.eval(p) || r;
                return r;
            }
        }
        return false;
    }

    /// Rewrites every atom through `fn(Atom) -> Formula`, keeping the boolean skeleton.
    template <typename Fn>
    Formula map_atoms(Fn&& fn) const {
        switch (kind()) {
            case Kind::True:
            case Kind::False: return *this;
            case Kind::Atom: return fn(node_->atom);
            case Kind::Not: return negate(node_->kids.front().map_atoms(fn));
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> ks;
                ks.reserve(node_->kids.size());
                for (const auto& k : node_->kids) ks.push_back(k.map_atoms(fn));
                return nary(kind(), ks);
            }
        }
        return *this;
    }

    Formula substitute(Var v, const AffineExpr& e) const {
        return map_atoms([&](const Atom& a) { return atom(a.expr.substitute(v, e), a.rel); });
    }
    Formula substitute(const std::map<Var, AffineExpr>& sub) const {
        return map_atoms([&](const Atom& a) { return atom(a.expr.substitute(sub), a.rel); });
    }
    Formula partial_eval(const Point& p) const {
        return map_atoms([&](const Atom& a) { return atom(a.expr.partial_eval(p), a.rel); });
    }

    /// Negation normal form: `Not` is pushed into the atoms as relation flips.
    Formula nnf() const { return nnf_impl(false); }

    /// Deterministic textual form in the script syntax. Atoms print in canonical
    /// scaling; operand order is the construction order.
    std::string str() const {
        std::ostringstream os;
        print(os, 0);
        return os.str();
    }

    /// Number of atom occurrences.
    std::size_t size() const {
        if (kind() == Kind::Atom) return 1;
        std::size_t s = 0;
        for (const auto& k : node_->kids) s += k.size();
        return s;
    }

private:
    struct Node {
        Kind kind = Kind::True;
        Atom atom;
        std::vector<Formula> kids;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula make_const(bool b) {
        static const Formula t = [] {
            auto n = std::make_shared<Node>();
            n->kind = Kind::True;
            return Formula(std::move(n));
        }();
        static const Formula f = [] {
            auto n = std::make_shared<Node>();
            n->kind = Kind::False;
            return Formula(std::move(n));
        }();
        return b ? t : f;
    }

    static Formula nary(Kind k, const std::vector<Formula>& kids) {
        const Kind absorbing = (k == Kind::And) ? Kind::False : Kind::True;
        const Kind neutral = (k == Kind::And) ? Kind::True : Kind::False;
        std::vector<Formula> flat;
        for (const auto& c : kids) {
            if (c.kind() == absorbing) return c;
            if (c.kind() == neutral) continue;
            if (c.kind() == k) {
                for (const auto& g : c.node_->kids) flat.push_back(g);
            } else {
                flat.push_back(c);
            }
        }
        // Drop repeated atoms; cheap and keeps DNF expansion small.
        std::vector<Formula> uniq;
        for (auto& c : flat) {
            bool dup = false;
            if (c.kind() == Kind::Atom) {
                for (const auto& u : uniq)
                    if (u.kind() == Kind::Atom && u.node_->atom == c.node_->atom) { dup = true; break; }
            }
            if (!dup) uniq.push_back(std::move(c));
        }
        if (uniq.empty()) return make_const(k == Kind::And);
        if (uniq.size() == 1) return uniq.front();
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->kids = std::move(uniq);
        return Formula(std::move(n));
    }

    void collect(std::set<Var>& out) const {
        if (kind() == Kind::Atom) node_->atom.expr.collect_vars(out);
        for (const auto& k : node_->kids) k.collect(out);
    }

    static Formula negated_atom(const Atom& a) {
        switch (a.rel) {
            case Rel::GT: return ge(-a.expr);
            case Rel::GE: return gt(-a.expr);
            case Rel::EQ: return ne(a.expr);
        }
        return top();
    }

    Formula nnf_impl(bool neg) const {
        switch (kind()) {
            case Kind::True: return constant(!neg);
            case Kind::False: return constant(neg);
            case Kind::Atom: return neg ? negated_atom(node_->atom) : *this;
            case Kind::Not: return node_->kids.front().nnf_impl(!neg);
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> ks;
                ks.reserve(node_->kids.size());
                for (const auto& k : node_->kids) ks.push_back(k.nnf_impl(neg));
                Kind out = kind();
                if (neg) out = (out == Kind::And) ? Kind::Or : Kind::And;
                return nary(out, ks);
            }
        }
        return *this;
    }

    // Precedence: 0 = top/or-operand, 1 = and-operand, 2 = not-operand.
    void print(std::ostream& os, int ctx) const {
        switch (kind()) {
            case Kind::True: os << "true"; return;
            case Kind::False: os << "false"; return;
            case Kind::Atom: {
                bool paren = ctx == 2 || ctx == 3;
                if (paren) os << "(";
                os << node_->atom.str();
                if (paren) os << ")";
                return;
            }
            case Kind::Not:
                os << "not ";
                node_->kids.front().print(os, 2);
                return;
            case Kind::And: {
                bool paren = ctx >= 2;
                if (paren) os << "(";
                for (std::size_t i = 0; i < node_->kids.size(); ++i) {
                    if (i) os << " and ";
                    node_->kids[i].print(os, 1);
                }
                if (paren) os << ")";
                return;
            }
            case Kind::Or: {
                bool paren = ctx >= 1;
                if (paren) os << "(";
                for (std::size_t i = 0; i < node_->kids.size(); ++i) {
                    if (i) os << " or ";
                    node_->kids[i].print(os, 3);
                }
                if (paren) os << ")";
                return;
            }
        }
    }

    std::shared_ptr<const Node> node_;
};

}  // namespace ovs
