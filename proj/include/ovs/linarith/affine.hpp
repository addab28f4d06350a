#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ovs/error.hpp"
#include "ovs/linarith/var.hpp"
#include "ovs/rational.hpp"

namespace ovs {

/// Assignment of rational values to variables.
using Point = std::map<Var, Rational>;

/// Sparse affine form  sum_i c_i * v_i + constant. No zero coefficients are stored;
/// terms are kept sorted by variable id.
class AffineExpr {
public:
    using Term = std::pair<Var, Rational>;

    AffineExpr() = default;
    AffineExpr(Rational constant) : constant_(std::move(constant)) {}  // NOLINT
    AffineExpr(Var v) { terms_.emplace_back(v, Rational(1)); }          // NOLINT

    static AffineExpr term(Var v, const Rational& c) {
        AffineExpr e;
        if (!c.is_zero()) e.terms_.emplace_back(v, c);
        return e;
    }

    const std::vector<Term>& terms() const { return terms_; }
    const Rational& constant() const { return constant_; }
    bool is_constant() const { return terms_.empty(); }

    Rational coeff(Var v) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), v,
                                   [](const Term& t, Var x) { return t.first < x; });
        return (it != terms_.end() && it->first == v) ? it->second : Rational(0);
    }

    bool mentions(Var v) const { return !coeff(v).is_zero(); }

    void collect_vars(std::set<Var>& out) const {
        for (const auto& [v, c] : terms_) out.insert(v);
    }

    AffineExpr& operator+=(const AffineExpr& o) { return axpy(Rational(1), o); }
    AffineExpr& operator-=(const AffineExpr& o) { return axpy(Rational(-1), o); }
    AffineExpr& operator*=(const Rational& k) {
        if (k.is_zero()) {
            terms_.clear();
            constant_ = Rational(0);
            return *this;
        }
        for (auto& t : terms_) t.second *= k;
        constant_ *= k;
        return *this;
    }

    /// this += k * o
    AffineExpr& axpy(const Rational& k, const AffineExpr& o) {
        if (k.is_zero()) return *this;
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        while (a != terms_.end() || b != o.terms_.end()) {
            if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
                out.push_back(std::move(*a++));
            } else if (a == terms_.end() || b->first < a->first) {
                out.emplace_back(b->first, k * b->second);
                ++b;
            } else {
                Rational c = a->second + k * b->second;
                if (!c.is_zero()) out.emplace_back(a->first, std::move(c));
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        constant_ += k * o.constant_;
        return *this;
    }

    friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
    friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
    friend AffineExpr operator*(AffineExpr a, const Rational& k) { return a *= k; }
    friend AffineExpr operator*(const Rational& k, AffineExpr a) { return a *= k; }
    AffineExpr operator-() const { return *this * Rational(-1); }

    /// Replace `v` by `e`.
    AffineExpr substitute(Var v, const AffineExpr& e) const {
        Rational c = coeff(v);
        if (c.is_zero()) return *this;
        AffineExpr out = without(v);
        out.axpy(c, e);
        return out;
    }

    /// Simultaneous substitution.
    AffineExpr substitute(const std::map<Var, AffineExpr>& sub) const {
        AffineExpr out(constant_);
        for (const auto& [v, c] : terms_) {
            auto it = sub.find(v);
            if (it == sub.end()) out.axpy(c, AffineExpr(v));
            else out.axpy(c, it->second);
        }
        return out;
    }

    AffineExpr without(Var v) const {
        AffineExpr out = *this;
        std::erase_if(out.terms_, [v](const Term& t) { return t.first == v; });
        return out;
    }

    Rational eval(const Point& p) const {
        Rational s = constant_;
        for (const auto& [v, c] : terms_) {
            auto it = p.find(v);
            if (it == p.end()) throw UnassignedVariable("variable '" + v.name() + "' has no value");
            s += c * it->second;
        }
        return s;
    }

    /// Partial evaluation: assigned variables are folded into the constant.
    AffineExpr partial_eval(const Point& p) const {
        AffineExpr out(constant_);
        for (const auto& [v, c] : terms_) {
            auto it = p.find(v);
            if (it == p.end()) out.terms_.emplace_back(v, c);
            else out.constant_ += c * it->second;
        }
        return out;
    }

    friend bool operator==(const AffineExpr& a, const AffineExpr& b) {
        return a.constant_ == b.constant_ && a.terms_ == b.terms_;
    }
    friend bool operator<(const AffineExpr& a, const AffineExpr& b) {
        if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (a.terms_[i].first != b.terms_[i].first) return a.terms_[i].first < b.terms_[i].first;
            if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second;
        }
        return a.constant_ < b.constant_;
    }

    /// Terms ordered by variable name; `c*x` with unit coefficients elided.
    std::string str() const {
        auto sorted = terms_;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Term& a, const Term& b) { return name_less(a.first, b.first); });
        std::ostringstream os;
        bool first = true;
        auto emit = [&](const Rational& c, const std::string* name) {
            Rational mag = c.abs();
            if (first) {
                if (c.sign() < 0) os << "-";
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
            }
            if (name == nullptr) os << mag;
            else if (mag == Rational(1)) os << *name;
            else os << mag << "*" << *name;
            first = false;
        };
        for (const auto& [v, c] : sorted) emit(c, &v.name());
        if (!constant_.is_zero() || first) {
            if (first && constant_.is_zero()) os << "0";
            else emit(constant_, nullptr);
        }
        return os.str();
    }

private:
    std::vector<Term> terms_;
    Rational constant_;
};

enum class Rel { GT, GE, EQ };

inline const char* rel_str(Rel r) {
    switch (r) {
        case Rel::GT: return ">";
        case Rel::GE: return ">=";
        case Rel::EQ: return "=";
    }
    return "?";
}

/// `expr rel 0`.
struct Atom {
    AffineExpr expr;
    Rel rel = Rel::GE;

    bool holds(const Rational& value) const {
        switch (rel) {
            case Rel::GT: return value.sign() > 0;
            case Rel::GE: return value.sign() >= 0;
            case Rel::EQ: return value.is_zero();
        }
        return false;
    }
    bool eval(const Point& p) const { return holds(expr.eval(p)); }

    std::string str() const { return expr.str() + " " + rel_str(rel) + " 0"; }

    friend bool operator==(const Atom& a, const Atom& b) { return a.rel == b.rel && a.expr == b.expr; }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (!(a.expr == b.expr)) return a.expr < b.expr;
        return a.rel < b.rel;
    }
};

/// Either a constant truth value or an atom in canonical scaling: the
/// homogeneous part is a primitive integer vector, and for equalities the
/// coefficient of the name-least variable is positive. Two atoms with
/// proportional homogeneous parts therefore share them up to sign.
using CanonicalAtom = std::variant<bool, Atom>;

inline CanonicalAtom canonicalize(const Atom& a) {
    const auto& terms = a.expr.terms();
    if (terms.empty()) return a.holds(a.expr.constant());
    mpz_class den_lcm = 1;
    mpz_class num_gcd = 0;
    for (const auto& [v, c] : terms) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.raw().get_den_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.raw().get_num_mpz_t());
    }
    Rational scale(mpq_class(den_lcm, num_gcd));  // positive
    if (a.rel == Rel::EQ) {
        Var lead = terms.front().first;
        Rational lead_c = terms.front().second;
        for (const auto& [v, c] : terms) {
            if (name_less(v, lead)) {
                lead = v;
                lead_c = c;
            }
        }
        if (lead_c.sign() < 0) scale = -scale;
    }
    if (scale == Rational(1)) return a;
    return Atom{a.expr * scale, a.rel};
}

inline AffineExpr homogeneous_part(const AffineExpr& e) { return e - AffineExpr(e.constant()); }

}  // namespace ovs
