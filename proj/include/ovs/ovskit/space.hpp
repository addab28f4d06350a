#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ovs/linarith/formula.hpp"
#include "ovs/ovskit/linalg.hpp"

namespace ovs {

/// A subset of Q^dim described by a quantifier-free formula in x1..x_dim.
class SemilinearSet {
public:
    SemilinearSet() = default;
    SemilinearSet(std::size_t dim, Formula f) : dim_(dim), formula_(std::move(f)) {
        for (Var v : formula_.free_vars()) {
            bool ok = false;
            for (std::size_t i = 1; i <= dim_ && !ok; ++i) ok = (v == Var::coord(i));
            if (!ok)
                throw DimensionMismatch("variable '" + v.name() + "' is not a coordinate of Q^" +
                                        std::to_string(dim_));
        }
    }

    std::size_t dim() const { return dim_; }
    const Formula& formula() const { return formula_; }

    bool contains(const Vector& p) const {
        if (p.size() != dim_) throw DimensionMismatch("point of size " + std::to_string(p.size()) +
                                                      " in Q^" + std::to_string(dim_));
        Point pt;
        for (std::size_t i = 0; i < dim_; ++i) pt[Var::coord(i + 1)] = p[i];
        return formula_.eval(pt);
    }

    /// The formula with x_i replaced by exprs[i] (simultaneously).
    Formula at(const std::vector<AffineExpr>& exprs) const {
        if (exprs.size() != dim_) throw DimensionMismatch("instantiation arity");
        std::map<Var, AffineExpr> sub;
        for (std::size_t i = 0; i < dim_; ++i) sub.emplace(Var::coord(i + 1), exprs[i]);
        return formula_.substitute(sub);
    }

    std::string str() const { return formula_.str(); }

private:
    std::size_t dim_ = 0;
    Formula formula_ = Formula::top();
};

/// Vectors of variables `prefix1..prefix<n>` used to instantiate sets.
inline std::vector<Var> var_block(const std::string& prefix, std::size_t n) {
    std::vector<Var> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(Var::named(prefix + std::to_string(i)));
    return out;
}
inline std::vector<AffineExpr> exprs(const std::vector<Var>& vs) { return {vs.begin(), vs.end()}; }
inline std::vector<AffineExpr> exprs(const Vector& v) { return {v.begin(), v.end()}; }
inline std::vector<AffineExpr> operator+(std::vector<AffineExpr> a, const std::vector<AffineExpr>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline std::vector<AffineExpr> operator-(std::vector<AffineExpr> a, const std::vector<AffineExpr>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline std::vector<AffineExpr> operator-(std::vector<AffineExpr> a) {
    for (auto& e : a) e = -e;
    return a;
}
inline std::vector<AffineExpr> coords(std::size_t n) { return exprs(var_block("x", n)); }

/// all x_i = 0
inline Formula zero_formula(const std::vector<AffineExpr>& xs) {
    std::vector<Formula> ks;
    for (const auto& e : xs) ks.push_back(Formula::eq(e));
    return Formula::conj(ks);
}
/// some x_i != 0
inline Formula nonzero_formula(const std::vector<AffineExpr>& xs) { return Formula::negate(zero_formula(xs)).nnf(); }

inline Vector read_vector(const Point& p, const std::vector<Var>& vs) {
    Vector out;
    for (Var v : vs) {
        auto it = p.find(v);
        out.push_back(it == p.end() ? Rational(0) : it->second);
    }
    return out;
}

/// Linear subspace given by a basis (linearly independent, verified).
class Subspace {
public:
    Subspace() = default;
    Subspace(std::size_t ambient, std::vector<Vector> basis) : ambient_(ambient), basis_(std::move(basis)) {
        for (const auto& b : basis_)
            if (b.size() != ambient_) throw DimensionMismatch("basis vector outside the ambient space");
        if (!basis_.empty() && rank(Matrix::from_rows(basis_, ambient_)) != basis_.size())
            throw InvalidArgument("subspace basis is linearly dependent");
    }
    static Subspace zero(std::size_t ambient) { return Subspace(ambient, {}); }
    /// Independent subset of `spanning`, chosen greedily in order.
    static Subspace span(std::size_t ambient, const std::vector<Vector>& spanning) {
        std::vector<Vector> chosen;
        for (const auto& v : spanning) {
            auto trial = chosen;
            trial.push_back(v);
            if (rank(Matrix::from_rows(trial, ambient)) == trial.size()) chosen = std::move(trial);
        }
        return Subspace(ambient, std::move(chosen));
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<Vector>& basis() const { return basis_; }

    /// Basis of the annihilator: functionals vanishing on the subspace.
    std::vector<Vector> annihilator() const {
        if (basis_.empty()) {
            std::vector<Vector> out;
            for (std::size_t i = 0; i < ambient_; ++i) {
                Vector e(ambient_);
                e[i] = Rational(1);
                out.push_back(e);
            }
            return out;
        }
        return nullspace(Matrix::from_rows(basis_, ambient_));
    }

    bool contains(const Vector& v) const {
        auto rows = basis_;
        rows.push_back(v);
        return rank(Matrix::from_rows(rows, ambient_)) == basis_.size();
    }

    /// Membership as a conjunction of linear equations in `xs`.
    Formula formula(const std::vector<AffineExpr>& xs) const {
        std::vector<Formula> ks;
        for (const auto& c : annihilator()) {
            AffineExpr e;
            for (std::size_t i = 0; i < ambient_; ++i) e.axpy(c[i], xs[i]);
            ks.push_back(Formula::eq(e));
        }
        return Formula::conj(ks);
    }
    SemilinearSet as_set() const { return SemilinearSet(ambient_, formula(coords(ambient_))); }

    bool contained_in(const Subspace& o) const {
        for (const auto& b : basis_)
            if (!o.contains(b)) return false;
        return true;
    }
    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contained_in(b);
    }

    std::string str() const {
        std::string s = "span{";
        for (std::size_t i = 0; i < basis_.size(); ++i) s += (i ? ", " : "") + vector_str(basis_[i]);
        return s + "}";
    }

private:
    std::size_t ambient_ = 0;
    std::vector<Vector> basis_;
};

/// Linear map Q^domain -> Q^codomain.
class LinearMap {
public:
    LinearMap() = default;
    LinearMap(std::size_t domain, std::size_t codomain, Matrix m)
        : domain_(domain), codomain_(codomain), m_(std::move(m)) {
        if (m_.rows() != codomain_ || m_.cols() != domain_)
            throw DimensionMismatch("matrix shape " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                                    " does not match a map Q^" + std::to_string(domain_) + " -> Q^" +
                                    std::to_string(codomain_));
    }
    explicit LinearMap(Matrix m) : LinearMap(m.cols(), m.rows(), m) {}
    static LinearMap identity(std::size_t n) { return LinearMap(Matrix::identity(n)); }
    static LinearMap zero(std::size_t domain, std::size_t codomain) {
        return LinearMap(domain, codomain, Matrix(codomain, domain));
    }

    std::size_t domain() const { return domain_; }
    std::size_t codomain() const { return codomain_; }
    const Matrix& matrix() const { return m_; }

    Vector operator()(const Vector& x) const { return m_.apply(x); }
    std::vector<AffineExpr> apply(const std::vector<AffineExpr>& xs) const {
        std::vector<AffineExpr> out(codomain_);
        for (std::size_t i = 0; i < codomain_; ++i)
            for (std::size_t j = 0; j < domain_; ++j) out[i].axpy(m_(i, j), xs[j]);
        return out;
    }
    /// this after `first`.
    LinearMap after(const LinearMap& first) const {
        if (first.codomain_ != domain_) throw DimensionMismatch("composition shape mismatch");
        return LinearMap(first.domain_, codomain_, m_ * first.m_);
    }
    Subspace kernel() const { return Subspace(domain_, nullspace(m_)); }
    bool surjective() const { return rank(m_) == codomain_; }

    friend bool operator==(const LinearMap& a, const LinearMap& b) { return a.m_ == b.m_ && a.domain_ == b.domain_; }
    std::string str() const { return m_.str(); }

private:
    std::size_t domain_ = 0, codomain_ = 0;
    Matrix m_;
};

/// Quotient of Q^n by a subspace N: a complement of N spanned by standard
/// basis vectors (the non-pivot coordinates of N's echelon form) and the
/// projection p with kernel exactly N that reads off those coordinates.
struct QuotientPresentation {
    Subspace ideal;
    std::vector<Vector> complement;
    LinearMap projection;
    LinearMap section;  // complement inclusion, projection * section = id

    static QuotientPresentation of(const Subspace& n) {
        const std::size_t dim = n.ambient();
        Matrix m = Matrix::from_rows(n.basis(), dim);
        auto pivots = rref(m);
        std::vector<bool> is_pivot(dim, false);
        for (auto p : pivots) is_pivot[p] = true;
        std::vector<std::size_t> free_cols;
        for (std::size_t j = 0; j < dim; ++j)
            if (!is_pivot[j]) free_cols.push_back(j);
        const std::size_t q = free_cols.size();
        Matrix proj(q, dim), sec(dim, q);
        std::vector<Vector> complement;
        for (std::size_t r = 0; r < q; ++r) {
            std::size_t j = free_cols[r];
            proj(r, j) = Rational(1);
            for (std::size_t i = 0; i < pivots.size(); ++i) proj(r, pivots[i]) = -m(i, j);
            sec(j, r) = Rational(1);
            Vector e(dim);
            e[j] = Rational(1);
            complement.push_back(std::move(e));
        }
        QuotientPresentation qp{n, std::move(complement), LinearMap(dim, q, proj), LinearMap(q, dim, sec)};
        qp.check();
        return qp;
    }

    void check() const {
        if (!(projection.after(section) == LinearMap::identity(projection.codomain())))
            throw InternalInvariantViolation("quotient section is not a right inverse");
        for (const auto& b : ideal.basis())
            if (!is_zero_vector(projection(b))) throw InternalInvariantViolation("projection does not kill the ideal");
    }
};

/// Tri-state cache slot: written once, concurrent duplicate writes agree.
class FlagCache {
public:
    std::optional<bool> get(const std::string& key) const {
        std::lock_guard lock(mutex_);
        auto it = flags_.find(key);
        if (it == flags_.end()) return std::nullopt;
        return it->second;
    }
    void set(const std::string& key, bool v) {
        std::lock_guard lock(mutex_);
        flags_.try_emplace(key, v);
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, bool> flags_;
};

/// An ordered (or pre-ordered) vector space Q^dim with its positive wedge.
class OVSpace {
public:
    OVSpace() : cache_(std::make_shared<FlagCache>()) {}
    explicit OVSpace(SemilinearSet positive) : positive_(std::move(positive)), cache_(std::make_shared<FlagCache>()) {}
    OVSpace(std::size_t dim, Formula f) : OVSpace(SemilinearSet(dim, std::move(f))) {}

    std::size_t dim() const { return positive_.dim(); }
    const SemilinearSet& positive() const { return positive_; }
    FlagCache& flags() const { return *cache_; }

    std::string str() const { return "(Q^" + std::to_string(dim()) + ", " + positive_.str() + ")"; }

private:
    SemilinearSet positive_;
    std::shared_ptr<FlagCache> cache_;
};

}  // namespace ovs
