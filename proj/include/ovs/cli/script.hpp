#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ovs/corpus/registry.hpp"

namespace ovs::cli {

// Script language, one statement per line, '#' starts a comment:
//
//   format-version: 1                          (optional, first line)
//   space NAME dim N
//   cone NAME = FORMULA | hull VEC... | corpus IDENT ARG...
//   subspace NAME = span VEC...
//   map NAME = [r11 r12; r21 r22]
//   check PRED NAME [VEC | NAME]
//   compute N|D|closure NAME [NAME]
//   quotient NAME by NAME [as NAME]
//   archimedeanize NAME [as NAME]
//   factor MAP through NAME into NAME
//   falsify PROP NAME [VEC]

enum class StmtKind {
    Space, ConeFormula, ConeHull, ConeCorpus, Subspace, Map,
    Check, Compute, Quotient, Archimedeanize, Factor, Falsify
};

struct Stmt {
    StmtKind kind{};
    std::size_t line = 0;
    std::string echo;               // source text without comment
    std::string name;               // defined or target entity
    std::string word;               // predicate, compute target, corpus entry, property
    std::vector<std::string> refs;  // further entity names, in source order
    std::string as;                 // binding for derived spaces
    std::size_t dim = 0;
    std::optional<Formula> formula;
    std::vector<Vector> vectors;  // hull generators, span vectors, matrix rows
    std::size_t cols = 0;         // matrix columns
    std::vector<Rational> args;
    std::optional<Vector> point;
};

struct Script {
    int format_version = 1;
    std::vector<Stmt> stmts;
};

/// Predicates accepted by `check`, with their extra argument.
enum class Extra { None, Point, Subspace, OptionalSubspace };
inline const std::map<std::string, Extra>& check_predicates() {
    static const std::map<std::string, Extra> preds{
        {"wedge", Extra::None},
        {"cone", Extra::None},
        {"generating", Extra::None},
        {"archimedean", Extra::None},
        {"almost-archimedean", Extra::None},
        {"riesz", Extra::None},
        {"arch-element", Extra::Point},
        {"almost-arch-element", Extra::Point},
        {"order-unit", Extra::Point},
        {"order-ideal", Extra::Subspace},
        {"order-convex", Extra::Subspace},
        {"uniformly-closed", Extra::OptionalSubspace},
    };
    return preds;
}
inline const std::map<std::string, Extra>& falsify_properties() {
    static const std::map<std::string, Extra> props{
        {"archimedean", Extra::None},
        {"almost-archimedean", Extra::None},
        {"arch-element", Extra::Point},
        {"almost-arch-element", Extra::Point},
    };
    return props;
}

namespace detail {

struct Token {
    enum class Kind { Ident, Number, Sym, End } kind = Kind::End;
    std::string text;
    std::size_t col = 0;  // 1-based
};

inline std::vector<Token> lex(std::string_view s, std::size_t line) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto err = [&](std::size_t col, const std::string& msg) {
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    };
    auto letter = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
        if (c == '#') break;
        std::size_t start = i;
        if (letter(c)) {
            // hyphen joins words (almost-archimedean) but never a digit-ended name (x1-x2)
            while (i < s.size() && (letter(s[i]) || digit(s[i]) ||
                                    (s[i] == '-' && i + 1 < s.size() && letter(s[i + 1]) && letter(s[i - 1]))))
                ++i;
            out.push_back({Token::Kind::Ident, std::string(s.substr(start, i - start)), start + 1});
            continue;
        }
        if (digit(c)) {
            while (i < s.size() && digit(s[i])) ++i;
            if (i + 1 < s.size() && s[i] == '.' && digit(s[i + 1])) {
                ++i;
                while (i < s.size() && digit(s[i])) ++i;
            }
            out.push_back({Token::Kind::Number, std::string(s.substr(start, i - start)), start + 1});
            continue;
        }
        static const char* two[] = {">=", "<=", "!="};
        bool matched = false;
        for (const char* t : two)
            if (s.substr(i, 2) == t) {
                out.push_back({Token::Kind::Sym, t, start + 1});
                i += 2;
                matched = true;
                break;
            }
        if (matched) continue;
        if (std::string_view("()[]{},;=<>+-*/:").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), start + 1});
            ++i;
            continue;
        }
        err(start + 1, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Kind::End, "", s.size() + 1});
    return out;
}

inline constexpr std::size_t unknown_dim = static_cast<std::size_t>(-1);

struct Entity {
    enum class Kind { Space, Subspace, Map } kind;
    std::size_t dim = 0;  // ambient dim; map: domain
    std::size_t codim = 0;  // map codomain; subspace dimension
    bool has_cone = false;
    bool oracle_only = false;
};

class LineParser {
public:
    LineParser(std::vector<Token> toks, std::size_t line) : t_(std::move(toks)), line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const { fail_at(t_[i_].col, msg); }
    [[noreturn]] void fail_at(std::size_t col, const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(col) + ": " + msg);
    }

    const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool is_sym(const char* s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
    }
    bool is_word(const char* w) const { return peek().kind == Token::Kind::Ident && peek().text == w; }
    void expect_sym(const char* s) {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'" + found());
        ++i_;
    }
    void expect_word(const char* w) {
        if (!is_word(w)) fail(std::string("expected '") + w + "'" + found());
        ++i_;
    }
    std::string found() const {
        return at_end() ? " at end of line" : ", found '" + peek().text + "'";
    }
    std::string ident(const char* what) {
        if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what + found());
        return t_[i_++].text;
    }
    void expect_end() {
        if (!at_end()) fail("unexpected '" + peek().text + "'");
    }

    std::size_t natural() {
        if (peek().kind != Token::Kind::Number || peek().text.find('.') != std::string::npos)
            fail("expected a natural number" + found());
        const auto& txt = t_[i_].text;
        if (txt.size() > 3) fail("dimension " + txt + " is too large");
        ++i_;
        return std::stoul(txt);
    }

    Rational rational() {
        bool neg = false;
        if (is_sym("-")) { neg = true; ++i_; }
        else if (is_sym("+")) ++i_;
        if (peek().kind != Token::Kind::Number) fail("expected a number" + found());
        Rational r = Rational::parse(t_[i_++].text);
        if (is_sym("/")) {
            ++i_;
            if (peek().kind != Token::Kind::Number) fail("expected a denominator" + found());
            std::size_t col = peek().col;
            Rational d = Rational::parse(t_[i_++].text);
            if (d.is_zero()) fail_at(col, "zero denominator");
            r = r / d;
        }
        return neg ? -r : r;
    }

    Vector vector() {
        expect_sym("(");
        Vector v;
        if (!is_sym(")")) {
            v.push_back(rational());
            while (is_sym(",")) {
                ++i_;
                v.push_back(rational());
            }
        }
        expect_sym(")");
        return v;
    }

    std::vector<Vector> vectors() {
        std::vector<Vector> out;
        while (is_sym("(")) out.push_back(vector());
        return out;
    }

    // [a b; c d]
    std::vector<Vector> matrix(std::size_t& cols) {
        expect_sym("[");
        std::vector<Vector> rows{{}};
        while (!is_sym("]")) {
            if (at_end()) fail("unterminated matrix");
            if (is_sym(";")) {
                ++i_;
                rows.emplace_back();
                continue;
            }
            if (is_sym(",")) { ++i_; continue; }
            rows.back().push_back(rational());
        }
        std::size_t col = peek().col;
        ++i_;
        if (rows.size() == 1 && rows[0].empty()) rows.clear();
        cols = rows.empty() ? 0 : rows[0].size();
        for (const auto& r : rows)
            if (r.size() != cols) fail_at(col, "matrix rows have different lengths");
        return rows;
    }

    // ----- formulas over x1..x_dim

    Formula formula(std::size_t dim) {
        dim_ = dim;
        return disjunction();
    }

    std::size_t pos() const { return i_; }
    void reset(std::size_t p) { i_ = p; }

private:
    Formula disjunction() {
        std::vector<Formula> ks{conjunction()};
        while (is_word("or")) {
            ++i_;
            ks.push_back(conjunction());
        }
        return Formula::disj(ks);
    }
    Formula conjunction() {
        std::vector<Formula> ks{unary()};
        while (is_word("and")) {
            ++i_;
            ks.push_back(unary());
        }
        return Formula::conj(ks);
    }
    Formula unary() {
        if (is_word("not")) {
            ++i_;
            return Formula::negate(unary());
        }
        if (is_word("true")) { ++i_; return Formula::top(); }
        if (is_word("false")) { ++i_; return Formula::bottom(); }
        if (is_sym("(")) {
            // "(x1 + x2) > 0" is a comparison, "(x1 > 0)" a group
            std::size_t save = i_;
            try {
                return comparison();
            } catch (const ParseError&) {
                i_ = save;
            }
            ++i_;
            Formula f = disjunction();
            expect_sym(")");
            return f;
        }
        return comparison();
    }
    Formula comparison() {
        AffineExpr lhs = linear();
        std::string op = peek().text;
        if (peek().kind != Token::Kind::Sym || (op != ">" && op != ">=" && op != "=" && op != "<" && op != "<=" &&
                                                op != "!="))
            fail("expected a comparison operator" + found());
        ++i_;
        AffineExpr rhs = linear();
        AffineExpr d = lhs - rhs;
        if (op == ">") return Formula::gt(d);
        if (op == ">=") return Formula::ge(d);
        if (op == "=") return Formula::eq(d);
        if (op == "<") return Formula::gt(-d);
        if (op == "<=") return Formula::ge(-d);
        return Formula::ne(d);
    }
    AffineExpr linear() {
        AffineExpr e;
        bool first = true;
        for (;;) {
            Rational sign(1);
            if (is_sym("+") || is_sym("-")) {
                if (is_sym("-")) sign = Rational(-1);
                ++i_;
            } else if (!first) {
                break;
            }
            e.axpy(sign, term());
            first = false;
        }
        return e;
    }
    AffineExpr term() {
        AffineExpr acc = factor();
        while (is_sym("*") || is_sym("/")) {
            bool div = is_sym("/");
            std::size_t col = peek().col;
            ++i_;
            AffineExpr rhs = factor();
            if (div) {
                if (!rhs.terms().empty()) fail_at(col, "division by a variable");
                if (rhs.constant().is_zero()) fail_at(col, "division by zero");
                acc *= rhs.constant().inverse();
            } else if (rhs.terms().empty()) {
                acc *= rhs.constant();
            } else if (acc.terms().empty()) {
                Rational k = acc.constant();
                acc = rhs;
                acc *= k;
            } else {
                fail_at(col, "nonlinear product");
            }
        }
        return acc;
    }
    AffineExpr factor() {
        if (is_sym("-")) {
            ++i_;
            return -factor();
        }
        if (peek().kind == Token::Kind::Number) return AffineExpr(Rational::parse(t_[i_++].text));
        if (peek().kind == Token::Kind::Ident) {
            const Token& tok = t_[i_];
            const std::string& s = tok.text;
            bool coord = s.size() >= 2 && s[0] == 'x' && std::isdigit(static_cast<unsigned char>(s[1])) &&
                         s[1] != '0' && s.size() <= 4 &&
                         s.find_first_not_of("0123456789", 1) == std::string::npos;
            if (!coord) fail("unknown variable '" + s + "' (coordinates are x1..x" + std::to_string(dim_) + ")");
            std::size_t k = std::stoul(s.substr(1));
            if (k > dim_) fail("variable '" + s + "' exceeds dimension " + std::to_string(dim_));
            ++i_;
            return AffineExpr(Var::coord(k));
        }
        if (is_sym("(")) {
            ++i_;
            AffineExpr e = linear();
            expect_sym(")");
            return e;
        }
        fail("expected a term" + found());
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
    std::size_t line_;
    std::size_t dim_ = 0;
};

inline std::string trim(std::string_view s) {
    auto hash = s.find('#');
    if (hash != std::string_view::npos) s = s.substr(0, hash);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    return std::string(s);
}

}  // namespace detail

/// Parses a whole script. Names are unique and must be defined before use.
inline Script parse(std::string_view text) {
    using detail::Entity;
    Script script;
    std::map<std::string, Entity> env;
    std::size_t line_no = 0;
    bool seen_statement = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        auto toks = detail::lex(raw, line_no);
        if (toks.size() == 1) continue;
        detail::LineParser p(toks, line_no);

        if (p.is_word("format-version")) {
            if (seen_statement) p.fail("format-version must be the first line");
            p.ident("header");
            p.expect_sym(":");
            std::size_t col = p.peek().col;
            std::size_t v = p.natural();
            if (v != 1) p.fail_at(col, "unsupported format-version " + std::to_string(v));
            p.expect_end();
            script.format_version = 1;
            seen_statement = true;
            continue;
        }
        seen_statement = true;

        Stmt st;
        st.line = line_no;
        st.echo = detail::trim(raw);
        std::size_t kw_col = p.peek().col;
        std::string kw = p.ident("a statement keyword");

        auto fresh = [&](const char* what) {
            std::size_t col = p.peek().col;
            std::string n = p.ident(what);
            if (env.count(n)) p.fail_at(col, "duplicate name '" + n + "'");
            return n;
        };
        auto ref = [&](Entity::Kind kind, const char* what) -> std::pair<std::string, Entity*> {
            std::size_t col = p.peek().col;
            std::string n = p.ident(what);
            auto it = env.find(n);
            if (it == env.end()) p.fail_at(col, "undefined name '" + n + "'");
            if (it->second.kind != kind) p.fail_at(col, "'" + n + "' is not a " + what);
            if (kind == Entity::Kind::Space && !it->second.has_cone)
                p.fail_at(col, "space '" + n + "' has no cone");
            return {n, &it->second};
        };
        auto point_for = [&](const Entity& e) {
            std::size_t col = p.peek().col;
            Vector v = p.vector();
            if (e.dim != detail::unknown_dim && v.size() != e.dim)
                p.fail_at(col, "point has " + std::to_string(v.size()) + " coordinates, space has dimension " +
                                   std::to_string(e.dim));
            return v;
        };

        if (kw == "space") {
            st.kind = StmtKind::Space;
            st.name = fresh("space name");
            p.expect_word("dim");
            st.dim = p.natural();
            env[st.name] = Entity{Entity::Kind::Space, st.dim, 0, false, false};
        } else if (kw == "cone") {
            std::size_t col = p.peek().col;
            st.name = p.ident("space name");
            auto it = env.find(st.name);
            if (it != env.end() && it->second.kind != Entity::Kind::Space)
                p.fail_at(col, "'" + st.name + "' is not a space");
            if (it != env.end() && it->second.has_cone) p.fail_at(col, "duplicate cone for '" + st.name + "'");
            p.expect_sym("=");
            if (p.is_word("hull")) {
                p.ident("hull");
                st.kind = StmtKind::ConeHull;
                std::size_t vcol = p.peek().col;
                st.vectors = p.vectors();
                if (it != env.end()) st.dim = it->second.dim;
                else if (!st.vectors.empty()) st.dim = st.vectors[0].size();
                else p.fail_at(vcol, "empty hull needs a declared space");
                for (const auto& v : st.vectors)
                    if (v.size() != st.dim) p.fail_at(vcol, "generator " + vector_str(v) + " has the wrong dimension");
            } else if (p.is_word("corpus")) {
                p.ident("corpus");
                st.kind = StmtKind::ConeCorpus;
                std::size_t icol = p.peek().col;
                st.word = p.ident("corpus entry");
                while (!p.at_end()) st.args.push_back(p.rational());
                try {
                    st.dim = corpus::corpus_dim(st.word, st.args);
                } catch (const InvalidArgument& e) {
                    p.fail_at(icol, e.what());
                }
                if (it != env.end() && it->second.dim != st.dim)
                    p.fail_at(icol, "corpus entry has dimension " + std::to_string(st.dim) + ", space '" + st.name +
                                        "' has " + std::to_string(it->second.dim));
            } else {
                if (it == env.end()) p.fail_at(col, "cone formula for undeclared space '" + st.name + "'");
                st.kind = StmtKind::ConeFormula;
                st.dim = it->second.dim;
                st.formula = p.formula(st.dim);
            }
            Entity e{Entity::Kind::Space, st.dim, 0, true, st.kind == StmtKind::ConeCorpus && st.word == "poly_pos_deg2"};
            env[st.name] = e;
        } else if (kw == "subspace") {
            st.kind = StmtKind::Subspace;
            st.name = fresh("subspace name");
            p.expect_sym("=");
            p.expect_word("span");
            std::size_t vcol = p.peek().col;
            st.vectors = p.vectors();
            if (st.vectors.empty()) p.fail_at(vcol, "span needs at least one vector");
            st.dim = st.vectors[0].size();
            for (const auto& v : st.vectors)
                if (v.size() != st.dim) p.fail_at(vcol, "span vectors have different lengths");
            env[st.name] = Entity{Entity::Kind::Subspace, st.dim, Subspace::span(st.dim, st.vectors).dim(), false, false};
        } else if (kw == "map") {
            st.kind = StmtKind::Map;
            st.name = fresh("map name");
            p.expect_sym("=");
            st.vectors = p.matrix(st.cols);
            env[st.name] = Entity{Entity::Kind::Map, st.cols, st.vectors.size(), false, false};
        } else if (kw == "check") {
            st.kind = StmtKind::Check;
            std::size_t col = p.peek().col;
            st.word = p.ident("predicate");
            auto pit = check_predicates().find(st.word);
            if (pit == check_predicates().end()) p.fail_at(col, "unknown predicate '" + st.word + "'");
            auto [n, e] = ref(Entity::Kind::Space, "space");
            st.name = n;
            switch (pit->second) {
                case Extra::None: break;
                case Extra::Point: st.point = point_for(*e); break;
                case Extra::OptionalSubspace:
                    if (p.at_end()) break;
                    [[fallthrough]];
                case Extra::Subspace: {
                    std::size_t scol = p.peek().col;
                    auto [sn, se] = ref(Entity::Kind::Subspace, "subspace");
                    if (e->dim != detail::unknown_dim && se->dim != e->dim) p.fail_at(scol, "subspace '" + sn + "' lives in another dimension");
                    st.refs.push_back(sn);
                    break;
                }
            }
        } else if (kw == "compute") {
            st.kind = StmtKind::Compute;
            std::size_t col = p.peek().col;
            st.word = p.ident("N, D or closure");
            if (st.word != "N" && st.word != "D" && st.word != "closure")
                p.fail_at(col, "compute expects N, D or closure, found '" + st.word + "'");
            auto [n, e] = ref(Entity::Kind::Space, "space");
            st.name = n;
            if (st.word == "closure" && !p.at_end()) {
                std::size_t scol = p.peek().col;
                auto [sn, se] = ref(Entity::Kind::Subspace, "subspace");
                if (e->dim != detail::unknown_dim && se->dim != e->dim) p.fail_at(scol, "subspace '" + sn + "' lives in another dimension");
                st.refs.push_back(sn);
            }
        } else if (kw == "quotient") {
            st.kind = StmtKind::Quotient;
            auto [n, e] = ref(Entity::Kind::Space, "space");
            st.name = n;
            p.expect_word("by");
            std::size_t scol = p.peek().col;
            auto [sn, se] = ref(Entity::Kind::Subspace, "subspace");
            if (e->dim != detail::unknown_dim && se->dim != e->dim) p.fail_at(scol, "subspace '" + sn + "' lives in another dimension");
            st.refs.push_back(sn);
            if (p.is_word("as")) {
                p.ident("as");
                st.as = fresh("name");
                env[st.as] = Entity{Entity::Kind::Space, e->dim - se->codim, 0, true, false};
            }
        } else if (kw == "archimedeanize") {
            st.kind = StmtKind::Archimedeanize;
            auto [n, e] = ref(Entity::Kind::Space, "space");
            st.name = n;
            (void)e;
            if (p.is_word("as")) {
                p.ident("as");
                st.as = fresh("name");
                // final dimension is only known after the computation
                env[st.as] = Entity{Entity::Kind::Space, detail::unknown_dim, 0, true, false};
            }
        } else if (kw == "factor") {
            st.kind = StmtKind::Factor;
            auto [m, me] = ref(Entity::Kind::Map, "map");
            st.name = m;
            p.expect_word("through");
            std::size_t vcol = p.peek().col;
            auto [v, ve] = ref(Entity::Kind::Space, "space");
            p.expect_word("into");
            std::size_t ucol = p.peek().col;
            auto [u, ue] = ref(Entity::Kind::Space, "space");
            if (ve->dim != detail::unknown_dim && me->dim != ve->dim)
                p.fail_at(vcol, "map domain does not match '" + v + "'");
            if (ue->dim != detail::unknown_dim && me->codim != ue->dim) p.fail_at(ucol, "map codomain does not match '" + u + "'");
            st.refs = {v, u};
        } else if (kw == "falsify") {
            st.kind = StmtKind::Falsify;
            std::size_t col = p.peek().col;
            st.word = p.ident("property");
            auto pit = falsify_properties().find(st.word);
            if (pit == falsify_properties().end()) p.fail_at(col, "unknown property '" + st.word + "'");
            auto [n, e] = ref(Entity::Kind::Space, "space");
            st.name = n;
            if (pit->second == Extra::Point) st.point = point_for(*e);
        } else {
            p.fail_at(kw_col, "unknown statement '" + kw + "'");
        }
        p.expect_end();
        script.stmts.push_back(std::move(st));
    }
    return script;
}

}  // namespace ovs::cli
