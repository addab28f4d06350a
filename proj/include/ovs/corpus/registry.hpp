#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ovs/corpus/cones.hpp"
#include "ovs/corpus/oracle.hpp"

namespace ovs::corpus {

using Item = std::variant<OVSpace, OracleCone>;

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names{"closed_orthant", "open_orthant_cone", "strict_halfspace_cone",
                                                "lex_cone",       "lex_pair_product",  "halfspace_wedge",
                                                "full_wedge",     "zero_cone",         "poly_pos_deg2"};
    return names;
}

namespace detail {
inline std::size_t natural_arg(const std::string& ident, const std::vector<Rational>& args, std::size_t i) {
    if (i >= args.size()) throw InvalidArgument(ident + " expects a dimension argument");
    const auto& a = args[i];
    if (a.sign() < 0 || a.raw().get_den() != 1 || a > Rational(64))
        throw InvalidArgument(ident + ": '" + a.str() + "' is not a dimension in 0..64");
    return a.raw().get_num().get_ui();
}
inline void arity(const std::string& ident, const std::vector<Rational>& args, std::size_t n) {
    if (args.size() != n)
        throw InvalidArgument(ident + " expects " + std::to_string(n) + " argument(s), got " +
                              std::to_string(args.size()));
}
}  // namespace detail

/// Dimension of the named entry without building it (for parse-time checks).
inline std::size_t corpus_dim(const std::string& ident, const std::vector<Rational>& args) {
    if (ident == "poly_pos_deg2") {
        detail::arity(ident, args, 0);
        return 3;
    }
    if (ident == "halfspace_wedge") {
        std::size_t n = detail::natural_arg(ident, args, 0);
        detail::arity(ident, args, n + 1);
        return n;
    }
    if (ident == "lex_pair_product") {
        detail::arity(ident, args, 1);
        return 2 * detail::natural_arg(ident, args, 0);
    }
    for (const auto& name : corpus_names())
        if (name == ident) {
            detail::arity(ident, args, 1);
            return detail::natural_arg(ident, args, 0);
        }
    throw InvalidArgument("unknown corpus entry '" + ident + "'");
}

inline Item corpus_build(const std::string& ident, const std::vector<Rational>& args) {
    std::size_t n = corpus_dim(ident, args);
    if (ident == "poly_pos_deg2") return poly_pos_cone_deg2();
    if (ident == "closed_orthant") return closed_orthant(n);
    if (ident == "open_orthant_cone") return open_orthant_cone(n);
    if (ident == "strict_halfspace_cone") return strict_halfspace_cone(n);
    if (ident == "lex_cone") return lex_cone(n);
    if (ident == "lex_pair_product") return lex_pair_product(n / 2);
    if (ident == "halfspace_wedge") return halfspace_wedge(n, Vector(args.begin() + 1, args.end()));
    if (ident == "full_wedge") return full_wedge(n);
    return zero_cone(n);
}

}  // namespace ovs::corpus
