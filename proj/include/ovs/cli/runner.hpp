#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ovs/archkit/archimedeanize.hpp"
#include "ovs/cli/script.hpp"

namespace ovs::cli {

struct Options {
    std::uint64_t seed = 0;
    std::size_t sample_budget = 10000;
    Limits limits;
    std::size_t lattice_dim_max = 4;
    bool timing = false;
};

/// One report line per statement.
struct Record {
    std::size_t line = 0;
    std::string kind;     // statement keyword
    std::string command;  // source echo
    std::string name;
    std::optional<std::string> verdict;
    std::map<std::string, std::string> witness;
    nlohmann::json object;  // null when nothing was computed
    std::optional<std::size_t> depth;
    std::optional<std::string> note;
    std::optional<std::string> error_kind, error;
    std::optional<long long> millis;
};

struct Report {
    std::vector<Record> records;
    int exit_code = 0;
};

inline int exit_code_for(const Error& e) {
    switch (e.category()) {
        case Error::Category::Parse: return 2;
        case Error::Category::Engine: return 3;
        case Error::Category::Contract: return 4;
    }
    return 3;
}

namespace detail {

inline const char* kind_name(StmtKind k) {
    switch (k) {
        case StmtKind::Space: return "space";
        case StmtKind::ConeFormula:
        case StmtKind::ConeHull:
        case StmtKind::ConeCorpus: return "cone";
        case StmtKind::Subspace: return "subspace";
        case StmtKind::Map: return "map";
        case StmtKind::Check: return "check";
        case StmtKind::Compute: return "compute";
        case StmtKind::Quotient: return "quotient";
        case StmtKind::Archimedeanize: return "archimedeanize";
        case StmtKind::Factor: return "factor";
        case StmtKind::Falsify: return "falsify";
    }
    return "?";
}

struct Env {
    std::map<std::string, std::size_t> declared;  // spaces without a cone yet
    std::map<std::string, OVSpace> spaces;
    std::map<std::string, corpus::OracleCone> oracles;
    std::map<std::string, Subspace> subspaces;
    std::map<std::string, LinearMap> maps;
    std::map<std::string, arch::ArchResult> arch_cache;

    const OVSpace& space(const std::string& n) const {
        auto it = spaces.find(n);
        if (it == spaces.end()) throw InvalidArgument("'" + n + "' is only available as a membership oracle");
        return it->second;
    }
};

inline void put_witness(Record& r, const std::map<std::string, Vector>& w) {
    for (const auto& [k, v] : w) r.witness[k] = vector_str(v);
}
inline void put_verdict(Record& r, const Verdict& v) {
    r.verdict = v.holds ? "true" : "false";
    put_witness(r, v.witness);
    if (!v.holds && !v.note.empty()) r.note = v.note;
}

inline const arch::ArchResult& archimedeanization(Env& env, const std::string& name, const Limits& limits) {
    auto it = env.arch_cache.find(name);
    if (it == env.arch_cache.end()) it = env.arch_cache.emplace(name, arch::archimedeanize(env.space(name), limits)).first;
    return it->second;
}

inline void execute(const Stmt& st, Env& env, const Options& opt, Record& rec) {
    const Limits& lim = opt.limits;
    switch (st.kind) {
        case StmtKind::Space:
            env.declared[st.name] = st.dim;
            rec.object = "Q^" + std::to_string(st.dim);
            return;
        case StmtKind::ConeFormula: {
            OVSpace v(st.dim, *st.formula);
            rec.object = v.positive().str();
            env.spaces[st.name] = v;
            return;
        }
        case StmtKind::ConeHull: {
            OVSpace v = corpus::generated_wedge(st.dim, st.vectors, lim);
            rec.object = v.positive().str();
            env.spaces[st.name] = v;
            return;
        }
        case StmtKind::ConeCorpus: {
            auto item = corpus::corpus_build(st.word, st.args);
            if (auto* v = std::get_if<OVSpace>(&item)) {
                rec.object = v->positive().str();
                env.spaces[st.name] = *v;
            } else {
                rec.object = "membership oracle " + st.word + " in Q^" + std::to_string(st.dim);
                env.oracles[st.name] = std::get<corpus::OracleCone>(item);
            }
            return;
        }
        case StmtKind::Subspace: {
            auto s = Subspace::span(st.dim, st.vectors);
            rec.object = s.str();
            env.subspaces.emplace(st.name, s);
            return;
        }
        case StmtKind::Map: {
            LinearMap m(st.cols, st.vectors.size(), Matrix::from_rows(st.vectors, st.cols));
            rec.object = m.str();
            env.maps.emplace(st.name, m);
            return;
        }
        case StmtKind::Check: {
            const OVSpace& v = env.space(st.name);
            const std::string& p = st.word;
            auto sub = [&]() -> SemilinearSet {
                if (st.refs.empty()) return Subspace::zero(v.dim()).as_set();
                const auto& s = env.subspaces.at(st.refs[0]);
                if (s.ambient() != v.dim()) throw DimensionMismatch("subspace and space dimensions differ");
                return s.as_set();
            };
            if (p == "wedge") put_verdict(rec, is_wedge(v.positive(), lim));
            else if (p == "cone") put_verdict(rec, is_cone(v.positive(), lim));
            else if (p == "generating") put_verdict(rec, is_generating(v.positive(), lim));
            else if (p == "archimedean") put_verdict(rec, is_archimedean(v, lim));
            else if (p == "almost-archimedean") put_verdict(rec, is_almost_archimedean(v, lim));
            else if (p == "riesz") put_verdict(rec, is_riesz(v, opt.lattice_dim_max, lim));
            else if (p == "arch-element") put_verdict(rec, is_archimedean_element(v, *st.point, lim));
            else if (p == "almost-arch-element") put_verdict(rec, is_almost_archimedean_element(v, *st.point, lim));
            else if (p == "order-ideal") put_verdict(rec, is_order_ideal(v, sub(), lim));
            else if (p == "order-convex") put_verdict(rec, is_order_convex(v, sub(), lim));
            else if (p == "uniformly-closed") put_verdict(rec, is_uniformly_closed(v, sub(), lim));
            else if (p == "order-unit") {
                auto r = is_order_unit(v, *st.point, lim);
                using S = OrderUnitResult::Status;
                rec.verdict = r.status == S::Yes ? "true" : r.status == S::No ? "false" : "undecided";
                if (r.witness) rec.witness["x"] = vector_str(*r.witness);
                if (!r.note.empty()) rec.note = r.note;
            }
            return;
        }
        case StmtKind::Compute: {
            const OVSpace& v = env.space(st.name);
            if (st.word == "N") {
                auto inf = infinitesimals(v, lim);
                rec.object = {{"set", inf.set.str()}, {"basis", inf.subspace.str()}};
            } else if (st.word == "D") {
                rec.object = d_wedge(v, lim).str();
            } else {
                SemilinearSet a = st.refs.empty() ? Subspace::zero(v.dim()).as_set() : env.subspaces.at(st.refs[0]).as_set();
                rec.object = uniform_closure_set(v, a, lim).str();
            }
            return;
        }
        case StmtKind::Quotient: {
            const OVSpace& v = env.space(st.name);
            const auto& ideal = env.subspaces.at(st.refs[0]);
            auto [q, qp] = quotient(v, ideal, lim);
            rec.object = {{"dim", q.dim()}, {"positive", q.positive().str()}, {"projection", qp.projection.str()}};
            if (!st.as.empty()) env.spaces[st.as] = q;
            return;
        }
        case StmtKind::Archimedeanize: {
            const auto& r = archimedeanization(env, st.name, lim);
            nlohmann::json steps = nlohmann::json::array();
            for (const auto& s : r.steps)
                steps.push_back({{"index", s.index},
                                 {"ideal", s.ideal.str()},
                                 {"pulled-back", s.pulled_back_ideal.str()},
                                 {"projection", s.map.projection.str()}});
            rec.depth = r.stabilization_depth;
            rec.object = {{"steps", steps},
                          {"composite", r.composite.str()},
                          {"stabilized", r.stabilized.positive().str()},
                          {"final", r.final_space.positive().str()},
                          {"dim", r.final_space.dim()}};
            if (!st.as.empty()) env.spaces[st.as] = r.final_space;
            return;
        }
        case StmtKind::Factor: {
            const auto& phi = env.maps.at(st.name);
            const auto& r = archimedeanization(env, st.refs[0], lim);
            const OVSpace& u = env.space(st.refs[1]);
            auto f = arch::factor_through(r, phi, u, lim);
            rec.object = {{"induced", f.induced.str()}, {"unique", f.unique}, {"composite", r.composite.str()}};
            rec.depth = r.stabilization_depth;
            return;
        }
        case StmtKind::Falsify: {
            corpus::OracleCone o;
            if (auto it = env.oracles.find(st.name); it != env.oracles.end()) o = it->second;
            else o = corpus::as_oracle(env.space(st.name));
            corpus::Property prop;
            if (st.word == "archimedean") prop = corpus::Property::archimedean();
            else if (st.word == "almost-archimedean") prop = corpus::Property::almost_archimedean();
            else if (st.word == "arch-element") prop = corpus::Property::archimedean_element(*st.point);
            else prop = corpus::Property::almost_archimedean_element(*st.point);
            corpus::FalsifyOptions fo;
            fo.budget = opt.sample_budget;
            fo.seed = opt.seed;
            auto ev = corpus::falsify(o, prop, fo);
            if (ev) {
                rec.verdict = "refuted";
                rec.witness["x"] = vector_str(ev->x);
                rec.witness["y"] = vector_str(ev->y);
                rec.object = {{"n-min", ev->n_min}, {"n-max", ev->n_max}, {"pairs-tried", ev->pairs_tried}};
            } else {
                rec.verdict = "not-refuted";
                rec.note = "no counterexample within the sample budget";
            }
            return;
        }
    }
}

}  // namespace detail

/// Executes statements in order. The first error stops the run; the records
/// so far are kept and the exit code reflects the error category.
inline Report run(const Script& script, const Options& opt = {}) {
    Report rep;
    detail::Env env;
    for (const auto& st : script.stmts) {
        Record rec;
        rec.line = st.line;
        rec.kind = detail::kind_name(st.kind);
        rec.command = st.echo;
        rec.name = st.name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            detail::execute(st, env, opt, rec);
        } catch (const Error& e) {
            rec.error_kind = e.kind();
            rec.error = e.what();
            rep.exit_code = exit_code_for(e);
        } catch (const std::exception& e) {
            rec.error_kind = "InternalError";
            rec.error = e.what();
            rep.exit_code = 3;
        }
        if (opt.timing)
            rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                             .count();
        rep.records.push_back(std::move(rec));
        if (rep.exit_code != 0) break;
    }
    return rep;
}

inline nlohmann::json to_json(const Record& r) {
    nlohmann::json j;
    j["line"] = r.line;
    j["kind"] = r.kind;
    j["command"] = r.command;
    j["name"] = r.name;
    if (r.verdict) j["verdict"] = *r.verdict;
    if (!r.witness.empty()) j["witness"] = r.witness;
    if (!r.object.is_null()) j["object"] = r.object;
    if (r.depth) j["depth"] = *r.depth;
    if (r.note) j["note"] = *r.note;
    if (r.error) j["error"] = {{"kind", *r.error_kind}, {"message", *r.error}};
    if (r.millis) j["millis"] = *r.millis;
    return j;
}

inline const char* format_header = "format-version: 1";

/// Header line, then one JSON object per record (keys sorted).
inline std::string render_structured(const Report& rep) {
    std::string out = std::string(format_header) + "\n";
    for (const auto& r : rep.records) out += to_json(r).dump() + "\n";
    return out;
}

namespace detail {
inline void text_value(std::ostringstream& os, const nlohmann::json& v, const std::string& indent) {
    if (v.is_string()) {
        os << v.get<std::string>() << "\n";
    } else if (v.is_object()) {
        os << "\n";
        for (const auto& [k, x] : v.items()) {
            os << indent << k << ": ";
            text_value(os, x, indent + "  ");
        }
    } else if (v.is_array()) {
        os << "\n";
        for (const auto& x : v) {
            os << indent << "- ";
            text_value(os, x, indent + "  ");
        }
    } else {
        os << v.dump() << "\n";
    }
}
}  // namespace detail

inline std::string render_text(const Report& rep) {
    std::ostringstream os;
    os << format_header << "\n";
    for (const auto& r : rep.records) {
        os << r.line << ": " << r.command;
        if (r.verdict) os << "  =>  " << *r.verdict;
        os << "\n";
        for (const auto& [k, v] : r.witness) os << "    witness " << k << " = " << v << "\n";
        if (r.depth) os << "    depth: " << *r.depth << "\n";
        if (!r.object.is_null() && r.kind != "space") {
            os << "    result: ";
            detail::text_value(os, r.object, "      ");
        }
        if (r.note) os << "    note: " << *r.note << "\n";
        if (r.error) os << "    error: " << *r.error << "\n";
        if (r.millis) os << "    millis: " << *r.millis << "\n";
    }
    return os.str();
}

}  // namespace ovs::cli
