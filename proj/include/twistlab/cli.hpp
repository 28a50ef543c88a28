#pragma once

/**
 * @file cli.hpp
 * @brief JSON command dispatch behind the `twistlab` binary.
 *
 * Every verb takes a JSON object of arguments and returns a JSON object.
 * Numbers that are not partial quotients or matrix entries travel as exact
 * strings ("6912/31", "(1+sqrt(5))/2"); integer lists are JSON integers when
 * they fit in 64 bits and decimal strings otherwise. Both forms are accepted
 * on input.
 */

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "twistlab/contfrac.hpp"
#include "twistlab/dimgroup.hpp"
#include "twistlab/elliptic.hpp"
#include "twistlab/error.hpp"
#include "twistlab/surd.hpp"
#include "twistlab/torus.hpp"

namespace twistlab::cli {

using Json = nlohmann::ordered_json;

struct Options {
    std::size_t iteration_cap = kDefaultIterationCap;
};

/// Reads TWISTLAB_ITER_CAP when set; a malformed value is a usage error.
inline Options options_from_environment() {
    Options opts;
    if (const char* cap = std::getenv("TWISTLAB_ITER_CAP")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(cap, &used);
            if (used != std::string(cap).size()) throw std::invalid_argument("trailing characters");
            opts.iteration_cap = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw Error(ErrorKind::usage, std::string("TWISTLAB_ITER_CAP is not a nonnegative integer: ") + cap);
        }
    }
    return opts;
}

inline const std::vector<std::string>& verbs() {
    static const std::vector<std::string> list{
        "cf.expand",       "cf.value",           "cf.convergents",   "torus.morita",     "torus.iso",
        "torus.invariant", "dimgroup.from-period", "dimgroup.positive", "dimgroup.compare", "curve.j",
        "curve.twist",     "curve.iso",          "curve.twist-between"};
    return list;
}

// ---------------------------------------------------------------------------
// JSON <-> values.

inline Json to_json(const Integer& x) {
    if (fits_int64(x)) return Json(static_cast<std::int64_t>(x));
    return Json(x.str());
}

inline Json to_json(std::span<const Integer> xs) {
    Json out = Json::array();
    for (const auto& x : xs) out.push_back(to_json(x));
    return out;
}

inline Json to_json(const UnimodularWitness& w) {
    return Json::array({Json::array({to_json(w.a()), to_json(w.b())}), Json::array({to_json(w.c()), to_json(w.d())})});
}

inline Json to_json(const IntMatrix& m) {
    Json out = Json::array();
    for (const auto& row : m.rows()) out.push_back(to_json(row));
    return out;
}

inline Json to_json(const EventuallyPeriodicCF& cf) {
    return Json{{"preperiod", to_json(cf.preperiod())}, {"period", to_json(cf.period())}};
}

inline Json to_json(const FiniteCF& cf) { return Json{{"terms", to_json(cf.terms())}}; }

inline Json to_json(const ContinuedFraction& cf) {
    return std::visit([](const auto& c) { return to_json(c); }, cf);
}

inline Json to_json(const K0Element& e) {
    return Json{{"stage", e.stage}, {"vector", to_json(e.vector)}};
}

inline Json to_json(const EllipticCurve& e) { return Json{{"A", to_string(e.a())}, {"B", to_string(e.b())}}; }

namespace detail {

inline const Json& field(const Json& args, const char* key) {
    if (!args.is_object()) throw Error(ErrorKind::usage, "arguments must be a JSON object");
    auto it = args.find(key);
    if (it == args.end()) throw Error(ErrorKind::usage, std::string("missing argument '") + key + "'");
    return *it;
}

inline std::string string_field(const Json& args, const char* key) {
    const Json& v = field(args, key);
    if (!v.is_string()) throw Error(ErrorKind::usage, std::string("argument '") + key + "' must be a string");
    return v.get<std::string>();
}

inline Integer integer_from(const Json& v, const char* what) {
    if (v.is_number_integer()) {
        if (v.is_number_unsigned()) return Integer(v.get<std::uint64_t>());
        return Integer(v.get<std::int64_t>());
    }
    if (v.is_string()) return parse_integer(v.get<std::string>());
    throw Error(ErrorKind::usage, std::string(what) + " must be an integer or an integer string");
}

inline Terms integer_list(const Json& v, const char* what) {
    if (!v.is_array()) throw Error(ErrorKind::usage, std::string(what) + " must be an array");
    Terms out;
    for (const auto& x : v) out.push_back(integer_from(x, what));
    return out;
}

inline Rational rational_field(const Json& args, const char* key) {
    const Json& v = field(args, key);
    if (v.is_number_integer()) return Rational(integer_from(v, key));
    if (!v.is_string()) throw Error(ErrorKind::usage, std::string("argument '") + key + "' must be an exact rational string");
    return parse_rational(v.get<std::string>());
}

inline QuadraticSurd surd_field(const Json& args, const char* key) {
    const Json& v = field(args, key);
    if (v.is_number_integer()) return QuadraticSurd(integer_from(v, key));
    if (!v.is_string()) throw Error(ErrorKind::usage, std::string("argument '") + key + "' must be a surd literal");
    return parse_surd(v.get<std::string>());
}

inline EllipticCurve curve_from(const Json& obj) {
    return EllipticCurve(rational_field(obj, "A"), rational_field(obj, "B"));
}

/// {"theta": literal} | {"terms": [...]} | {"preperiod": [...], "period": [...]} | {"text": "[...]"}
inline ContinuedFraction cf_from(const Json& args) {
    if (args.contains("theta")) return expand(surd_field(args, "theta"));
    if (args.contains("terms")) return FiniteCF(integer_list(args["terms"], "terms"));
    if (args.contains("period")) {
        Terms pre = args.contains("preperiod") ? integer_list(args["preperiod"], "preperiod") : Terms{};
        return EventuallyPeriodicCF(std::move(pre), integer_list(args["period"], "period"));
    }
    if (args.contains("text")) return parse_cf(string_field(args, "text"));
    throw Error(ErrorKind::usage, "expected one of 'theta', 'terms', 'period', 'text'");
}

inline StationaryDimensionGroup group_from(const Json& args) {
    if (args.contains("period")) {
        const Terms period = integer_list(args["period"], "period");
        return StationaryDimensionGroup::from_cf_period(period);
    }
    const Json& phi = field(args, "phi");
    if (!phi.is_array()) throw Error(ErrorKind::usage, "'phi' must be an array of rows");
    std::vector<IntVector> rows;
    for (const auto& row : phi) rows.push_back(integer_list(row, "phi row"));
    return StationaryDimensionGroup::from_matrix(IntMatrix::from_rows(rows));
}

inline K0Element element_from(const StationaryDimensionGroup& g, const Json& obj) {
    std::uint64_t stage = 0;
    if (obj.contains("stage")) {
        const Integer s = integer_from(obj["stage"], "stage");
        if (s < 0 || !fits_int64(s)) throw Error(ErrorKind::usage, "stage must be a nonnegative integer");
        stage = static_cast<std::uint64_t>(s);
    }
    return g.make_element(integer_list(field(obj, "vector"), "vector"), stage);
}

inline Json group_json(const StationaryDimensionGroup& g) {
    Json out{{"phi", to_json(g.phi())}, {"rank", g.rank()}, {"automorphism", g.shift_is_automorphism()}};
    if (g.rank() == 2 && !g.perron_eigenvalue()->is_rational()) out["slope"] = to_string(g.rank2_slope());
    return out;
}

inline Json morita_json(const TorusParameter& t1, const TorusParameter& t2, bool require_sl2) {
    Json out;
    const Terms inv1 = morita_invariant(t1);
    const Terms inv2 = morita_invariant(t2);
    if (require_sl2 && inv1 == inv2) {
        auto r = sl2_witness(t1, t2);
        out["equivalent"] = r.witness.has_value();
        out["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
        out["det"] = r.witness ? Json(1) : Json(nullptr);
        out["invariant"] = to_json(inv1);
        out["improper_witness"] = r.improper ? to_json(*r.improper) : Json(nullptr);
        return out;
    }
    auto w = morita_equivalent(t1, t2);
    out["equivalent"] = w.has_value();
    out["witness"] = w ? to_json(*w) : Json(nullptr);
    out["det"] = w ? Json(w->det()) : Json(nullptr);
    out["invariant"] = to_json(inv1);
    if (!w) out["invariant2"] = to_json(inv2);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------

/// Runs one verb. Throws Error on usage or domain failures.
inline Json run_command(const std::string& verb, const Json& args, const Options& opts = {}) {
    using namespace detail;
    if (!args.is_object()) throw Error(ErrorKind::usage, "arguments must be a JSON object");

    if (verb == "cf.expand") {
        return to_json(expand(surd_field(args, "theta")));
    }
    if (verb == "cf.value") {
        const auto cf = cf_from(args);
        return Json{{"value", to_string(value_of(cf))}, {"text", to_string(cf)}};
    }
    if (verb == "cf.convergents") {
        const auto cf = cf_from(args);
        const Integer count = integer_from(field(args, "count"), "count");
        if (count < 1 || count > 100000) throw Error(ErrorKind::usage, "count must be in [1, 100000]");
        Json list = Json::array();
        for (const auto& c : convergents(cf, static_cast<std::size_t>(count)))
            list.push_back(Json{{"index", c.index}, {"p", c.p.str()}, {"q", c.q.str()}});
        return Json{{"convergents", list}};
    }
    if (verb == "torus.morita") {
        const TorusParameter t1(surd_field(args, "theta1"));
        const TorusParameter t2(surd_field(args, "theta2"));
        const bool sl2 = args.contains("sl2") && args["sl2"].is_boolean() && args["sl2"].get<bool>();
        return morita_json(t1, t2, sl2);
    }
    if (verb == "torus.iso") {
        const TorusParameter t1(surd_field(args, "theta1"));
        const TorusParameter t2(surd_field(args, "theta2"));
        return Json{{"isomorphic", isomorphic(t1, t2)}};
    }
    if (verb == "torus.invariant") {
        return Json{{"invariant", to_json(morita_invariant(TorusParameter(surd_field(args, "theta"))))}};
    }
    if (verb == "dimgroup.from-period") {
        return group_json(StationaryDimensionGroup::from_cf_period(integer_list(field(args, "period"), "period")));
    }
    if (verb == "dimgroup.positive") {
        const auto g = group_from(args);
        const auto e = element_from(g, field(args, "element"));
        std::size_t cap = opts.iteration_cap;
        if (args.contains("cap")) {
            const Integer c = integer_from(args["cap"], "cap");
            if (c < 0 || c > 1000000) throw Error(ErrorKind::usage, "cap must be in [0, 1000000]");
            cap = static_cast<std::size_t>(c);
        }
        return Json{{"verdict", std::string(to_string(g.is_positive(e, cap)))}};
    }
    if (verb == "dimgroup.compare") {
        const auto g = group_from(args);
        const auto e1 = element_from(g, field(args, "e1"));
        const auto e2 = element_from(g, field(args, "e2"));
        const bool equal = g.element_equal(e1, e2);
        std::string order = "equal";
        if (!equal) {
            switch (g.is_positive(g.subtract(e1, e2), opts.iteration_cap)) {
            case Positivity::strictly_positive: order = "greater"; break;
            case Positivity::strictly_negative: order = "less"; break;
            default: order = "undecided"; break;
            }
        }
        return Json{{"equal", equal}, {"order", order}};
    }
    if (verb == "curve.j") {
        return Json{{"j", to_string(j_invariant(curve_from(args)))}};
    }
    if (verb == "curve.twist") {
        const auto e = curve_from(args);
        return to_json(twist(e, TwistParameter(rational_field(args, "t"))));
    }
    if (verb == "curve.iso") {
        const auto e1 = curve_from(field(args, "E1"));
        const auto e2 = curve_from(field(args, "E2"));
        const auto u = q_isomorphism(e1, e2);
        return Json{{"c_isomorphic", c_isomorphic(e1, e2)},
                    {"q_isomorphic", u.has_value()},
                    {"u", u ? Json(to_string(*u)) : Json(nullptr)}};
    }
    if (verb == "curve.twist-between") {
        const auto e1 = curve_from(field(args, "E1"));
        const auto e2 = curve_from(field(args, "E2"));
        const auto t = twist_between(e1, e2);
        return Json{{"t", t ? Json(to_string(t->value())) : Json(nullptr)}};
    }
    throw Error(ErrorKind::usage, "unknown verb '" + verb + "'");
}

/// Usage and parse errors are exit code 1; domain errors are 2.
inline int exit_code_for(ErrorKind kind) {
    return (kind == ErrorKind::usage || kind == ErrorKind::parse) ? 1 : 2;
}

inline Json error_json(const Error& e) {
    return Json{{"message", e.what()}, {"kind", std::string(to_string(e.kind()))}};
}

// ---------------------------------------------------------------------------
// Batches.

struct BatchEntry {
    std::string id;
    std::string verb;
    Json args;
};

/// Validates the whole batch before anything runs. Throws Error(usage) when malformed.
inline std::vector<BatchEntry> parse_batch(const Json& request) {
    if (!request.is_array()) throw Error(ErrorKind::usage, "batch must be a JSON array");
    std::vector<BatchEntry> entries;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < request.size(); ++i) {
        const Json& rec = request[i];
        const std::string where = "batch entry " + std::to_string(i);
        if (!rec.is_object()) throw Error(ErrorKind::usage, where + " is not an object");
        if (!rec.contains("verb") || !rec["verb"].is_string())
            throw Error(ErrorKind::usage, where + " needs a string 'verb'");
        if (!rec.contains("id") || !rec["id"].is_string())
            throw Error(ErrorKind::usage, where + " needs a string 'id'");
        Json args = rec.contains("args") ? rec["args"] : Json::object();
        if (!args.is_object()) throw Error(ErrorKind::usage, where + " has non-object 'args'");
        std::string id = rec["id"].get<std::string>();
        if (!ids.insert(id).second) throw Error(ErrorKind::usage, "duplicate batch id '" + id + "'");
        entries.push_back({std::move(id), rec["verb"].get<std::string>(), std::move(args)});
    }
    return entries;
}

inline Json run_entry(const BatchEntry& entry, const Options& opts) {
    try {
        return Json{{"id", entry.id}, {"status", "ok"}, {"result", run_command(entry.verb, entry.args, opts)}};
    } catch (const Error& e) {
        return Json{{"id", entry.id}, {"status", "error"}, {"message", e.what()},
                    {"kind", std::string(to_string(e.kind()))}};
    } catch (const std::exception& e) {
        return Json{{"id", entry.id}, {"status", "error"}, {"message", e.what()}, {"kind", "internal"}};
    }
}

/// One response per entry, in request order. A failing entry never aborts the batch.
inline Json run_batch(const std::vector<BatchEntry>& entries, bool parallel, const Options& opts = {}) {
    std::vector<Json> results(entries.size());
    if (!parallel || entries.size() < 2) {
        for (std::size_t i = 0; i < entries.size(); ++i) results[i] = run_entry(entries[i], opts);
    } else {
        const std::size_t workers =
            std::min<std::size_t>(entries.size(), std::max(2u, std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < entries.size(); i += workers) results[i] = run_entry(entries[i], opts);
            });
        }
        for (auto& t : pool) t.join();
    }
    Json out = Json::array();
    for (auto& r : results) out.push_back(std::move(r));
    return out;
}

} // namespace twistlab::cli
