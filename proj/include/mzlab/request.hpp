#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "mzlab/classify.hpp"
#include "mzlab/maps.hpp"
#include "mzlab/oracle.hpp"
#include "mzlab/report.hpp"
#include "mzlab/span.hpp"

namespace mzlab {

// Structured parse failure with the offending field path.
struct ParseError : std::runtime_error {
    std::string field;

    ParseError(std::string field_, const std::string& message)
        : std::runtime_error(message), field(std::move(field_)) {}
};

// Budget/cap violation: the CLI maps it to its own exit code.
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// D = f(x_1,...,x_n) d/dx_{i0}: not a MapSpec kind (its classifier has its
// own signature), parsed from map kind "partial".
struct PartialMap {
    MultiPoly f;
    int i0 = 1;
};

struct Request {
    int p = 0;
    std::string command;
    std::optional<MapSpec> map;
    std::optional<PartialMap> partial;
    std::optional<IdealSpec> ideal;
    std::optional<Poly> g;        // member queries
    std::optional<Witness> witness;
    int c = 0;                    // table-thm25
    int table_i1 = 0, table_i2 = 0, table_c1 = 0, table_c2 = 0, table_k_max = 8;
    Limits limits;
    ProbeConfig probe;
    std::optional<int> degree_cap;  // span/table cap override
};

namespace detail {

inline const std::set<std::string>& known_commands() {
    static const std::set<std::string> cmds = {
        "classify", "member", "basis", "ln", "lf", "table-thm25",
        "table-lemma37", "oracle-radical", "oracle-witness", "selftest"};
    return cmds;
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParseError(where.empty() ? it.key() : where + "." + it.key(),
                             "unknown field");
}

inline int require_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where, "missing field");
    if (!obj[key].is_number_integer()) throw ParseError(where, "expected an integer");
    return obj[key].get<int>();
}

inline std::vector<int> coeff_list(const json& arr, int p, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where, "expected an ascending coefficient array");
    std::vector<int> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& v = arr[i];
        if (!v.is_number_integer())
            throw ParseError(where + "[" + std::to_string(i) + "]", "expected an integer");
        int x = v.get<int>();
        if (x < 0 || x >= p)
            throw ParseError(where + "[" + std::to_string(i) + "]",
                             "coefficient out of range [0, p)");
        out.push_back(x);
    }
    return out;
}

inline Poly parse_poly(const json& arr, int p, const std::string& where) {
    return Poly::from_coeffs(p, coeff_list(arr, p, where));
}

inline MultiPoly parse_multipoly(const json& obj, int p, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected a multivariate polynomial object");
    reject_unknown_keys(obj, {"vars", "terms"}, where);
    int nvars = require_int(obj, "vars", where + ".vars");
    MultiPoly f = MultiPoly::zero(p, nvars);
    if (!obj.contains("terms") || !obj["terms"].is_array())
        throw ParseError(where + ".terms", "expected a term array");
    for (std::size_t i = 0; i < obj["terms"].size(); ++i) {
        const json& t = obj["terms"][i];
        std::string tw = where + ".terms[" + std::to_string(i) + "]";
        if (!t.is_object()) throw ParseError(tw, "expected a term object");
        reject_unknown_keys(t, {"exp", "c"}, tw);
        if (!t.contains("exp") || !t["exp"].is_array())
            throw ParseError(tw + ".exp", "expected an exponent array");
        std::vector<int> ex;
        for (auto& e : t["exp"]) {
            if (!e.is_number_integer() || e.get<int>() < 0)
                throw ParseError(tw + ".exp", "exponents must be nonnegative integers");
            ex.push_back(e.get<int>());
        }
        int cv = require_int(t, "c", tw + ".c");
        if (cv < 0 || cv >= p) throw ParseError(tw + ".c", "coefficient out of range [0, p)");
        if (static_cast<int>(ex.size()) != nvars)
            throw ParseError(tw + ".exp", "exponent vector length mismatch");
        f.set(ex, gf_add(f.coeff(ex), cv, p));
    }
    return f;
}

inline MapSpec parse_map(const json& obj, int p) {
    if (!obj.is_object()) throw ParseError("map", "expected an object");
    if (!obj.contains("kind") || !obj["kind"].is_string())
        throw ParseError("map.kind", "missing map kind");
    std::string kind = obj["kind"].get<std::string>();
    if (kind == "derivation") {
        reject_unknown_keys(obj, {"kind", "f"}, "map");
        if (!obj.contains("f")) throw ParseError("map.f", "missing field");
        return UnivariateDerivation{parse_poly(obj["f"], p, "map.f")};
    }
    if (kind == "ederivation") {
        reject_unknown_keys(obj, {"kind", "phi"}, "map");
        if (!obj.contains("phi")) throw ParseError("map.phi", "missing field");
        return EDerivation{parse_poly(obj["phi"], p, "map.phi")};
    }
    if (kind == "triangular") {
        reject_unknown_keys(obj, {"kind", "vars", "fs"}, "map");
        int nvars = require_int(obj, "vars", "map.vars");
        if (!obj.contains("fs") || !obj["fs"].is_array())
            throw ParseError("map.fs", "expected a coefficient list");
        std::vector<MultiPoly> fs;
        for (std::size_t i = 0; i < obj["fs"].size(); ++i)
            fs.push_back(parse_multipoly(obj["fs"][i], p,
                                         "map.fs[" + std::to_string(i) + "]"));
        try {
            return TriangularDerivation(nvars, std::move(fs));
        } catch (const std::invalid_argument& e) {
            throw ParseError("map.fs", e.what());
        }
    }
    throw ParseError("map.kind", "unknown map kind '" + kind + "'");
}

inline PartialMap parse_partial(const json& obj, int p) {
    reject_unknown_keys(obj, {"kind", "f", "i0"}, "map");
    if (!obj.contains("f")) throw ParseError("map.f", "missing field");
    PartialMap m{parse_multipoly(obj["f"], p, "map.f"), require_int(obj, "i0", "map.i0")};
    if (m.i0 < 1 || m.i0 > m.f.nvars)
        throw ParseError("map.i0", "variable index out of range");
    return m;
}

}  // namespace detail

inline Request parse_request(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "request must be a JSON object");

    detail::reject_unknown_keys(
        doc,
        {"p", "command", "map", "ideal", "g", "witness", "c", "table", "caps"},
        "");

    Request r;
    r.p = detail::require_int(doc, "p", "p");
    if (!is_prime(r.p)) throw ParseError("p", "p not prime");
    if (r.p > kMaxPrime) throw ParseError("p", "p exceeds the supported cap");

    if (!doc.contains("command") || !doc["command"].is_string())
        throw ParseError("command", "missing command");
    r.command = doc["command"].get<std::string>();
    if (!detail::known_commands().count(r.command))
        throw ParseError("command", "unknown command '" + r.command + "'");

    if (doc.contains("caps")) {
        const json& caps = doc["caps"];
        if (!caps.is_object()) throw ParseError("caps", "expected an object");
        detail::reject_unknown_keys(
            caps, {"degree_cap", "iteration_cap", "probe_degree", "probe_power_floor"}, "caps");
        if (caps.contains("degree_cap")) {
            int n = detail::require_int(caps, "degree_cap", "caps.degree_cap");
            if (n < 1) throw ParseError("caps.degree_cap", "must be >= 1");
            if (n > r.limits.degree_cap)
                throw ParseError("caps.degree_cap", "exceeds the global cap");
            r.degree_cap = n;
            r.probe.degree_cap = n;
        }
        if (caps.contains("iteration_cap")) {
            int n = detail::require_int(caps, "iteration_cap", "caps.iteration_cap");
            if (n < 1 || n > 100000) throw ParseError("caps.iteration_cap", "out of range");
            r.limits.iteration_cap = n;
        }
        if (caps.contains("probe_degree")) {
            int n = detail::require_int(caps, "probe_degree", "caps.probe_degree");
            if (n < 0) throw ParseError("caps.probe_degree", "must be >= 0");
            r.probe.max_candidate_degree = n;
        }
        if (caps.contains("probe_power_floor")) {
            int n = detail::require_int(caps, "probe_power_floor", "caps.probe_power_floor");
            if (n < 1) throw ParseError("caps.probe_power_floor", "must be >= 1");
            r.probe.power_floor = n;
        }
    }

    if (doc.contains("map")) {
        const json& m = doc["map"];
        if (m.is_object() && m.contains("kind") && m["kind"].is_string() &&
            m["kind"].get<std::string>() == "partial")
            r.partial = detail::parse_partial(m, r.p);
        else
            r.map = detail::parse_map(m, r.p);
    }

    if (doc.contains("ideal")) {
        const json& ideal = doc["ideal"];
        if (!ideal.is_object()) throw ParseError("ideal", "expected an object");
        detail::reject_unknown_keys(ideal, {"generator"}, "ideal");
        if (!ideal.contains("generator")) throw ParseError("ideal.generator", "missing field");
        Poly gen = detail::parse_poly(ideal["generator"], r.p, "ideal.generator");
        if (gen.is_zero()) throw ParseError("ideal.generator", "generator must be nonzero");
        r.ideal = IdealSpec(std::move(gen));
    }

    if (doc.contains("g")) r.g = detail::parse_poly(doc["g"], r.p, "g");

    if (doc.contains("c")) {
        r.c = detail::require_int(doc, "c", "c");
        if (r.c < 0 || r.c >= r.p) throw ParseError("c", "residue out of range [0, p)");
    }

    if (doc.contains("table")) {
        const json& t = doc["table"];
        if (!t.is_object()) throw ParseError("table", "expected an object");
        detail::reject_unknown_keys(t, {"i1", "i2", "c1", "c2", "k_max"}, "table");
        r.table_i1 = detail::require_int(t, "i1", "table.i1");
        r.table_i2 = detail::require_int(t, "i2", "table.i2");
        r.table_c1 = detail::require_int(t, "c1", "table.c1");
        r.table_c2 = detail::require_int(t, "c2", "table.c2");
        if (t.contains("k_max")) r.table_k_max = detail::require_int(t, "k_max", "table.k_max");
        if (r.table_k_max < 0 || r.table_k_max > 64)
            throw ParseError("table.k_max", "out of range [0, 64]");
    }

    if (doc.contains("witness")) {
        const json& w = doc["witness"];
        if (!w.is_object()) throw ParseError("witness", "expected an object");
        detail::reject_unknown_keys(w, {"a", "b", "mode", "m_range"}, "witness");
        Witness wit;
        if (!w.contains("a") || !w.contains("b"))
            throw ParseError("witness", "witness needs both a and b");
        if (w["a"].is_array()) {
            wit.a = detail::parse_poly(w["a"], r.p, "witness.a");
            wit.b = detail::parse_poly(w["b"], r.p, "witness.b");
        } else {
            wit.a = detail::parse_multipoly(w["a"], r.p, "witness.a");
            wit.b = detail::parse_multipoly(w["b"], r.p, "witness.b");
        }
        if (!w.contains("mode") || !w["mode"].is_string())
            throw ParseError("witness.mode", "missing mode");
        std::string mode = w["mode"].get<std::string>();
        if (mode == "exact_derivation")
            wit.mode = WitnessMode::ExactDerivation;
        else if (mode == "window")
            wit.mode = WitnessMode::Window;
        else if (mode == "translation_certificate")
            wit.mode = WitnessMode::TranslationCertificate;
        else
            throw ParseError("witness.mode", "unknown mode '" + mode + "'");
        if (w.contains("m_range")) {
            if (!w["m_range"].is_array() || w["m_range"].size() != 2)
                throw ParseError("witness.m_range", "expected [lo, hi]");
            wit.m_lo = w["m_range"][0].get<int>();
            wit.m_hi = w["m_range"][1].get<int>();
            if (wit.m_lo < 1 || wit.m_hi < wit.m_lo)
                throw ParseError("witness.m_range", "range must satisfy 1 <= lo <= hi");
        }
        r.witness = std::move(wit);
    }

    return r;
}

// Canonical JSON echo of a request; parse_request(echo_request(r)) == r on
// every valid request.
inline json echo_request(const Request& r) {
    json j;
    j["p"] = r.p;
    j["command"] = r.command;
    if (r.map) {
        json m;
        if (auto* d = std::get_if<UnivariateDerivation>(&*r.map)) {
            m["kind"] = "derivation";
            m["f"] = to_json(d->f);
        } else if (auto* e = std::get_if<EDerivation>(&*r.map)) {
            m["kind"] = "ederivation";
            m["phi"] = to_json(e->phi);
        } else {
            auto& t = std::get<TriangularDerivation>(*r.map);
            m["kind"] = "triangular";
            m["vars"] = t.nvars;
            json fs = json::array();
            for (auto& f : t.fs) fs.push_back(to_json(f));
            m["fs"] = fs;
        }
        j["map"] = m;
    }
    if (r.partial) {
        json m;
        m["kind"] = "partial";
        m["f"] = to_json(r.partial->f);
        m["i0"] = r.partial->i0;
        j["map"] = m;
    }
    if (r.ideal) j["ideal"] = {{"generator", to_json(r.ideal->generator)}};
    if (r.g) j["g"] = to_json(*r.g);
    if (r.command == "table-thm25") j["c"] = r.c;
    if (r.command == "table-lemma37")
        j["table"] = {{"i1", r.table_i1}, {"i2", r.table_i2}, {"c1", r.table_c1},
                      {"c2", r.table_c2}, {"k_max", r.table_k_max}};
    if (r.witness) j["witness"] = to_json(*r.witness);
    json caps;
    Request defaults;
    if (r.degree_cap) caps["degree_cap"] = *r.degree_cap;
    if (r.limits.iteration_cap != defaults.limits.iteration_cap)
        caps["iteration_cap"] = r.limits.iteration_cap;
    if (r.probe.max_candidate_degree != defaults.probe.max_candidate_degree)
        caps["probe_degree"] = r.probe.max_candidate_degree;
    if (r.probe.power_floor != defaults.probe.power_floor)
        caps["probe_power_floor"] = r.probe.power_floor;
    if (!caps.empty()) j["caps"] = caps;
    return j;
}

}  // namespace mzlab
