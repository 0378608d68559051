#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mzlab/classify.hpp"
#include "mzlab/nilpotency.hpp"
#include "mzlab/oracle.hpp"
#include "mzlab/span.hpp"

namespace mzlab {

// nlohmann::json keeps object keys sorted, so dump() is canonical:
// identical inputs yield identical bytes.
using json = nlohmann::json;

inline json to_json(const Poly& f) {
    json a = json::array();
    for (auto c : f.c) a.push_back(static_cast<int>(c));
    return a;
}

inline json to_json(const MultiPoly& f) {
    json terms = json::array();
    for (auto& [ex, v] : f.terms) {
        json t;
        t["exp"] = ex;
        t["c"] = v;
        terms.push_back(t);
    }
    json j;
    j["vars"] = f.nvars;
    j["terms"] = terms;
    return j;
}

inline json to_json(const PolyValue& v) {
    if (auto* u = std::get_if<Poly>(&v)) return to_json(*u);
    return to_json(std::get<MultiPoly>(v));
}

inline json to_json(const Witness& w) {
    json j;
    j["a"] = to_json(w.a);
    j["b"] = to_json(w.b);
    j["mode"] = mode_name(w.mode);
    j["m_range"] = json::array({w.m_lo, w.m_hi});
    return j;
}

inline json to_json(const Verdict& v) {
    json j;
    j["decision"] = decision_name(v.decision);
    j["citation"] = v.citation;
    if (!v.notes.empty()) j["notes"] = v.notes;
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

inline json to_json(const LnVerdict& v) {
    json j;
    switch (v.status) {
        case LnStatus::LocallyNilpotent:
            j["status"] = "LocallyNilpotent";
            j["index"] = v.index;
            break;
        case LnStatus::NotLocallyNilpotent:
            j["status"] = "NotLocallyNilpotent";
            break;
        case LnStatus::Unknown:
            j["status"] = "Unknown";
            j["cap"] = v.cap;
            break;
    }
    j["citation"] = v.citation;
    if (auto* c = std::get_if<CycleCertificate>(&v.certificate)) {
        j["certificate"] = {{"kind", "cycle"}, {"j", c->j}, {"k", c->k}};
    } else if (auto* cc = std::get_if<CiteCertificate>(&v.certificate)) {
        j["certificate"] = {{"kind", "closed_form"}, {"citation", cc->citation}};
    } else if (auto* ct = std::get_if<ConstantTrackCertificate>(&v.certificate)) {
        j["certificate"] = {{"kind", "constant_track"}, {"citation", ct->citation}};
    }
    return j;
}

inline json to_json(const LfVerdict& v) {
    json j;
    switch (v.status) {
        case LfStatus::LF: j["status"] = "LF"; break;
        case LfStatus::NotLF: j["status"] = "NotLF"; break;
        case LfStatus::Unknown: j["status"] = "Unknown"; break;
    }
    j["citation"] = v.citation;
    return j;
}

inline json to_json(const MonomialTable& t) {
    json rows = json::array();
    for (auto& e : t.entries) {
        json r;
        r["degree"] = e.degree;
        r["k"] = e.k;
        r["i"] = e.i;
        r["member"] = e.member;
        rows.push_back(r);
    }
    json j;
    j["p"] = t.p;
    j["c"] = t.c;
    j["degree_cap"] = t.N;
    j["entries"] = rows;
    j["member_degrees"] = t.member_degrees();
    return j;
}

inline json to_json(const CoefficientTable& t) {
    json j;
    j["p"] = t.p;
    j["i1"] = t.i1;
    j["i2"] = t.i2;
    j["c1"] = t.c1;
    j["c2"] = t.c2;
    j["k_max"] = t.k_max;
    j["rows"] = t.rows;
    return j;
}

inline json to_json(const TruncatedSubspace& s) {
    json rows = json::array();
    for (auto& r : s.basis) {
        json row;
        row["coeffs"] = to_json(r);
        row["pivot"] = r.degree();
        rows.push_back(row);
    }
    json j;
    j["degree_cap"] = s.N;
    j["exact"] = s.exact;
    j["basis"] = rows;
    return j;
}

inline json to_json(const ProbeReport& r) {
    json cands = json::array();
    for (auto& g : r.candidates) cands.push_back(to_json(g));
    json j;
    j["candidates"] = cands;
    j["scanned"] = r.scanned;
    j["exact"] = r.exact;
    j["max_candidate_degree"] = r.cfg.max_candidate_degree;
    j["degree_cap"] = r.cfg.degree_cap;
    j["power_floor"] = r.cfg.power_floor;
    j["note"] = "survivors are candidates only; an empty list corroborates a "
                "radical-zero verdict at this scale";
    return j;
}

inline json to_json(const WitnessCheck& c) {
    json j;
    if (c.verified) {
        j["status"] = "Verified";
    } else {
        j["status"] = "Refuted";
        j["m"] = c.m;
        j["stage"] = c.stage;
    }
    return j;
}

inline json to_json(const Membership& m) {
    json j;
    switch (m) {
        case Membership::In: j["status"] = "In"; break;
        case Membership::Out: j["status"] = "Out"; break;
        case Membership::OutOfRange: j["status"] = "OutOfRange"; break;
    }
    return j;
}

inline json to_json(const AgreementReport& r) {
    json j;
    j["configurations"] = r.configurations;
    j["not_mz"] = r.not_mz;
    j["radical_zero"] = r.radical_zero;
    j["mz"] = r.mz;
    j["unknown"] = r.unknown;
    j["violations"] = r.violations;
    return j;
}

// Text form of a span per the basis dump format: one polynomial per line,
// ascending-coefficient list, pivot degree annotated.
inline std::string basis_dump(const TruncatedSubspace& s) {
    std::string out;
    for (auto& r : s.basis) {
        out += r.str();
        out += " pivot=";
        out += std::to_string(r.degree());
        out += '\n';
    }
    return out;
}

inline std::string format_report(const json& j) { return j.dump(); }

}  // namespace mzlab
