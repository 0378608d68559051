// mzlab: classify images of derivations and E-derivations over GF(p) as
// Mathieu-Zhao spaces, with brute-force oracles and machine-checked witnesses.
//
// Exit codes: 0 success, 1 invalid input, 2 budget/cap exceeded (an Unknown
// was produced where a verdict was requested), 3 internal invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mzlab/classify.hpp"
#include "mzlab/oracle.hpp"
#include "mzlab/report.hpp"
#include "mzlab/request.hpp"
#include "mzlab/selftest.hpp"

namespace {

using namespace mzlab;

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Output {
    bool json_mode = true;

    void emit(const json& j, const std::string& text) const {
        if (json_mode)
            std::cout << format_report(j) << '\n';
        else
            std::cout << text;
    }
};

std::string verdict_text(const Verdict& v) {
    std::ostringstream os;
    os << "decision: " << decision_name(v.decision) << "\ncitation: " << v.citation << '\n';
    if (!v.notes.empty()) os << "notes: " << v.notes << '\n';
    if (v.witness) {
        os << "witness mode: " << mode_name(v.witness->mode) << ", m in ["
           << v.witness->m_lo << "," << v.witness->m_hi << "]\n";
        if (auto* a = std::get_if<Poly>(&v.witness->a))
            os << "  a = " << a->str() << "\n  b = " << std::get<Poly>(v.witness->b).str()
               << '\n';
        else
            os << "  a = " << std::get<MultiPoly>(v.witness->a).str()
               << "\n  b = " << std::get<MultiPoly>(v.witness->b).str() << '\n';
    }
    return os.str();
}

int run_request(const Request& r, const Output& out) {
    if (r.command == "classify") {
        if (r.partial) {
            if (r.ideal && !r.ideal->is_whole_ring())
                throw ParseError("ideal", "partial derivations support the whole ring only");
            Verdict v = classify_single_partial_multivariate(r.partial->f, r.partial->i0);
            out.emit(to_json(v), verdict_text(v));
            return v.decision == Decision::Unknown ? 2 : 0;
        }
        if (!r.map) throw ParseError("map", "classify needs a map");
        Verdict v = classify(*r.map, r.ideal);
        out.emit(to_json(v), verdict_text(v));
        return v.decision == Decision::Unknown ? 2 : 0;
    }
    if (r.command == "member" || r.command == "basis") {
        if (!r.map) throw ParseError("map", r.command + " needs a map");
        int N = r.degree_cap.value_or(64);
        IdealSpec ideal = r.ideal ? *r.ideal : IdealSpec::whole_ring(r.p);
        TruncatedSubspace S = image_span(*r.map, ideal, N, r.limits);
        if (r.command == "basis") {
            out.emit(to_json(S), basis_dump(S));
            return 0;
        }
        if (!r.g) throw ParseError("g", "member needs a query polynomial");
        Membership m = S.member(*r.g);
        json j = to_json(m);
        j["exact"] = S.exact;
        out.emit(j, std::string("status: ") +
                        (m == Membership::In ? "In"
                                             : m == Membership::Out ? "Out" : "OutOfRange") +
                        (S.exact ? " (exact span)\n" : " (window span)\n"));
        return m == Membership::OutOfRange ? 2 : 0;
    }
    if (r.command == "ln") {
        if (!r.map) throw ParseError("map", "ln needs a map");
        LnVerdict v;
        if (auto* d = std::get_if<UnivariateDerivation>(&*r.map)) {
            v = is_ln_derivation(d->f, r.limits.iteration_cap);
        } else if (auto* e = std::get_if<EDerivation>(&*r.map)) {
            v = is_ln_ederivation(e->phi);
        } else {
            throw ParseError("map.kind", "ln supports univariate maps only");
        }
        out.emit(to_json(v), format_report(to_json(v)) + "\n");
        return v.status == LnStatus::Unknown ? 2 : 0;
    }
    if (r.command == "lf") {
        if (!r.map) throw ParseError("map", "lf needs a map");
        LfVerdict v = is_locally_finite(*r.map, r.limits.iteration_cap);
        out.emit(to_json(v), format_report(to_json(v)) + "\n");
        return v.status == LfStatus::Unknown ? 2 : 0;
    }
    if (r.command == "table-thm25") {
        if (r.c == 0) throw ParseError("c", "table-thm25 needs a nonzero c");
        int N = r.degree_cap.value_or(r.p * r.p + r.p);
        MonomialTable t = ederivation_monomial_table(r.p, r.c, N);
        std::ostringstream os;
        os << "members (degrees): ";
        for (int d : t.member_degrees()) os << d << ' ';
        os << '\n';
        out.emit(to_json(t), os.str());
        return 0;
    }
    if (r.command == "table-lemma37") {
        CoefficientTable t =
            coeff_table(r.p, r.table_i1, r.table_i2, r.table_c1, r.table_c2, r.table_k_max);
        out.emit(to_json(t), t.to_csv());
        return 0;
    }
    if (r.command == "oracle-radical") {
        if (!r.map) throw ParseError("map", "oracle-radical needs a map");
        IdealSpec ideal = r.ideal ? *r.ideal : IdealSpec::whole_ring(r.p);
        ProbeConfig cfg = r.probe;
        cfg.budget = r.limits.probe_budget;
        TruncatedSubspace S = image_span(*r.map, ideal, cfg.degree_cap, r.limits);
        ProbeReport pr = radical_probe(S, cfg);
        std::ostringstream os;
        os << pr.candidates.size() << " candidate(s) of " << pr.scanned << " scanned\n";
        for (auto& g : pr.candidates) os << "  " << g.str() << '\n';
        out.emit(to_json(pr), os.str());
        return 0;
    }
    if (r.command == "oracle-witness") {
        if (!r.map) throw ParseError("map", "oracle-witness needs a map");
        if (!r.witness) throw ParseError("witness", "oracle-witness needs a witness");
        IdealSpec ideal = r.ideal ? *r.ideal : IdealSpec::whole_ring(r.p);
        WitnessCheck c = verify_witness(*r.map, ideal, *r.witness, r.limits);
        out.emit(to_json(c), format_report(to_json(c)) + "\n");
        return 0;
    }
    if (r.command == "selftest") {
        auto results = selftest::run_all(&std::cerr);
        json j = json::array();
        for (auto& res : results)
            j.push_back({{"id", res.id},
                         {"pass", res.pass},
                         {"seconds", res.seconds},
                         {"detail", res.detail}});
        out.emit(j, "");
        return selftest::all_pass(results) ? 0 : 3;
    }
    throw ParseError("command", "unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mathieu-Zhao space classifier over GF(p)"};
    app.require_subcommand(0, 1);

    std::string input_path;
    bool json_mode = false;
    std::optional<int> max_degree;
    std::optional<int> iteration_cap;
    std::optional<int> probe_degree;
    std::optional<int> probe_power_floor;

    app.add_option("--input", input_path, "request JSON file ('-' for stdin)");
    app.add_flag("--json", json_mode, "emit canonical JSON reports");
    app.add_option("--max-degree", max_degree, "span degree cap override");
    app.add_option("--iteration-cap", iteration_cap, "orbit iteration cap");
    app.add_option("--probe-degree", probe_degree, "radical probe candidate degree");
    app.add_option("--probe-power-floor", probe_power_floor, "radical probe power floor");

    std::vector<std::string> names = {"classify",      "member",        "basis",
                                      "ln",            "lf",            "table-thm25",
                                      "table-lemma37", "oracle-radical", "oracle-witness",
                                      "selftest"};
    for (auto& n : names) app.add_subcommand(n, "")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    std::string sub;
    for (auto* s : app.get_subcommands()) sub = s->get_name();

    try {
        mzlab::Request req;
        if (sub == "selftest" && input_path.empty()) {
            req.p = 2;  // unused
            req.command = "selftest";
        } else {
            req = mzlab::parse_request(slurp(input_path));
            if (!sub.empty() && req.command != sub)
                throw mzlab::ParseError("command", "request command '" + req.command +
                                                       "' does not match subcommand '" + sub +
                                                       "'");
        }
        if (long long budget = std::getenv("MZLAB_BUDGET") ? std::atoll(std::getenv("MZLAB_BUDGET")) : 0)
            req.limits.probe_budget = budget;
        if (max_degree) {
            if (*max_degree < 1 || *max_degree > req.limits.degree_cap)
                throw mzlab::ParseError("--max-degree", "out of range");
            req.degree_cap = *max_degree;
            req.probe.degree_cap = *max_degree;
        }
        if (iteration_cap) req.limits.iteration_cap = *iteration_cap;
        if (probe_degree) req.probe.max_candidate_degree = *probe_degree;
        if (probe_power_floor) req.probe.power_floor = *probe_power_floor;

        Output out;
        out.json_mode = json_mode;
        return run_request(req, out);
    } catch (const mzlab::ParseError& e) {
        mzlab::json err;
        err["error"] = {{"field", e.field}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 1;
    } catch (const mzlab::CapError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        // invariant violations on malformed configurations
        mzlab::json err;
        err["error"] = {{"field", ""}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        std::string msg = e.what();
        if (msg.find("budget") != std::string::npos || msg.find("cap") != std::string::npos)
            return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
