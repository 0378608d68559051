#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzlab/classify.hpp"
#include "mzlab/maps.hpp"
#include "mzlab/poly.hpp"
#include "mzlab/span.hpp"

namespace mzlab {

struct ProbeConfig {
    int max_candidate_degree = 3;  // d
    int degree_cap = 40;           // N
    int power_floor = 2;           // m0
    long long budget = 1000000;    // enumeration budget, compared against p^(d+1)
};

struct ProbeReport {
    std::vector<Poly> candidates;  // monic survivors, enumeration order
    long long scanned = 0;
    bool exact = false;  // inherited from the probed subspace
    ProbeConfig cfg;
};

namespace detail {

// Deterministic enumeration of monic nonzero polynomials of degree <= d:
// ascending degree, then ascending little-endian coefficient value.
template <class Fn>
inline void for_each_monic(int p, int max_degree, Fn&& fn) {
    for (int deg = 0; deg <= max_degree; ++deg) {
        std::vector<int> low(static_cast<std::size_t>(deg), 0);
        for (;;) {
            std::vector<int> coeffs = low;
            coeffs.push_back(1);
            fn(Poly::from_coeffs(p, coeffs));
            int i = 0;
            while (i < deg && low[static_cast<std::size_t>(i)] == p - 1) {
                low[static_cast<std::size_t>(i)] = 0;
                ++i;
            }
            if (i == deg) break;
            ++low[static_cast<std::size_t>(i)];
        }
    }
}

}  // namespace detail

// Enumerates monic nonzero g with deg g <= d and keeps those whose powers g^m
// stay in S for every m with m >= m0 and m*deg g <= N. An empty candidate
// list is the desk-scale refutation obligation for radical-zero verdicts (a
// necessary-condition check: truncation means survivors are only candidates).
inline ProbeReport radical_probe(const TruncatedSubspace& S, const ProbeConfig& cfg) {
    const int p = S.p;
    if (cfg.max_candidate_degree < 0 || cfg.power_floor < 1 || cfg.degree_cap < 1)
        throw std::invalid_argument("radical_probe: bad configuration");
    if (cfg.degree_cap < cfg.max_candidate_degree * cfg.power_floor)
        throw std::invalid_argument("radical_probe: N < d*m0 leaves an empty power window");
    double count = std::pow(static_cast<double>(p), cfg.max_candidate_degree + 1);
    if (count > static_cast<double>(cfg.budget))
        throw std::invalid_argument("radical_probe: enumeration budget exceeded");
    if (cfg.degree_cap > S.N)
        throw std::invalid_argument("radical_probe: power window exceeds the subspace cap");

    ProbeReport report;
    report.cfg = cfg;
    report.exact = S.exact;
    detail::for_each_monic(p, cfg.max_candidate_degree, [&](const Poly& g) {
        ++report.scanned;
        const int dg = g.is_zero() ? 0 : g.degree();
        bool survives = true;
        if (dg == 0) {
            // Constant candidates have a single power pattern.
            survives = S.member(g) == Membership::In;
        } else {
            Poly power = poly_pow(g, cfg.power_floor);
            for (int m = cfg.power_floor; m * dg <= cfg.degree_cap; ++m) {
                if (S.member(power) != Membership::In) {
                    survives = false;
                    break;
                }
                power = power * g;
            }
        }
        if (survives) report.candidates.push_back(g);
    });
    return report;
}

struct WitnessCheck {
    bool verified = false;
    int m = 0;           // refuting power, when refuted
    std::string stage;   // "a-membership", "b-nonmembership", or "range"
};

namespace detail {

inline WitnessCheck refuted(int m, std::string stage) {
    WitnessCheck c;
    c.verified = false;
    c.m = m;
    c.stage = std::move(stage);
    return c;
}

inline WitnessCheck verified() {
    WitnessCheck c;
    c.verified = true;
    return c;
}

// Explicit preimage of 1 under I - phi, phi = x + c, inside the ideal.
inline std::optional<Poly> preimage_of_one(const Poly& phi, const IdealSpec& ideal) {
    const int p = phi.p;
    const int c = phi.coeff(0);
    const Poly u = monic(ideal.generator);
    Poly v;
    if (u.degree() == 0) {
        v = scale(Poly::monomial(p, 1), gf_neg(gf_inv(c, p), p));  // delta(-x/c) = 1
    } else if (u.degree() == 1) {
        v = scale(u, gf_neg(gf_inv(c, p), p));  // delta(-(x+a)/c) = 1
    } else {
        // x^{p^t} lies in (x^i) once p^t >= i, and delta(x^{p^t}) = -c^{p^t}
        long long pt = 1;
        while (pt < u.degree()) pt *= p;
        v = scale(Poly::monomial(p, static_cast<int>(pt)),
                  gf_neg(gf_inv(gf_pow(c, pt, p), p), p));
        if (!divides(u, v)) return std::nullopt;
    }
    if (apply_ederivation(phi, v) != Poly::constant(p, 1)) return std::nullopt;
    return v;
}

}  // namespace detail

// Verifies a NotMZ witness: a^m lands in the image and b a^m stays out, for
// every m in the witness range. All a-memberships are checked first, then the
// b-side, both in ascending m; the result does not depend on any other order.
inline WitnessCheck verify_witness(const MapSpec& m, const IdealSpec& ideal, const Witness& w,
                                   const Limits& limits = {},
                                   std::optional<int> window_cap = std::nullopt) {
    if (w.m_lo > w.m_hi) throw std::invalid_argument("verify_witness: empty m range");
    const int p = map_field(m);

    if (w.mode == WitnessMode::TranslationCertificate) {
        auto* e = std::get_if<EDerivation>(&m);
        if (!e) return detail::refuted(w.m_lo, "range");
        const PhiInfo info = classify_phi(e->phi);
        if (info.shape != PhiShape::Translation) return detail::refuted(w.m_lo, "range");
        const Poly* a = std::get_if<Poly>(&w.a);
        const Poly* b = std::get_if<Poly>(&w.b);
        if (!a || !b) return detail::refuted(w.m_lo, "range");
        // a must be a nonzero constant: its powers are constants, all with the
        // same explicit preimage up to scale.
        if (a->is_zero() || !a->is_constant()) return detail::refuted(w.m_lo, "a-membership");
        if (!detail::preimage_of_one(e->phi, ideal))
            return detail::refuted(w.m_lo, "a-membership");
        // b a^m is a nonzero multiple of x^{p-1}; the telescoping sum
        // certificate rules it out of Im(delta) entirely.
        if (b->is_zero() || b->degree() != p - 1 || !slot_component(*b, 0).is_zero() ||
            b->ldegree() != p - 1)
            return detail::refuted(w.m_lo, "b-nonmembership");
        Poly cert = translation_sum_certificate(p, info.c);
        if (cert.is_zero() || !cert.is_constant())
            return detail::refuted(w.m_lo, "b-nonmembership");
        return detail::verified();
    }

    if (w.mode == WitnessMode::ExactDerivation) {
        auto* d = std::get_if<UnivariateDerivation>(&m);
        const Poly* a = std::get_if<Poly>(&w.a);
        const Poly* b = std::get_if<Poly>(&w.b);
        if (!d || d->f.is_zero() || !a || !b) return detail::refuted(w.m_lo, "range");
        Poly power = poly_pow(*a, w.m_lo);
        for (int k = w.m_lo; k <= w.m_hi; ++k) {
            if (!exact_member_derivation(d->f, power))
                return detail::refuted(k, "a-membership");
            if (k < w.m_hi) power = power * *a;
        }
        power = poly_pow(*a, w.m_lo);
        for (int k = w.m_lo; k <= w.m_hi; ++k) {
            if (exact_member_derivation(d->f, *b * power))
                return detail::refuted(k, "b-nonmembership");
            if (k < w.m_hi) power = power * *a;
        }
        return detail::verified();
    }

    // Window mode. Univariate maps go through image_span; triangular ones
    // through the total-degree window span.
    if (auto* t = std::get_if<TriangularDerivation>(&m)) {
        const MultiPoly* a = std::get_if<MultiPoly>(&w.a);
        const MultiPoly* b = std::get_if<MultiPoly>(&w.b);
        if (!a || !b || a->is_zero() || b->is_zero()) return detail::refuted(w.m_lo, "range");
        int need = b->total_degree() + w.m_hi * a->total_degree();
        int cap = window_cap.value_or(need);
        if (cap > limits.degree_cap || need > cap) return detail::refuted(w.m_hi, "range");
        MultiSubspace S = triangular_image_span(*t, cap, limits);
        MultiPoly power = multi_pow(*a, w.m_lo);
        for (int k = w.m_lo; k <= w.m_hi; ++k) {
            if (S.member(power) != Membership::In) return detail::refuted(k, "a-membership");
            if (k < w.m_hi) power = power * *a;
        }
        power = multi_pow(*a, w.m_lo);
        for (int k = w.m_lo; k <= w.m_hi; ++k) {
            if (S.member(*b * power) == Membership::In)
                return detail::refuted(k, "b-nonmembership");
            if (k < w.m_hi) power = power * *a;
        }
        return detail::verified();
    }

    const Poly* a = std::get_if<Poly>(&w.a);
    const Poly* b = std::get_if<Poly>(&w.b);
    if (!a || !b || a->is_zero()) return detail::refuted(w.m_lo, "range");
    int need = (b->is_zero() ? 0 : b->degree()) + w.m_hi * a->degree() + 1;
    int cap = window_cap.value_or(need);
    if (cap > limits.degree_cap || need > cap) return detail::refuted(w.m_hi, "range");
    TruncatedSubspace S = image_span(m, ideal, cap, limits);
    Poly power = poly_pow(*a, w.m_lo);
    for (int k = w.m_lo; k <= w.m_hi; ++k) {
        if (S.member(power) != Membership::In) return detail::refuted(k, "a-membership");
        if (k < w.m_hi) power = power * *a;
    }
    power = poly_pow(*a, w.m_lo);
    for (int k = w.m_lo; k <= w.m_hi; ++k) {
        if (S.member(*b * power) == Membership::In)
            return detail::refuted(k, "b-nonmembership");
        if (k < w.m_hi) power = power * *a;
    }
    return detail::verified();
}

// ---------------------------------------------------------------------------
// Classifier-vs-search agreement sweep.

struct AgreementReport {
    long long configurations = 0;
    long long not_mz = 0;
    long long radical_zero = 0;
    long long mz = 0;
    long long unknown = 0;
    std::vector<std::string> violations;

    bool clean() const { return violations.empty(); }
};

// Sweeps derivations f (all nonzero, deg <= max_f_degree) against the whole
// ring and, when max_gen_degree >= 1, all monic generators of <= 2 slots up to
// that degree. Every NotMZ witness must verify; every radical-zero verdict
// must come back with an empty probe.
inline AgreementReport agreement_suite(const std::vector<int>& p_list, int max_f_degree,
                                       int max_gen_degree, const ProbeConfig& cfg,
                                       const Limits& limits = {}) {
    AgreementReport report;
    for (int p : p_list) {
        FieldSpec fs(p);
        std::vector<IdealSpec> ideals;
        ideals.push_back(IdealSpec::whole_ring(p));
        if (max_gen_degree >= 1) {
            detail::for_each_monic(p, max_gen_degree, [&](const Poly& u) {
                if (u.degree() == 0) return;  // whole ring already in
                if (slot_decompose(u).slots.size() <= 2) ideals.emplace_back(u);
            });
        }
        detail::for_each_monic(p, max_f_degree, [&](const Poly& fm) {
            // enumerate all nonzero f: scale the monic representatives
            for (int s = 1; s < p; ++s) {
                Poly f = scale(fm, s);
                for (const IdealSpec& ideal : ideals) {
                    ++report.configurations;
                    Verdict v = ideal.is_whole_ring() ? classify_image_derivation(f)
                                                      : classify_ideal_derivation(f, ideal);
                    std::ostringstream tag;
                    tag << "p=" << p << " f=" << f.str() << " u=" << ideal.generator.str();
                    switch (v.decision) {
                        case Decision::NotMZ: {
                            ++report.not_mz;
                            WitnessCheck c = verify_witness(UnivariateDerivation{f}, ideal,
                                                            *v.witness, limits);
                            if (!c.verified)
                                report.violations.push_back(tag.str() + ": witness refuted at m=" +
                                                            std::to_string(c.m) + " (" + c.stage +
                                                            ")");
                            break;
                        }
                        case Decision::MZ_RadicalZero: {
                            ++report.radical_zero;
                            TruncatedSubspace S =
                                image_span(UnivariateDerivation{f}, ideal, cfg.degree_cap, limits);
                            ProbeReport pr = radical_probe(S, cfg);
                            if (!pr.candidates.empty())
                                report.violations.push_back(
                                    tag.str() + ": probe found " +
                                    pr.candidates.front().str() + " against a radical-zero verdict");
                            break;
                        }
                        case Decision::MZ:
                            ++report.mz;
                            break;
                        case Decision::Unknown:
                            ++report.unknown;
                            break;
                    }
                }
            }
        });
    }
    return report;
}

}  // namespace mzlab
