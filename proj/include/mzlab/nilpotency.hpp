#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mzlab/maps.hpp"
#include "mzlab/poly.hpp"

namespace mzlab {

enum class LnStatus { LocallyNilpotent, NotLocallyNilpotent, Unknown };

// Certificates for a NotLocallyNilpotent verdict.
struct CiteCertificate {
    std::string citation;  // closed-form branch deciding the orbit
};
struct CycleCertificate {
    int j = 0;  // D^j(x) == D^k(x) != 0 with j < k
    int k = 0;
};
struct ConstantTrackCertificate {
    std::string citation;  // tracked corner coefficient stays a unit
};
using LnCertificate = std::variant<std::monostate, CiteCertificate, CycleCertificate,
                                   ConstantTrackCertificate>;

struct LnVerdict {
    LnStatus status = LnStatus::Unknown;
    int index = 0;  // LocallyNilpotent: a verified k with D^k(x) = 0
    int cap = 0;    // Unknown: the iteration cap that was exhausted
    std::string citation;
    LnCertificate certificate;
};

namespace detail {

// Every LocallyNilpotent verdict re-verifies its index before returning: find
// the least k <= bound with map^k(x) = 0.
inline LnVerdict make_ln(const MapSpec& m, int bound, std::string citation) {
    const int p = map_field(m);
    Poly v = Poly::monomial(p, 1);
    for (int k = 0; k <= bound; ++k) {
        if (v.is_zero()) {
            LnVerdict out;
            out.status = LnStatus::LocallyNilpotent;
            out.index = k;
            out.citation = std::move(citation);
            return out;
        }
        v = apply_map(m, v);
    }
    throw std::logic_error("make_ln: claimed nilpotency bound " + std::to_string(bound) +
                           " failed verification");
}

inline LnVerdict make_not_ln(std::string citation, LnCertificate cert) {
    LnVerdict out;
    out.status = LnStatus::NotLocallyNilpotent;
    out.citation = std::move(citation);
    out.certificate = std::move(cert);
    return out;
}

inline LnVerdict make_cycle(const MapSpec& m, int j, int k, std::string citation) {
    const int p = map_field(m);
    Poly a = iterate_map(m, Poly::monomial(p, 1), j);
    Poly b = iterate_map(m, Poly::monomial(p, 1), k);
    if (a != b || a.is_zero())
        throw std::logic_error("cycle certificate failed replay");
    return make_not_ln(std::move(citation), CycleCertificate{j, k});
}

}  // namespace detail

// Least positive N with N = 1 mod (r-1) and N = 0 mod p. Exists because
// gcd(r-1, p) = 1 for r in [2, p-1].
inline int crt_min_solution(int p, int r) {
    for (int n = p;; n += p)
        if ((r == 2) || (n % (r - 1) == 1)) return n;
}

// Uniform bound J with D^J(x) = 0 for D = x^r f1(x^p) d/dx, r in {0,2,..,p-1}.
inline int nilpotency_bound(int p, int r) {
    FieldSpec fs(p);
    r = gf_norm(r, p);
    if (r % p == 1) throw std::invalid_argument("nilpotency_bound: r = 1 mod p is not nilpotent");
    if (r == 0) return 2;
    int best = 0;
    for (int rp = 2; rp <= p - 1; ++rp) best = std::max(best, crt_min_solution(p, rp));
    return best + 1;
}

// Locally nilpotent test for D = f d/dx. Dispatch: single slot, then the
// p = 2 / p = 3 classifications, then the two-slot unit-track case, then a
// bounded orbit search with cycle detection.
inline LnVerdict is_ln_derivation(const Poly& f, int iteration_cap = 64) {
    if (f.is_zero()) throw std::invalid_argument("is_ln_derivation: f must be nonzero");
    if (iteration_cap < 1) throw std::invalid_argument("is_ln_derivation: cap must be >= 1");
    const int p = f.p;
    const MapSpec m = UnivariateDerivation{f};
    const SlotDecomposition sd = slot_decompose(f);

    if (sd.single_slot()) {
        int r = sd.slots[0].first;
        if (r == 1)
            return detail::make_not_ln("Proposition 3.1",
                                       CiteCertificate{"Proposition 3.1"});
        return detail::make_ln(m, nilpotency_bound(p, r), "Proposition 3.1");
    }

    if (p == 2)  // both slots present
        return detail::make_not_ln("Theorem 3.4", CiteCertificate{"Theorem 3.4"});

    if (p == 3) {
        if (sd.slots.size() == 2)
            return detail::make_not_ln("Theorem 3.6", CiteCertificate{"Theorem 3.6"});
        // all three slots present: locally nilpotent iff f2 f0 = f1^2
        const Poly& f0 = *sd.slot(0);
        const Poly& f1 = *sd.slot(1);
        const Poly& f2 = *sd.slot(2);
        if (f2 * f0 == f1 * f1) return detail::make_ln(m, 3, "Theorem 3.6");
        return detail::make_not_ln("Theorem 3.6", CiteCertificate{"Theorem 3.6"});
    }

    if (sd.slots.size() == 2 && (sd.has_slot(1)))
        return detail::make_not_ln("Proposition 3.8",
                                   ConstantTrackCertificate{"Proposition 3.8"});

    // Bounded orbit of x with cycle detection.
    Poly v = Poly::monomial(p, 1);
    std::map<Poly, int> seen;
    seen[v] = 0;
    for (int k = 1; k <= iteration_cap; ++k) {
        v = apply_map(m, v);
        if (v.is_zero()) return detail::make_ln(m, k, "iteration");
        auto it = seen.find(v);
        if (it != seen.end()) return detail::make_cycle(m, it->second, k, "iteration");
        seen[v] = k;
    }
    LnVerdict out;
    out.status = LnStatus::Unknown;
    out.cap = iteration_cap;
    out.citation = "iteration cap";
    return out;
}

// delta = I - phi is locally nilpotent exactly when phi = x + c (then the
// operator identity (I - phi)^p = I - phi^p = 0 applies).
inline LnVerdict is_ln_ederivation(const Poly& phi) {
    const int p = phi.p;
    const MapSpec m = EDerivation{phi};
    const PhiInfo info = classify_phi(phi);
    switch (info.shape) {
        case PhiShape::Identity:
        case PhiShape::Translation:
            return detail::make_ln(m, p, "Corollary 2.6");
        case PhiShape::Constant:
            // delta^k(x) = x - c for every k >= 1.
            return detail::make_cycle(m, 1, 2, "Corollary 2.6");
        case PhiShape::Affine: {
            // The orbit of x stays affine; a repeat occurs within p^2 steps.
            Poly v = Poly::monomial(p, 1);
            std::map<Poly, int> seen;
            seen[v] = 0;
            for (int k = 1; k <= p * p + 1; ++k) {
                v = apply_map(m, v);
                if (v.is_zero()) throw std::logic_error("affine e-derivation reached 0");
                auto it = seen.find(v);
                if (it != seen.end())
                    return detail::make_cycle(m, it->second, k, "Corollary 2.6");
                seen[v] = k;
            }
            throw std::logic_error("affine e-derivation orbit did not repeat");
        }
        case PhiShape::Higher:
            // deg delta^k(x) = (deg phi)^k grows strictly.
            return detail::make_not_ln("Corollary 2.6", CiteCertificate{"Corollary 2.6"});
    }
    throw std::logic_error("is_ln_ederivation: unreachable");
}

enum class LfStatus { LF, NotLF, Unknown };

struct LfVerdict {
    LfStatus status = LfStatus::Unknown;
    std::string citation;
};

// Locally finite test for the cases the theory settles. E-derivations: LF iff
// phi is affine. Derivations: slot-1 coefficient structure, or any LN verdict.
inline LfVerdict is_locally_finite(const MapSpec& m, int iteration_cap = 64) {
    if (auto* e = std::get_if<EDerivation>(&m)) {
        bool affine = e->phi.is_zero() || e->phi.degree() <= 1;
        return {affine ? LfStatus::LF : LfStatus::NotLF, "Remark 2.7"};
    }
    auto* d = std::get_if<UnivariateDerivation>(&m);
    if (!d) throw std::invalid_argument("is_locally_finite: univariate maps only");
    if (d->f.is_zero()) return {LfStatus::LF, "trivial image"};
    const SlotDecomposition sd = slot_decompose(d->f);
    if (sd.single_slot() && sd.slots[0].first == 1) {
        bool constant = sd.slots[0].second.is_constant();
        return {constant ? LfStatus::LF : LfStatus::NotLF, "Remark 3.3"};
    }
    LnVerdict ln = is_ln_derivation(d->f, iteration_cap);
    if (ln.status == LnStatus::LocallyNilpotent) return {LfStatus::LF, ln.citation};
    return {LfStatus::Unknown, "no covering branch"};
}

// Coefficient table of the two-slot orbit recurrence: row k holds
// a_{k,1..k+2}, the coefficients of D^{k+1}(x) on the monomial ladder
// x^{(k-j+2) i1 + (j-1) i2 - k} f_{i1}^{k-j+2} f_{i2}^{j-1}.
struct CoefficientTable {
    int p = 0;
    int i1 = 0, i2 = 0;
    int c1 = 0, c2 = 0;
    int k_max = 0;
    std::vector<std::vector<int>> rows;  // rows[k] has k+2 entries, j = 1..k+2

    // Integer ladder exponent of entry (k, j); negative only when the entry is 0.
    static long long ladder_exponent(int k, int j, int i1, int i2) {
        return static_cast<long long>(k - j + 2) * i1 + static_cast<long long>(j - 1) * i2 - k;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "k";
        for (int j = 1; j <= k_max + 2; ++j) os << ",a_" << j;
        os << '\n';
        for (int k = 0; k <= k_max; ++k) {
            os << k;
            for (int j = 1; j <= k_max + 2; ++j)
                os << ',' << (j <= k + 2 ? std::to_string(rows[static_cast<std::size_t>(k)]
                                                              [static_cast<std::size_t>(j - 1)])
                                         : std::string());
            os << '\n';
        }
        return os.str();
    }
};

inline CoefficientTable coeff_table(int p, int i1, int i2, int c1, int c2, int k_max) {
    FieldSpec fs(p);
    i1 = gf_norm(i1, p);
    i2 = gf_norm(i2, p);
    c1 = gf_norm(c1, p);
    c2 = gf_norm(c2, p);
    if (i1 == i2) throw std::invalid_argument("coeff_table: i1 and i2 must differ");
    if (c1 == 0 || c2 == 0) throw std::invalid_argument("coeff_table: c1, c2 must be nonzero");
    if (k_max < 0) throw std::invalid_argument("coeff_table: k_max must be >= 0");
    CoefficientTable t;
    t.p = p;
    t.i1 = i1;
    t.i2 = i2;
    t.c1 = c1;
    t.c2 = c2;
    t.k_max = k_max;
    t.rows.push_back({c1, c2});
    // One application of D sends the ladder entry (l, j) into (l+1, j) with
    // branch factor c1 (the f_{i1} direction) and into (l+1, j+1) with branch
    // factor c2; each branch also picks up the integer ladder exponent. The
    // scale factors matter as soon as c1 or c2 is not 1.
    for (int l = 0; l < k_max; ++l) {
        const auto& prev = t.rows.back();
        std::vector<int> row(static_cast<std::size_t>(l) + 3, 0);
        for (int j = 1; j <= l + 3; ++j) {
            long long e_same = CoefficientTable::ladder_exponent(l, j, i1, i2);
            long long e_prev = CoefficientTable::ladder_exponent(l, j - 1, i1, i2);
            int a_same = (j <= l + 2) ? prev[static_cast<std::size_t>(j - 1)] : 0;
            int a_prev = (j >= 2) ? prev[static_cast<std::size_t>(j - 2)] : 0;
            int value = gf_add(gf_mul(gf_mul(gf_norm(e_same, p), c1, p), a_same, p),
                               gf_mul(gf_mul(gf_norm(e_prev, p), c2, p), a_prev, p), p);
            row[static_cast<std::size_t>(j - 1)] = value;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace mzlab
