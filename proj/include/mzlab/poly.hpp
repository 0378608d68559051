#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mzlab/field.hpp"

namespace mzlab {

// Dense univariate polynomial over GF(p). Coefficients ascend: c[k] is the
// coefficient of x^k. Canonical form: either c is empty (the zero polynomial)
// or c.back() != 0. Every entry lies in [0, p).
struct Poly {
    int p = 0;
    std::vector<std::uint8_t> c;

    Poly() = default;

    static Poly zero(int p) {
        Poly f;
        f.p = FieldSpec(p).p;
        return f;
    }

    static Poly from_coeffs(int p, std::vector<int> v) {
        Poly f = zero(p);
        f.c.reserve(v.size());
        for (int x : v) f.c.push_back(static_cast<std::uint8_t>(gf_norm(x, p)));
        f.trim();
        return f;
    }

    static Poly constant(int p, int value) { return from_coeffs(p, {value}); }

    static Poly monomial(int p, int deg, int coef = 1) {
        if (deg < 0) throw std::invalid_argument("Poly::monomial: negative degree");
        std::vector<int> v(static_cast<std::size_t>(deg) + 1, 0);
        v.back() = coef;
        return from_coeffs(p, std::move(v));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }

    bool is_constant() const { return c.size() <= 1; }

    int degree() const {
        if (is_zero()) throw std::domain_error("degree of the zero polynomial");
        return static_cast<int>(c.size()) - 1;
    }

    int ldegree() const {
        if (is_zero()) throw std::domain_error("ldegree of the zero polynomial");
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k] != 0) return static_cast<int>(k);
        return 0;  // unreachable
    }

    int coeff(int k) const {
        if (k < 0 || static_cast<std::size_t>(k) >= c.size()) return 0;
        return c[static_cast<std::size_t>(k)];
    }

    int lead() const { return c.at(c.size() - 1); }

    bool operator==(const Poly& o) const { return p == o.p && c == o.c; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Total order used for deterministic containers and report ordering.
    bool operator<(const Poly& o) const {
        if (p != o.p) return p < o.p;
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (std::size_t k = c.size(); k-- > 0;)
            if (c[k] != o.c[k]) return c[k] < o.c[k];
        return false;
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k) os << ',';
            os << static_cast<int>(c[k]);
        }
        os << ']';
        return os.str();
    }
};

inline void require_same_field(const Poly& a, const Poly& b) {
    if (a.p != b.p) throw std::invalid_argument("polynomials over different fields");
}

inline Poly operator+(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    Poly r = Poly::zero(a.p);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t k = 0; k < r.c.size(); ++k)
        r.c[k] = static_cast<std::uint8_t>(gf_add(a.coeff(static_cast<int>(k)),
                                                  b.coeff(static_cast<int>(k)), a.p));
    r.trim();
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    Poly r = Poly::zero(a.p);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t k = 0; k < r.c.size(); ++k)
        r.c[k] = static_cast<std::uint8_t>(gf_sub(a.coeff(static_cast<int>(k)),
                                                  b.coeff(static_cast<int>(k)), a.p));
    r.trim();
    return r;
}

inline Poly operator-(const Poly& a) { return Poly::zero(a.p) - a; }

inline Poly scale(const Poly& a, int s) {
    Poly r = Poly::zero(a.p);
    s = gf_norm(s, a.p);
    if (s == 0 || a.is_zero()) return r;
    r.c.resize(a.c.size());
    for (std::size_t k = 0; k < a.c.size(); ++k)
        r.c[k] = static_cast<std::uint8_t>(gf_mul(a.c[k], s, a.p));
    r.trim();
    return r;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    Poly r = Poly::zero(a.p);
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<int> acc(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            acc[i + j] = (acc[i + j] + a.c[i] * b.c[j]) % a.p;
    }
    r.c.assign(acc.begin(), acc.end());
    r.trim();
    return r;
}

inline Poly poly_pow(const Poly& a, long long e) {
    if (e < 0) throw std::invalid_argument("poly_pow: negative exponent");
    Poly acc = Poly::constant(a.p, 1);
    Poly base = a;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

// Formal derivative, coefficients reduced mod p.
inline Poly derivative(const Poly& f) {
    Poly r = Poly::zero(f.p);
    if (f.c.size() <= 1) return r;
    r.c.resize(f.c.size() - 1);
    for (std::size_t k = 1; k < f.c.size(); ++k)
        r.c[k - 1] = static_cast<std::uint8_t>(gf_mul(static_cast<int>(k % f.p), f.c[k], f.p));
    r.trim();
    return r;
}

// f(g(x)), Horner.
inline Poly compose(const Poly& f, const Poly& g) {
    require_same_field(f, g);
    Poly r = Poly::zero(f.p);
    for (std::size_t k = f.c.size(); k-- > 0;) {
        r = r * g;
        r = r + Poly::constant(f.p, f.c[k]);
    }
    return r;
}

inline int eval(const Poly& f, int x0) {
    int r = 0;
    for (std::size_t k = f.c.size(); k-- > 0;) r = gf_add(gf_mul(r, x0, f.p), f.c[k], f.p);
    return r;
}

// Quotient and remainder; g must be nonzero.
inline std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
    require_same_field(f, g);
    if (g.is_zero()) throw std::domain_error("divmod: division by the zero polynomial");
    Poly r = f;
    Poly q = Poly::zero(f.p);
    if (f.is_zero() || f.degree() < g.degree()) return {q, r};
    q.c.assign(f.c.size() - g.c.size() + 1, 0);
    const int linv = gf_inv(g.lead(), f.p);
    for (int k = f.degree() - g.degree(); k >= 0; --k) {
        int coef = r.coeff(k + g.degree());
        if (coef == 0) continue;
        int s = gf_mul(coef, linv, f.p);
        q.c[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(s);
        // r -= s * x^k * g
        if (r.c.size() < static_cast<std::size_t>(k + g.degree() + 1))
            r.c.resize(static_cast<std::size_t>(k + g.degree() + 1), 0);
        for (std::size_t j = 0; j < g.c.size(); ++j) {
            std::size_t idx = static_cast<std::size_t>(k) + j;
            r.c[idx] = static_cast<std::uint8_t>(gf_sub(r.c[idx], gf_mul(s, g.c[j], f.p), f.p));
        }
    }
    q.trim();
    r.trim();
    return {q, r};
}

inline bool divides(const Poly& g, const Poly& f) {
    if (g.is_zero()) return f.is_zero();
    return divmod(f, g).second.is_zero();
}

inline Poly exact_div(const Poly& f, const Poly& g) {
    auto [q, r] = divmod(f, g);
    if (!r.is_zero()) throw std::domain_error("exact_div: division is not exact");
    return q;
}

inline Poly monic(const Poly& f) {
    if (f.is_zero()) return f;
    return scale(f, gf_inv(f.lead(), f.p));
}

inline Poly gcd_poly(Poly a, Poly b) {
    require_same_field(a, b);
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

// v(x) -> v(x^p). Over GF(p) this equals v(x)^p (Frobenius).
inline Poly subst_xp(const Poly& v) {
    Poly r = Poly::zero(v.p);
    if (v.is_zero()) return r;
    r.c.assign(static_cast<std::size_t>(v.degree()) * v.p + 1, 0);
    for (std::size_t k = 0; k < v.c.size(); ++k) r.c[k * v.p] = v.c[k];
    r.trim();
    return r;
}

// Inverse of subst_xp for polynomials supported on exponents divisible by p.
inline Poly pth_root(const Poly& f) {
    Poly r = Poly::zero(f.p);
    if (f.is_zero()) return r;
    for (std::size_t k = 0; k < f.c.size(); ++k)
        if (f.c[k] != 0 && k % static_cast<std::size_t>(f.p) != 0)
            throw std::domain_error("pth_root: polynomial is not in K[x^p]");
    r.c.resize(f.c.size() / f.p + 1, 0);
    for (std::size_t k = 0; k < f.c.size(); k += f.p) r.c[k / f.p] = f.c[k];
    r.trim();
    return r;
}

// f = lc * prod A_k^k with the A_k monic, squarefree and pairwise coprime.
// Standard GF(p) square-free factorization; multiplicities divisible by p are
// recovered through the p-th root recursion.
inline std::vector<std::pair<int, Poly>> squarefree_decomposition(const Poly& f0) {
    if (f0.is_zero()) throw std::domain_error("squarefree_decomposition of 0");
    std::vector<std::pair<int, Poly>> out;
    Poly f = monic(f0);
    if (f.degree() == 0) return out;
    const int p = f.p;
    Poly d = derivative(f);
    if (d.is_zero()) {
        for (auto& [k, a] : squarefree_decomposition(pth_root(f)))
            out.emplace_back(k * p, a);
        return out;
    }
    Poly cpart = gcd_poly(f, d);
    Poly w = exact_div(f, cpart);
    int i = 1;
    while (w.degree() > 0) {
        Poly y = gcd_poly(w, cpart);
        Poly z = exact_div(w, y);
        if (z.degree() > 0) out.emplace_back(i, z);
        ++i;
        w = std::move(y);
        cpart = exact_div(cpart, w);
    }
    if (cpart.degree() > 0) {
        for (auto& [k, a] : squarefree_decomposition(pth_root(cpart)))
            out.emplace_back(k * p, a);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

// Unique writing f = sum_i x^i f_i(x^p) over residues i in [0, p). Each f_i is
// a polynomial in y standing for x^p. Exponents >= p contribute to the slot of
// their residue class: x^4 at p=3 lands in slot 1 with f_1 = y.
struct SlotDecomposition {
    int p = 0;
    std::vector<std::pair<int, Poly>> slots;  // (residue, f_i), residues ascending

    bool single_slot() const { return slots.size() == 1; }

    bool has_slot(int residue) const {
        for (auto& [r, g] : slots)
            if (r == residue) return true;
        return false;
    }

    const Poly* slot(int residue) const {
        for (auto& [r, g] : slots)
            if (r == residue) return &g;
        return nullptr;
    }

    Poly recompose() const {
        Poly acc = Poly::zero(p);
        for (auto& [r, g] : slots) acc = acc + Poly::monomial(p, r) * subst_xp(g);
        return acc;
    }
};

inline SlotDecomposition slot_decompose(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("slot_decompose of the zero polynomial");
    SlotDecomposition d;
    d.p = f.p;
    for (int r = 0; r < f.p; ++r) {
        Poly g = Poly::zero(f.p);
        for (int e = r; e <= f.degree(); e += f.p) {
            int coef = f.coeff(e);
            if (coef == 0) continue;
            std::size_t ye = static_cast<std::size_t>((e - r) / f.p);
            if (g.c.size() <= ye) g.c.resize(ye + 1, 0);
            g.c[ye] = static_cast<std::uint8_t>(coef);
        }
        g.trim();
        if (!g.is_zero()) d.slots.emplace_back(r, std::move(g));
    }
    return d;
}

// Slot-sigma component of f as a polynomial in x (zero when absent).
inline Poly slot_component(const Poly& f, int sigma) {
    Poly r = Poly::zero(f.p);
    if (f.is_zero()) return r;
    r.c.assign(f.c.size(), 0);
    for (int e = gf_norm(sigma, f.p); e <= f.degree(); e += f.p)
        r.c[static_cast<std::size_t>(e)] = static_cast<std::uint8_t>(f.coeff(e));
    r.trim();
    return r;
}

// Highest and lowest exponents carrying nonzero coefficients.
inline std::pair<int, int> degree_bounds(const Poly& f) {
    return {f.degree(), f.ldegree()};
}

}  // namespace mzlab
