#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mzlab/maps.hpp"
#include "mzlab/multipoly.hpp"
#include "mzlab/poly.hpp"

namespace mzlab {

struct Limits {
    int degree_cap = 10000;          // largest span degree cap N
    long long probe_budget = 1000000;  // enumeration budget for the oracle
    int iteration_cap = 64;          // orbit length bound for LN testing
};

// Principal ideal of K[x]; the whole ring is generator = 1.
struct IdealSpec {
    Poly generator;

    explicit IdealSpec(Poly g) : generator(std::move(g)) {
        if (generator.is_zero())
            throw std::invalid_argument("IdealSpec: generator must be nonzero");
    }

    static IdealSpec whole_ring(int p) { return IdealSpec(Poly::constant(p, 1)); }

    bool is_whole_ring() const { return generator.degree() == 0; }
};

enum class Membership { In, Out, OutOfRange };

// Row-echelon (fully reduced) basis of an image space intersected with
// degrees <= N. Pivot of a row = its degree; pivots strictly increase and are
// normalized to 1. `exact` means the basis spans the true image intersected
// with degrees <= N; rows are sound images of the recorded preimages either
// way.
struct TruncatedSubspace {
    int p = 0;
    int N = 0;
    bool exact = false;
    std::vector<Poly> basis;      // ascending pivot degree
    std::vector<Poly> preimages;  // preimages[i] maps onto basis[i]

    Membership member(const Poly& g) const {
        if (g.p != p) throw std::invalid_argument("member: field mismatch");
        if (g.is_zero()) return Membership::In;
        if (g.degree() > N) return Membership::OutOfRange;
        Poly r = g;
        while (!r.is_zero()) {
            int d = r.degree();
            const Poly* row = row_with_pivot(d);
            if (!row) return Membership::Out;
            r = r - scale(*row, r.coeff(d));
        }
        return Membership::In;
    }

    const Poly* row_with_pivot(int d) const {
        auto it = std::lower_bound(basis.begin(), basis.end(), d,
                                   [](const Poly& row, int deg) { return row.degree() < deg; });
        if (it == basis.end() || it->degree() != d) return nullptr;
        return &*it;
    }
};

namespace detail {

// Incremental fully-reduced echelon form keyed by degree, with preimage
// tracking so every stored row is a recorded image.
class EchelonBuilder {
public:
    explicit EchelonBuilder(int p) : p_(p) {}

    void add(Poly img, Poly pre) {
        // reduce from the top until the leading degree is a fresh pivot
        while (!img.is_zero()) {
            auto it = rows_.find(img.degree());
            if (it == rows_.end()) break;
            int coef = img.coeff(img.degree());
            img = img - scale(it->second.img, coef);
            pre = pre - scale(it->second.pre, coef);
        }
        if (img.is_zero()) return;
        // clear the remaining pivot positions; rows are fully reduced, so this
        // never disturbs the leading term
        for (auto& [d, row] : rows_) {
            int coef = img.coeff(d);
            if (coef == 0) continue;
            img = img - scale(row.img, coef);
            pre = pre - scale(row.pre, coef);
        }
        const int d = img.degree();
        int inv = gf_inv(img.lead(), p_);
        img = scale(img, inv);
        pre = scale(pre, inv);
        back_substitute(d, img, pre);
        rows_.emplace(d, Row{std::move(img), std::move(pre)});
    }

    // Keep only rows of degree <= N. Rows above N never contribute to the
    // degree-<= N part of the span once in echelon form.
    TruncatedSubspace finish(int N, bool exact) const {
        TruncatedSubspace s;
        s.p = p_;
        s.N = N;
        s.exact = exact;
        for (auto& [d, row] : rows_) {
            if (d > N) continue;
            s.basis.push_back(row.img);
            s.preimages.push_back(row.pre);
        }
        return s;
    }

private:
    struct Row {
        Poly img;
        Poly pre;
    };

    void back_substitute(int d, const Poly& img, const Poly& pre) {
        for (auto& [dd, row] : rows_) {
            int coef = row.img.coeff(d);
            if (coef == 0) continue;
            row.img = row.img - scale(img, coef);
            row.pre = row.pre - scale(pre, coef);
        }
    }

    int p_;
    std::map<int, Row> rows_;
};

}  // namespace detail

// Generator window for D = f d/dx on (u): images of x^k u for k = 0..kappa.
// kappa is large enough that every image of degree <= N is a combination of
// windowed generators: any v in (u) with (v)' of degree <= N - deg f can be
// rewritten, modulo ker d/dx, as Q u with deg Q <= max(N - deg f + 1,
// p (deg u - 1)) - deg u.
inline int derivation_window(int N, int p, int deg_f, int deg_u) {
    int m1 = N - deg_f + 1;
    int m2 = deg_u > 0 ? p * (deg_u - 1) : 0;
    return std::max(m1, m2) - deg_u;
}

inline TruncatedSubspace image_span(const MapSpec& m, const IdealSpec& ideal, int N,
                                    const Limits& limits = {}) {
    const int p = map_field(m);
    if (ideal.generator.p != p) throw std::invalid_argument("image_span: field mismatch");
    if (N < 1) throw std::invalid_argument("image_span: N must be >= 1");
    if (N > limits.degree_cap)
        throw std::invalid_argument("image_span: N exceeds the configured degree cap");

    const Poly u = monic(ideal.generator);
    const int deg_u = u.degree();
    detail::EchelonBuilder rows(p);

    if (auto* d = std::get_if<UnivariateDerivation>(&m)) {
        if (d->f.is_zero()) return rows.finish(N, true);
        int kappa = derivation_window(N, p, d->f.degree(), deg_u);
        for (int k = 0; k <= kappa; ++k) {
            Poly pre = Poly::monomial(p, k) * u;
            rows.add(apply_derivation(d->f, pre), pre);
        }
        return rows.finish(N, true);
    }

    auto* e = std::get_if<EDerivation>(&m);
    if (!e) throw std::invalid_argument("image_span: use triangular_image_span for triangular maps");

    const PhiInfo info = classify_phi(e->phi);
    switch (info.shape) {
        case PhiShape::Identity:
            return rows.finish(N, true);  // delta = 0

        case PhiShape::Constant: {
            // deg delta(x^k u) = k + deg u exactly.
            for (int k = 0; k + deg_u <= N; ++k) {
                Poly pre = Poly::monomial(p, k) * u;
                rows.add(apply_ederivation(e->phi, pre), pre);
            }
            return rows.finish(N, true);
        }

        case PhiShape::Affine: {
            // Kernel of delta is K[Theta] with Theta = (x - x0)^ord(q); a
            // preimage of any element of degree <= N can be chosen of degree
            // <= max(N, ord(q) * deg u).
            int r = gf_order(info.q, p);
            int kappa = std::max(N, r * deg_u) - deg_u;
            for (int k = 0; k <= kappa; ++k) {
                Poly pre = Poly::monomial(p, k) * u;
                rows.add(apply_ederivation(e->phi, pre), pre);
            }
            return rows.finish(N, true);
        }

        case PhiShape::Higher: {
            // deg delta(x^k u) = deg(phi) * (k + deg u): strictly increasing
            // leading degrees, so generators above N never reach below it.
            int d = e->phi.degree();
            for (int k = 0; k <= N / d; ++k) {
                Poly pre = Poly::monomial(p, k) * u;
                rows.add(apply_ederivation(e->phi, pre), pre);
            }
            return rows.finish(N, true);
        }

        case PhiShape::Translation: {
            if (deg_u == 0) {
                // Whole ring: delta(x^{p^t k0}) = delta(x^{k0})^{p^t} with
                // degree p^t (k0 - 1); enumerate every k whose image degree
                // fits under N.
                std::set<long long> ks;
                for (long long pt = 1; pt <= static_cast<long long>(N) + 1; pt *= p) {
                    for (long long k0 = 1; pt * (k0 - 1) <= N; ++k0) {
                        if (k0 % p == 0) continue;
                        ks.insert(pt * k0);
                    }
                }
                for (long long k : ks) {
                    Poly pre = Poly::monomial(p, static_cast<int>(k));
                    rows.add(apply_ederivation(e->phi, pre), pre);
                }
                return rows.finish(N, true);
            }
            // Proper ideal: no degree argument excludes hidden low-degree
            // images, so the window is heuristic and the span is not exact.
            long long cap = 1;
            while (cap < N) cap *= p;
            cap *= p;
            cap = std::min<long long>(cap, 4LL * limits.degree_cap);
            for (long long k = 0; k <= cap; ++k) {
                Poly pre = Poly::monomial(p, static_cast<int>(k)) * u;
                rows.add(apply_ederivation(e->phi, pre), pre);
            }
            return rows.finish(N, false);
        }
    }
    throw std::logic_error("image_span: unreachable");
}

// Membership in Im(f d/dx) without truncation: g lies in the image iff f
// divides g and the quotient has nothing in slot p-1 (no antiderivative
// obstruction).
inline bool exact_member_derivation(const Poly& f, const Poly& g) {
    if (f.is_zero()) throw std::invalid_argument("exact_member_derivation: f must be nonzero");
    require_same_field(f, g);
    if (g.is_zero()) return true;
    auto [q, r] = divmod(g, f);
    if (!r.is_zero()) return false;
    return slot_component(q, f.p - 1).is_zero();
}

// C(n, k) != 0 mod p by Lucas: every base-p digit of k is at most the digit
// of n.
inline bool binomial_nonzero_mod_p(long long n, long long k, int p) {
    while (n > 0 || k > 0) {
        if (k % p > n % p) return false;
        n /= p;
        k /= p;
    }
    return true;
}

// Monomial membership in Im(I - phi) for phi = x + c, c != 0. x^d lies in the
// image exactly when the translation trace sum_j (x + jc)^d vanishes, i.e.
// when C(d, t) = 0 mod p for every t < d with t = d mod (p-1); the trace is an
// exact obstruction because the image is the kernel of the orbit-sum operator.
// For degrees below p^2 this is the closed-form row rule i <= p - 2 - k; from
// p^2 on, Frobenius ladders such as x^{p^2} = delta(x^{2 p^2} - x) re-enter
// the image. Membership does not depend on c.
inline bool ederivation_monomial_member(int p, long long d) {
    if (d == 0) return true;
    for (long long t = d % (p - 1); t < d; t += p - 1)
        if (binomial_nonzero_mod_p(d, t, p)) return false;
    return true;
}

struct MonomialTable {
    int p = 0;
    int c = 0;
    int N = 0;
    struct Entry {
        int k;
        int i;
        int degree;
        bool member;
    };
    std::vector<Entry> entries;  // ascending degree

    bool member(int k, int i) const {
        return ederivation_monomial_member(p, static_cast<long long>(k) * p + i);
    }

    std::vector<int> member_degrees() const {
        std::vector<int> out;
        for (auto& e : entries)
            if (e.member) out.push_back(e.degree);
        return out;
    }
};

inline MonomialTable ederivation_monomial_table(int p, int c, int N) {
    FieldSpec fs(p);
    if (gf_norm(c, p) == 0)
        throw std::invalid_argument("ederivation_monomial_table: c must be nonzero (delta = 0)");
    if (N < 1) throw std::invalid_argument("ederivation_monomial_table: N must be >= 1");
    MonomialTable t;
    t.p = p;
    t.c = gf_norm(c, p);
    t.N = N;
    for (int d = 0; d <= N; ++d)
        t.entries.push_back({d / p, d % p, d, ederivation_monomial_member(p, d)});
    return t;
}

// ---------------------------------------------------------------------------
// Multivariate window spans (triangular derivations). Truncated by total
// degree and always flagged non-exact.

struct MultiSubspace {
    int p = 0;
    int nvars = 0;
    int cap = 0;          // total-degree cap
    bool exact = false;   // always false for these spans
    std::vector<MultiPoly> basis;      // echelon by leading term, see below
    std::vector<MultiPoly> preimages;

    // Leading term order: total degree, then lex on exponent vectors.
    static bool term_less(const std::vector<int>& a, const std::vector<int>& b) {
        int sa = 0, sb = 0;
        for (int e : a) sa += e;
        for (int e : b) sb += e;
        if (sa != sb) return sa < sb;
        return a < b;
    }

    static const std::vector<int>* leading_term(const MultiPoly& f) {
        const std::vector<int>* best = nullptr;
        for (auto& [ex, v] : f.terms)
            if (!best || term_less(*best, ex)) best = &ex;
        return best;
    }

    Membership member(const MultiPoly& g) const {
        if (g.p != p || g.nvars != nvars) throw std::invalid_argument("member: ring mismatch");
        if (g.is_zero()) return Membership::In;
        if (g.total_degree() > cap) return Membership::OutOfRange;
        MultiPoly r = g;
        while (!r.is_zero()) {
            const std::vector<int>* lt = leading_term(r);
            auto it = pivot_index.find(*lt);
            if (it == pivot_index.end()) return Membership::Out;
            const MultiPoly& row = basis[it->second];
            r = r - scale(row, r.coeff(*lt));
        }
        return Membership::In;
    }

    std::map<std::vector<int>, std::size_t> pivot_index;
};

inline MultiSubspace triangular_image_span(const TriangularDerivation& d, int cap,
                                           const Limits& limits = {}) {
    const int p = d.fs[0].p;
    if (cap < 1) throw std::invalid_argument("triangular_image_span: cap must be >= 1");
    if (cap > limits.degree_cap)
        throw std::invalid_argument("triangular_image_span: cap exceeds the degree cap");

    // Generators: D applied to every monomial of total degree <= cap + 1.
    // Images of higher monomials have every term of total degree > cap.
    const int bound = cap + 1;
    std::vector<std::vector<int>> all;
    all.emplace_back(static_cast<std::size_t>(d.nvars), 0);
    for (int v = 0; v < d.nvars; ++v) {
        std::vector<std::vector<int>> next;
        for (auto& base : all) {
            int used = 0;
            for (int e : base) used += e;
            for (int e = 0; used + e <= bound; ++e) {
                auto nx = base;
                nx[static_cast<std::size_t>(v)] = e;
                next.push_back(std::move(nx));
            }
        }
        all = std::move(next);
    }
    std::sort(all.begin(), all.end(), MultiSubspace::term_less);

    MultiSubspace s;
    s.p = p;
    s.nvars = d.nvars;
    s.cap = cap;
    s.exact = false;

    auto reduce_and_insert = [&](MultiPoly img, MultiPoly pre) {
        while (!img.is_zero()) {
            const std::vector<int>* lt = MultiSubspace::leading_term(img);
            auto it = s.pivot_index.find(*lt);
            if (it == s.pivot_index.end()) break;
            int coef = img.coeff(*lt);
            img = img - scale(s.basis[it->second], coef);
            pre = pre - scale(s.preimages[it->second], coef);
        }
        if (img.is_zero()) return;
        for (auto& [key, idx] : s.pivot_index) {
            int coef = img.coeff(key);
            if (coef == 0) continue;
            img = img - scale(s.basis[idx], coef);
            pre = pre - scale(s.preimages[idx], coef);
        }
        int inv = gf_inv(img.coeff(*MultiSubspace::leading_term(img)), p);
        img = scale(img, inv);
        pre = scale(pre, inv);
        std::vector<int> key = *MultiSubspace::leading_term(img);
        for (std::size_t i = 0; i < s.basis.size(); ++i) {
            int coef = s.basis[i].coeff(key);
            if (coef == 0) continue;
            s.basis[i] = s.basis[i] - scale(img, coef);
            s.preimages[i] = s.preimages[i] - scale(pre, coef);
        }
        s.pivot_index[key] = s.basis.size();
        s.basis.push_back(std::move(img));
        s.preimages.push_back(std::move(pre));
    };

    for (auto& e : all) {
        MultiPoly pre = MultiPoly::zero(p, d.nvars);
        pre.set(e, 1);
        MultiPoly img = apply_triangular(d, pre);
        if (img.is_zero()) continue;
        reduce_and_insert(std::move(img), std::move(pre));
    }

    // Drop rows whose pivot exceeds the cap; rebuild the pivot index.
    MultiSubspace out;
    out.p = p;
    out.nvars = d.nvars;
    out.cap = cap;
    out.exact = false;
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
        const std::vector<int>* lt = MultiSubspace::leading_term(s.basis[i]);
        int td = 0;
        for (int e : *lt) td += e;
        if (td > cap) continue;
        out.pivot_index[*lt] = out.basis.size();
        out.basis.push_back(s.basis[i]);
        out.preimages.push_back(s.preimages[i]);
    }
    return out;
}

}  // namespace mzlab
