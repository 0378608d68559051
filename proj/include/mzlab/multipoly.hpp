#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mzlab/field.hpp"
#include "mzlab/poly.hpp"

namespace mzlab {

// Sparse multivariate polynomial over GF(p): finite map from exponent vectors
// (fixed length nvars) to nonzero residues. std::map keeps term order
// deterministic (lex on exponent vectors).
struct MultiPoly {
    int p = 0;
    int nvars = 0;
    std::map<std::vector<int>, int> terms;

    static MultiPoly zero(int p, int nvars) {
        MultiPoly f;
        f.p = FieldSpec(p).p;
        if (nvars < 1) throw std::invalid_argument("MultiPoly: nvars must be >= 1");
        f.nvars = nvars;
        return f;
    }

    static MultiPoly constant(int p, int nvars, int value) {
        MultiPoly f = zero(p, nvars);
        f.set(std::vector<int>(static_cast<std::size_t>(nvars), 0), value);
        return f;
    }

    // Single variable x_{var} (1-indexed), exponent e.
    static MultiPoly var_power(int p, int nvars, int var, int e, int coef = 1) {
        MultiPoly f = zero(p, nvars);
        if (var < 1 || var > nvars) throw std::invalid_argument("MultiPoly: variable index");
        std::vector<int> ex(static_cast<std::size_t>(nvars), 0);
        ex[static_cast<std::size_t>(var - 1)] = e;
        f.set(ex, coef);
        return f;
    }

    void set(const std::vector<int>& ex, int value) {
        if (static_cast<int>(ex.size()) != nvars)
            throw std::invalid_argument("MultiPoly: exponent vector length mismatch");
        for (int e : ex)
            if (e < 0) throw std::invalid_argument("MultiPoly: negative exponent");
        value = gf_norm(value, p);
        if (value == 0)
            terms.erase(ex);
        else
            terms[ex] = value;
    }

    int coeff(const std::vector<int>& ex) const {
        auto it = terms.find(ex);
        return it == terms.end() ? 0 : it->second;
    }

    bool is_zero() const { return terms.empty(); }

    int total_degree() const {
        if (is_zero()) throw std::domain_error("total_degree of the zero polynomial");
        int best = 0;
        for (auto& [ex, v] : terms) {
            int s = 0;
            for (int e : ex) s += e;
            best = std::max(best, s);
        }
        return best;
    }

    int deg_in(int var) const {
        if (is_zero()) throw std::domain_error("deg_in of the zero polynomial");
        int best = 0;
        for (auto& [ex, v] : terms)
            best = std::max(best, ex[static_cast<std::size_t>(var - 1)]);
        return best;
    }

    int ldeg_in(int var) const {
        if (is_zero()) throw std::domain_error("ldeg_in of the zero polynomial");
        int best = -1;
        for (auto& [ex, v] : terms) {
            int e = ex[static_cast<std::size_t>(var - 1)];
            best = best < 0 ? e : std::min(best, e);
        }
        return best;
    }

    bool mentions(int var) const {
        for (auto& [ex, v] : terms)
            if (ex[static_cast<std::size_t>(var - 1)] > 0) return true;
        return false;
    }

    bool operator==(const MultiPoly& o) const {
        return p == o.p && nvars == o.nvars && terms == o.terms;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }
    bool operator<(const MultiPoly& o) const {
        if (p != o.p) return p < o.p;
        if (nvars != o.nvars) return nvars < o.nvars;
        return terms < o.terms;
    }

    std::string str() const {
        std::ostringstream os;
        os << '{';
        bool first = true;
        for (auto& [ex, v] : terms) {
            if (!first) os << ", ";
            first = false;
            os << v << "*[";
            for (std::size_t i = 0; i < ex.size(); ++i) {
                if (i) os << ',';
                os << ex[i];
            }
            os << ']';
        }
        os << '}';
        return os.str();
    }
};

inline void require_same_ring(const MultiPoly& a, const MultiPoly& b) {
    if (a.p != b.p || a.nvars != b.nvars)
        throw std::invalid_argument("multivariate polynomials over different rings");
}

inline MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    require_same_ring(a, b);
    MultiPoly r = a;
    for (auto& [ex, v] : b.terms) r.set(ex, gf_add(r.coeff(ex), v, a.p));
    return r;
}

inline MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    require_same_ring(a, b);
    MultiPoly r = a;
    for (auto& [ex, v] : b.terms) r.set(ex, gf_sub(r.coeff(ex), v, a.p));
    return r;
}

inline MultiPoly scale(const MultiPoly& a, int s) {
    MultiPoly r = MultiPoly::zero(a.p, a.nvars);
    s = gf_norm(s, a.p);
    if (s == 0) return r;
    for (auto& [ex, v] : a.terms) r.set(ex, gf_mul(v, s, a.p));
    return r;
}

inline MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    require_same_ring(a, b);
    MultiPoly r = MultiPoly::zero(a.p, a.nvars);
    for (auto& [ea, va] : a.terms)
        for (auto& [eb, vb] : b.terms) {
            std::vector<int> ex(ea.size());
            for (std::size_t i = 0; i < ex.size(); ++i) ex[i] = ea[i] + eb[i];
            r.set(ex, gf_add(r.coeff(ex), gf_mul(va, vb, a.p), a.p));
        }
    return r;
}

inline MultiPoly multi_pow(const MultiPoly& a, int e) {
    if (e < 0) throw std::invalid_argument("multi_pow: negative exponent");
    MultiPoly acc = MultiPoly::constant(a.p, a.nvars, 1);
    for (int i = 0; i < e; ++i) acc = acc * a;
    return acc;
}

// Formal partial derivative with respect to x_{var} (1-indexed).
inline MultiPoly partial(const MultiPoly& f, int var) {
    if (var < 1 || var > f.nvars) throw std::invalid_argument("partial: variable index");
    MultiPoly r = MultiPoly::zero(f.p, f.nvars);
    for (auto& [ex, v] : f.terms) {
        int e = ex[static_cast<std::size_t>(var - 1)];
        if (e == 0) continue;
        std::vector<int> nx = ex;
        nx[static_cast<std::size_t>(var - 1)] = e - 1;
        r.set(nx, gf_add(r.coeff(nx), gf_mul(v, e % f.p, f.p), f.p));
    }
    return r;
}

// True when f only involves x_{var}; extraction to a univariate Poly.
inline bool univariate_in(const MultiPoly& f, int var) {
    for (auto& [ex, v] : f.terms)
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (static_cast<int>(i) != var - 1 && ex[i] > 0) return false;
    return true;
}

inline Poly to_univariate(const MultiPoly& f, int var) {
    if (!univariate_in(f, var))
        throw std::invalid_argument("to_univariate: polynomial mentions other variables");
    std::vector<int> coeffs;
    for (auto& [ex, v] : f.terms) {
        int e = ex[static_cast<std::size_t>(var - 1)];
        if (static_cast<int>(coeffs.size()) <= e) coeffs.resize(static_cast<std::size_t>(e) + 1, 0);
        coeffs[static_cast<std::size_t>(e)] = v;
    }
    return Poly::from_coeffs(f.p, std::move(coeffs));
}

}  // namespace mzlab
