#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mzlab/multipoly.hpp"
#include "mzlab/poly.hpp"

namespace mzlab {

// D = f(x) d/dx on K[x].
struct UnivariateDerivation {
    Poly f;
};

// delta = I - phi for the endomorphism determined by phi(x).
struct EDerivation {
    Poly phi;
};

// D = sum_q f_q(x_{q+1},...,x_n) d/dx_q; entry q may only mention variables
// with index > q. Validated at construction.
struct TriangularDerivation {
    int nvars = 0;
    std::vector<MultiPoly> fs;

    TriangularDerivation(int nvars_, std::vector<MultiPoly> fs_)
        : nvars(nvars_), fs(std::move(fs_)) {
        if (nvars < 1) throw std::invalid_argument("TriangularDerivation: nvars must be >= 1");
        if (static_cast<int>(fs.size()) != nvars)
            throw std::invalid_argument("TriangularDerivation: need one coefficient per variable");
        for (int q = 1; q <= nvars; ++q) {
            const MultiPoly& fq = fs[static_cast<std::size_t>(q - 1)];
            if (fq.nvars != nvars || fq.p != fs[0].p)
                throw std::invalid_argument("TriangularDerivation: mismatched ring");
            for (int v = 1; v <= q; ++v)
                if (fq.mentions(v))
                    throw std::invalid_argument(
                        "TriangularDerivation: entry " + std::to_string(q) +
                        " mentions variable x" + std::to_string(v));
        }
    }
};

using MapSpec = std::variant<UnivariateDerivation, EDerivation, TriangularDerivation>;

inline int map_field(const MapSpec& m) {
    return std::visit([](auto&& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TriangularDerivation>)
            return v.fs[0].p;
        else if constexpr (std::is_same_v<T, UnivariateDerivation>)
            return v.f.p;
        else
            return v.phi.p;
    }, m);
}

// D(g) = f * g'
inline Poly apply_derivation(const Poly& f, const Poly& g) { return f * derivative(g); }

// delta(g) = g - g(phi(x))
inline Poly apply_ederivation(const Poly& phi, const Poly& g) { return g - compose(g, phi); }

inline MultiPoly apply_triangular(const TriangularDerivation& d, const MultiPoly& g) {
    if (g.nvars != d.nvars || g.p != d.fs[0].p)
        throw std::invalid_argument("apply_triangular: variable-count mismatch");
    MultiPoly acc = MultiPoly::zero(g.p, g.nvars);
    for (int q = 1; q <= d.nvars; ++q) {
        const MultiPoly& fq = d.fs[static_cast<std::size_t>(q - 1)];
        if (fq.is_zero()) continue;
        acc = acc + fq * partial(g, q);
    }
    return acc;
}

inline Poly apply_map(const MapSpec& m, const Poly& g) {
    if (auto* d = std::get_if<UnivariateDerivation>(&m)) return apply_derivation(d->f, g);
    if (auto* e = std::get_if<EDerivation>(&m)) return apply_ederivation(e->phi, g);
    throw std::invalid_argument("apply_map: univariate argument for a triangular map");
}

inline MultiPoly apply_map(const MapSpec& m, const MultiPoly& g) {
    if (auto* t = std::get_if<TriangularDerivation>(&m)) return apply_triangular(*t, g);
    throw std::invalid_argument("apply_map: multivariate argument for a univariate map");
}

template <class P>
inline P iterate_map(const MapSpec& m, P g, int k) {
    if (k < 0) throw std::invalid_argument("iterate_map: k must be >= 0");
    for (int i = 0; i < k; ++i) g = apply_map(m, g);
    return g;
}

// Shape of phi(x); the classification theorems branch on this.
enum class PhiShape {
    Identity,     // phi = x
    Constant,     // phi = c (including 0)
    Translation,  // phi = x + c, c != 0
    Affine,       // phi = q x + c, q not in {0, 1}
    Higher        // deg phi >= 2
};

struct PhiInfo {
    PhiShape shape;
    int q = 0;  // coefficient of x (affine shapes)
    int c = 0;  // constant term
};

inline PhiInfo classify_phi(const Poly& phi) {
    PhiInfo info;
    info.c = phi.coeff(0);
    info.q = phi.coeff(1);
    if (!phi.is_zero() && phi.degree() >= 2) {
        info.shape = PhiShape::Higher;
        return info;
    }
    if (info.q == 0) {
        info.shape = PhiShape::Constant;
    } else if (info.q == 1) {
        info.shape = info.c == 0 ? PhiShape::Identity : PhiShape::Translation;
    } else {
        info.shape = PhiShape::Affine;
    }
    return info;
}

inline std::string phi_shape_name(PhiShape s) {
    switch (s) {
        case PhiShape::Identity: return "identity";
        case PhiShape::Constant: return "constant";
        case PhiShape::Translation: return "translation";
        case PhiShape::Affine: return "affine";
        case PhiShape::Higher: return "higher-degree";
    }
    return "?";
}

}  // namespace mzlab
