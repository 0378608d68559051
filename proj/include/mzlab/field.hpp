#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mzlab {

// Largest supported modulus. Keeping p small guarantees that any product of
// two residues fits in an int and that exhaustive desk-scale sweeps stay cheap.
inline constexpr int kMaxPrime = 97;

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// The ambient prime field GF(p).
struct FieldSpec {
    int p;

    explicit FieldSpec(int p_) : p(p_) {
        if (!is_prime(p))
            throw std::invalid_argument("FieldSpec: p is not prime: " + std::to_string(p));
        if (p > kMaxPrime)
            throw std::invalid_argument("FieldSpec: p exceeds the supported cap " +
                                        std::to_string(kMaxPrime));
    }

    bool operator==(const FieldSpec& o) const = default;
};

// Residues are plain ints kept in [0, p).
inline int gf_norm(long long a, int p) {
    long long r = a % p;
    if (r < 0) r += p;
    return static_cast<int>(r);
}

inline int gf_add(int a, int b, int p) { return gf_norm(static_cast<long long>(a) + b, p); }
inline int gf_sub(int a, int b, int p) { return gf_norm(static_cast<long long>(a) - b, p); }
inline int gf_mul(int a, int b, int p) { return gf_norm(static_cast<long long>(a) * b, p); }
inline int gf_neg(int a, int p) { return gf_norm(-static_cast<long long>(a), p); }

inline int gf_pow(int a, long long e, int p) {
    if (e < 0) throw std::invalid_argument("gf_pow: negative exponent");
    long long base = gf_norm(a, p), acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<int>(acc);
}

inline int gf_inv(int a, int p) {
    if (gf_norm(a, p) == 0) throw std::domain_error("gf_inv: inversion of 0");
    return gf_pow(a, p - 2, p);  // Fermat
}

inline int gf_div(int a, int b, int p) { return gf_mul(a, gf_inv(b, p), p); }

// Multiplicative order of a nonzero residue.
inline int gf_order(int a, int p) {
    a = gf_norm(a, p);
    if (a == 0) throw std::domain_error("gf_order: 0 has no multiplicative order");
    int x = a, k = 1;
    while (x != 1) {
        x = gf_mul(x, a, p);
        ++k;
    }
    return k;
}

}  // namespace mzlab
