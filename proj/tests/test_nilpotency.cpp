#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "mzlab/nilpotency.hpp"

using namespace mzlab;

namespace {
Poly P(int p, std::vector<int> c) { return Poly::from_coeffs(p, std::move(c)); }
}  // namespace

TEST_CASE("is_ln_derivation worked examples", "[nilpotency]") {
    SECTION("p=3, f=x^2: nilpotent with D^3(x) = 0") {
        auto v = is_ln_derivation(Poly::monomial(3, 2));
        CHECK(v.status == LnStatus::LocallyNilpotent);
        CHECK(v.index == 3);
        CHECK(v.citation == "Proposition 3.1");
    }
    SECTION("p=3, f=x^4: slot residue 1, not nilpotent") {
        auto v = is_ln_derivation(Poly::monomial(3, 4));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
        CHECK(v.citation == "Proposition 3.1");
    }
    SECTION("p=3, f=x^2+x^4+x^6: the f2 f0 = f1^2 branch") {
        auto v = is_ln_derivation(P(3, {0, 0, 1, 0, 1, 0, 1}));
        CHECK(v.status == LnStatus::LocallyNilpotent);
        CHECK(v.index == 3);
        CHECK(v.citation == "Theorem 3.6");
    }
    SECTION("p=5, f=1+x^2: a cycle D^5(x) = D(x)") {
        auto v = is_ln_derivation(P(5, {1, 0, 1}));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
        auto* cyc = std::get_if<CycleCertificate>(&v.certificate);
        REQUIRE(cyc != nullptr);
        CHECK(cyc->j == 1);
        CHECK(cyc->k == 5);
    }
    SECTION("p=5, two slots containing residue 1") {
        auto v = is_ln_derivation(P(5, {1, 1}));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
        CHECK(std::get_if<ConstantTrackCertificate>(&v.certificate) != nullptr);
    }
    SECTION("p=5, growing orbit hits the cap") {
        auto v = is_ln_derivation(P(5, {1, 0, 0, 1}), 16);
        CHECK(v.status == LnStatus::Unknown);
        CHECK(v.cap == 16);
    }
    CHECK_THROWS_AS(is_ln_derivation(Poly::zero(3)), std::invalid_argument);
}

TEST_CASE("is_ln_ederivation", "[nilpotency]") {
    SECTION("translations are nilpotent") {
        for (int p : {2, 3, 5}) {
            auto v = is_ln_ederivation(P(p, {1, 1}));
            CHECK(v.status == LnStatus::LocallyNilpotent);
            CHECK(v.index <= p);
            CHECK(iterate_map(MapSpec{EDerivation{P(p, {1, 1})}}, Poly::monomial(p, 1), v.index)
                      .is_zero());
        }
    }
    SECTION("p=3, phi = 2x cycles with period 2") {
        auto v = is_ln_ederivation(P(3, {0, 2}));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
        auto* cyc = std::get_if<CycleCertificate>(&v.certificate);
        REQUIRE(cyc != nullptr);
        Poly x = Poly::monomial(3, 1);
        MapSpec m = EDerivation{P(3, {0, 2})};
        CHECK(iterate_map(m, x, cyc->j) == iterate_map(m, x, cyc->k));
    }
    SECTION("identity is trivially nilpotent") {
        auto v = is_ln_ederivation(Poly::monomial(7, 1));
        CHECK(v.status == LnStatus::LocallyNilpotent);
    }
    SECTION("higher degree phi is never nilpotent") {
        auto v = is_ln_ederivation(P(3, {1, 0, 1}));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
    }
    SECTION("general affine phi cycles: p=5, phi = 2x+1") {
        auto v = is_ln_ederivation(P(5, {1, 2}));
        CHECK(v.status == LnStatus::NotLocallyNilpotent);
        auto* cyc = std::get_if<CycleCertificate>(&v.certificate);
        REQUIRE(cyc != nullptr);
        CHECK(cyc->j == 1);
        CHECK(cyc->k == 3);  // delta(x) = 4x+4, delta^2(x) = x+1, delta^3(x) = 4x+4
    }
}

TEST_CASE("is_locally_finite", "[nilpotency]") {
    CHECK(is_locally_finite(MapSpec{EDerivation{Poly::monomial(3, 2)}}).status == LfStatus::NotLF);
    CHECK(is_locally_finite(MapSpec{EDerivation{P(3, {2, 1})}}).status == LfStatus::LF);
    CHECK(is_locally_finite(MapSpec{UnivariateDerivation{Poly::monomial(5, 1)}}).status ==
          LfStatus::LF);
    // f = x^{p+1} = x * (x^p): slot 1 with nonconstant coefficient
    CHECK(is_locally_finite(MapSpec{UnivariateDerivation{Poly::monomial(5, 6)}}).status ==
          LfStatus::NotLF);
    // nilpotent implies locally finite
    CHECK(is_locally_finite(MapSpec{UnivariateDerivation{Poly::monomial(3, 2)}}).status ==
          LfStatus::LF);
}

TEST_CASE("nilpotency_bound", "[nilpotency]") {
    CHECK(nilpotency_bound(3, 2) == 4);
    CHECK(nilpotency_bound(5, 2) == 11);
    CHECK(nilpotency_bound(5, 3) == 11);
    CHECK(nilpotency_bound(2, 0) == 2);
    CHECK(nilpotency_bound(7, 4) == 22);
    CHECK_THROWS_AS(nilpotency_bound(5, 1), std::invalid_argument);
    CHECK_THROWS_AS(nilpotency_bound(5, 6), std::invalid_argument);
}

TEST_CASE("nilpotency_bound kills every single-slot orbit", "[nilpotency][property]") {
    for (int p : {2, 3, 5}) {
        for (int r = 0; r < p; ++r) {
            if (r == 1) continue;
            int J = nilpotency_bound(p, r);
            int maxy = (2 * p - r) / p;
            // all slot coefficients f1 of y-degree <= maxy
            int total = 1;
            for (int i = 0; i <= maxy; ++i) total *= p;
            for (int code = 1; code < total; ++code) {
                int x = code;
                std::vector<int> c(static_cast<std::size_t>(maxy) + 1);
                for (auto& e : c) {
                    e = x % p;
                    x /= p;
                }
                Poly f1 = Poly::from_coeffs(p, c);
                if (f1.is_zero()) continue;
                Poly f = Poly::monomial(p, r) * subst_xp(f1);
                CHECK(iterate_map(MapSpec{UnivariateDerivation{f}}, Poly::monomial(p, 1), J)
                          .is_zero());
            }
        }
    }
}

TEST_CASE("coefficient table", "[nilpotency]") {
    SECTION("row zero carries the two unit coefficients") {
        auto t = coeff_table(5, 0, 2, 1, 1, 0);
        CHECK(t.rows[0] == std::vector<int>{1, 1});
    }
    SECTION("p=5, i1=0, i2=2, c=(1,1): frozen rows") {
        auto t = coeff_table(5, 0, 2, 1, 1, 2);
        CHECK(t.rows[1] == std::vector<int>{0, 2, 2});
        CHECK(t.rows[2] == std::vector<int>{0, 2, 3, 1});
    }
    SECTION("i1=1 keeps the first column a unit: the geometric ladder c1^{k+1}") {
        auto t = coeff_table(5, 1, 3, 2, 4, 9);
        for (int k = 0; k < static_cast<int>(t.rows.size()); ++k) {
            CHECK(t.rows[static_cast<std::size_t>(k)].front() == gf_pow(2, k + 1, 5));
            CHECK(t.rows[static_cast<std::size_t>(k)].front() != 0);
        }
        // at unit scale the column is constantly c1
        auto u = coeff_table(5, 1, 3, 1, 4, 9);
        for (auto& row : u.rows) CHECK(row.front() == 1);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(coeff_table(5, 2, 2, 1, 1, 3), std::invalid_argument);
        CHECK_THROWS_AS(coeff_table(5, 0, 2, 0, 1, 3), std::invalid_argument);
        CHECK_THROWS_AS(coeff_table(4, 0, 2, 1, 1, 3), std::invalid_argument);
    }
    SECTION("csv shape") {
        auto t = coeff_table(3, 0, 2, 1, 1, 1);
        std::string csv = t.to_csv();
        CHECK(csv.find("k,a_1,a_2,a_3") == 0);
    }
}
