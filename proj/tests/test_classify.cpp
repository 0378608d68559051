#include <catch2/catch_amalgamated.hpp>

#include "mzlab/classify.hpp"
#include "mzlab/nilpotency.hpp"
#include "mzlab/oracle.hpp"

using namespace mzlab;

namespace {
Poly P(int p, std::vector<int> c) { return Poly::from_coeffs(p, std::move(c)); }

template <class Fn>
void for_each_nonzero(int p, int max_degree, Fn&& fn) {
    std::vector<int> c(static_cast<std::size_t>(max_degree) + 1, 0);
    for (;;) {
        int i = 0;
        while (i <= max_degree && c[static_cast<std::size_t>(i)] == p - 1) {
            c[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i > max_degree) break;
        ++c[static_cast<std::size_t>(i)];
        fn(Poly::from_coeffs(p, c));
    }
}
}  // namespace

TEST_CASE("image classification for derivations", "[classify]") {
    SECTION("p=3, f=x: the slot-1 branch is Mathieu-Zhao") {
        auto v = classify_image_derivation(Poly::monomial(3, 1));
        CHECK(v.decision == Decision::MZ);
        CHECK(v.citation == "Theorem 2.4(1)");
        CHECK_FALSE(v.witness.has_value());
    }
    SECTION("p=3, f=x^2: the witness of the single-slot proof") {
        auto v = classify_image_derivation(Poly::monomial(3, 2));
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 2.3");
        REQUIRE(v.witness.has_value());
        CHECK(std::get<Poly>(v.witness->a) == Poly::monomial(3, 3));
        CHECK(std::get<Poly>(v.witness->b) == Poly::monomial(3, 4));
        CHECK(v.witness->mode == WitnessMode::ExactDerivation);
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(3, 2)},
                             IdealSpec::whole_ring(3), *v.witness)
                  .verified);
    }
    SECTION("p=2, f=x^2+x+1: two slots with zero radical") {
        auto v = classify_image_derivation(P(2, {1, 1, 1}));
        CHECK(v.decision == Decision::MZ_RadicalZero);
        CHECK(v.citation == "Theorem 2.4(2)");
    }
    SECTION("p=5, f=x^6 normalizes to slot 1") {
        auto v = classify_image_derivation(Poly::monomial(5, 6));
        CHECK(v.decision == Decision::MZ);
    }
    SECTION("f=0 has the trivial image") {
        CHECK(classify_image_derivation(Poly::zero(3)).decision == Decision::MZ);
    }
    SECTION("p=3, f=x^2+x+1 = (x+2)^2: the two-slot branch fails and the "
            "corrected verdict carries a verified witness") {
        Poly f = P(3, {1, 1, 1});
        auto v = classify_image_derivation(f);
        REQUIRE(v.decision == Decision::NotMZ);
        REQUIRE(v.witness.has_value());
        // the radical really contains (x+2)^3 = x^3 + 2
        Poly a = std::get<Poly>(v.witness->a);
        CHECK(a == P(3, {2, 0, 0, 1}));
        CHECK(verify_witness(UnivariateDerivation{f}, IdealSpec::whole_ring(3), *v.witness)
                  .verified);
        // independent sanity: a^m stays in the image for m = 1..10
        Poly power = a;
        for (int m = 1; m <= 10; ++m) {
            CHECK(exact_member_derivation(f, power));
            power = power * a;
        }
    }
}

TEST_CASE("Cor 2.2 consistency: divisible degree bounds never yield NotMZ",
          "[classify][property]") {
    for (int p : {2, 3}) {
        for_each_nonzero(p, 5, [&](const Poly& f) {
            auto [deg, ldeg] = degree_bounds(f);
            if (gf_norm(deg - 1, p) == 0 || gf_norm(ldeg - 1, p) == 0)
                CHECK(classify_image_derivation(f).decision != Decision::NotMZ);
        });
    }
}

TEST_CASE("image classification for e-derivations", "[classify]") {
    SECTION("phi = x + 1 is never Mathieu-Zhao") {
        for (int p : {2, 3, 5}) {
            auto v = classify_image_ederivation(P(p, {1, 1}));
            REQUIRE(v.decision == Decision::NotMZ);
            CHECK(v.citation == "Theorem 2.5");
            CHECK(v.witness->mode == WitnessMode::TranslationCertificate);
            CHECK(verify_witness(EDerivation{P(p, {1, 1})}, IdealSpec::whole_ring(p),
                                 *v.witness)
                      .verified);
        }
    }
    SECTION("p=5, phi = 2x") {
        CHECK(classify_image_ederivation(P(5, {0, 2})).decision == Decision::MZ);
    }
    SECTION("phi = x^2 + 1") {
        CHECK(classify_image_ederivation(P(3, {1, 0, 1})).decision == Decision::MZ);
    }
    SECTION("phi = x gives the trivial image") {
        CHECK(classify_image_ederivation(Poly::monomial(3, 1)).decision == Decision::MZ);
    }
}

TEST_CASE("e-derivation images: NotMZ exactly at nonzero nilpotent delta",
          "[classify][property]") {
    for (int p : {2, 3, 5}) {
        std::vector<Poly> phis;
        for (int c = 0; c < p; ++c) phis.push_back(Poly::constant(p, c));
        for (int c = 0; c < p; ++c)
            for (int q = 1; q < p; ++q) phis.push_back(P(p, {c, q}));
        phis.push_back(P(p, {1, 1, 1}));
        phis.push_back(Poly::monomial(p, 2));
        for (auto& phi : phis) {
            auto v = classify_image_ederivation(phi);
            auto ln = is_ln_ederivation(phi);
            bool delta_zero = classify_phi(phi).shape == PhiShape::Identity;
            bool expect_notmz = ln.status == LnStatus::LocallyNilpotent && !delta_zero;
            CHECK((v.decision == Decision::NotMZ) == expect_notmz);
        }
    }
}

TEST_CASE("ideal classification for derivations", "[classify]") {
    SECTION("p=5, f=x^3, generator slots (0,2): adjacent congruence j2-j1 = i1-1") {
        auto v = classify_ideal_derivation(Poly::monomial(5, 3),
                                           IdealSpec(P(5, {1, 0, 1})));
        CHECK(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 4.2(2.1)");
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(5, 3)},
                             IdealSpec(P(5, {1, 0, 1})), *v.witness)
                  .verified);
    }
    SECTION("p=5, f=x^3, generator slots (0,3): the reflected congruence") {
        auto v = classify_ideal_derivation(Poly::monomial(5, 3),
                                           IdealSpec(P(5, {1, 0, 0, 1})));
        CHECK(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 4.2(2.2)");
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(5, 3)},
                             IdealSpec(P(5, {1, 0, 0, 1})), *v.witness)
                  .verified);
    }
    SECTION("p=5, f=x^3, generator slots (0,1): the cited branch claims MZ but the "
            "radical is nonzero; corrected with a verified witness") {
        IdealSpec ideal(P(5, {1, 1}));
        auto v = classify_ideal_derivation(Poly::monomial(5, 3), ideal);
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 4.2(2.3)");
        CHECK_FALSE(v.notes.empty());
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(5, 3)}, ideal, *v.witness)
                  .verified);
        // explicit radical element: a = (x(1+x))^5 = x^5 + x^10 has
        // a^m = D(V_m) with V_m = 2 x^{5m-2} (1+x^5)^m in the ideal
        Poly a = std::get<Poly>(v.witness->a);
        CHECK(a == P(5, {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
    }
    SECTION("p=2, f=1: D = d/dx is never MZ on an ideal") {
        for (auto gen : {P(2, {1, 1}), P(2, {0, 1}), P(2, {1, 0, 1})}) {
            auto v = classify_ideal_derivation(Poly::constant(2, 1), IdealSpec(gen));
            CHECK(v.decision == Decision::NotMZ);
            CHECK(verify_witness(UnivariateDerivation{Poly::constant(2, 1)}, IdealSpec(gen),
                                 *v.witness)
                      .verified);
        }
    }
    SECTION("p=3, f=x^2+x^4: two slots with nonzero cofactor slot") {
        auto v = classify_ideal_derivation(P(3, {0, 0, 1, 0, 1}), IdealSpec(P(3, {1, 1})));
        CHECK(v.decision == Decision::MZ_RadicalZero);
        CHECK(v.citation == "Theorem 4.4(2)");
    }
    SECTION("i1 = 1 keeps a zero radical for every generator") {
        auto v = classify_ideal_derivation(Poly::monomial(5, 1), IdealSpec(P(5, {1, 1})));
        CHECK(v.decision == Decision::MZ_RadicalZero);
    }
    SECTION("the degenerate 2 i1 = 1 congruence case verifies with the slot obstruction") {
        // p=3, f=x^2, u=1+x: the proof's x^{p-1} multiplier fails here, the
        // emitted slot-(i1-1) obstruction must verify
        IdealSpec ideal(P(3, {1, 1}));
        auto v = classify_ideal_derivation(Poly::monomial(3, 2), ideal);
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(3, 2)}, ideal, *v.witness)
                  .verified);
    }
}

TEST_CASE("p=2 ideal images: MZ exactly when not locally nilpotent",
          "[classify][property]") {
    std::vector<IdealSpec> ideals = {IdealSpec(P(2, {0, 1})), IdealSpec(P(2, {1, 1})),
                                     IdealSpec(P(2, {1, 1, 1})), IdealSpec(P(2, {0, 0, 1}))};
    for_each_nonzero(2, 5, [&](const Poly& f) {
        auto ln = is_ln_derivation(f);
        for (auto& ideal : ideals) {
            auto v = classify_ideal_derivation(f, ideal);
            bool rz = v.decision == Decision::MZ_RadicalZero;
            CHECK(rz == (ln.status == LnStatus::NotLocallyNilpotent));
        }
    });
}

TEST_CASE("ideal classification for e-derivations", "[classify]") {
    SECTION("p=3, phi=x+1, I=(x)") {
        auto v = classify_ideal_ederivation(P(3, {1, 1}), IdealSpec(Poly::monomial(3, 1)));
        CHECK(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Theorem 4.7(1.2)");
        CHECK(verify_witness(EDerivation{P(3, {1, 1})}, IdealSpec(Poly::monomial(3, 1)),
                             *v.witness)
                  .verified);
    }
    SECTION("constant phi on a linear generator") {
        auto v = classify_ideal_ederivation(Poly::constant(3, 2), IdealSpec(P(3, {1, 1})));
        CHECK(v.decision == Decision::MZ);
        CHECK(v.citation == "Theorem 4.7(1.1)");
    }
    SECTION("p=5, phi=3, I=(x^2): the power-difference witness") {
        auto v = classify_ideal_ederivation(Poly::constant(5, 3),
                                            IdealSpec(Poly::monomial(5, 2)));
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Theorem 4.7(2.1)");
        CHECK(std::get<Poly>(v.witness->a) == P(5, {1, 0, 1}));  // x^2 - 9 = x^2 + 1
        CHECK(std::get<Poly>(v.witness->b) == Poly::monomial(5, 1));
        CHECK(verify_witness(EDerivation{Poly::constant(5, 3)},
                             IdealSpec(Poly::monomial(5, 2)), *v.witness)
                  .verified);
    }
    SECTION("p=3, phi=2x, I=(x^2): root of unity scaling") {
        auto v = classify_ideal_ederivation(P(3, {0, 2}), IdealSpec(Poly::monomial(3, 2)));
        CHECK(v.decision == Decision::MZ);
        CHECK(v.citation == "Theorem 4.7(2.3)");
    }
    SECTION("phi = x+c on (x^i) uses the p-power preimage of 1") {
        auto v = classify_ideal_ederivation(P(3, {2, 1}), IdealSpec(Poly::monomial(3, 2)));
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Theorem 4.7(2.2)");
        CHECK(verify_witness(EDerivation{P(3, {2, 1})}, IdealSpec(Poly::monomial(3, 2)),
                             *v.witness)
                  .verified);
    }
    SECTION("deg phi >= 2 is MZ for any ideal") {
        auto v = classify_ideal_ederivation(P(3, {1, 0, 1}), IdealSpec(P(3, {2, 1, 1})));
        CHECK(v.decision == Decision::MZ);
        CHECK(v.citation == "Theorem 4.7");
    }
    SECTION("uncovered generator shapes stay Unknown") {
        auto v = classify_ideal_ederivation(P(3, {2, 1}), IdealSpec(P(3, {2, 1, 1})));
        CHECK(v.decision == Decision::Unknown);
    }
}

TEST_CASE("p=7 verdicts against a conclusive probe window", "[classify][property]") {
    // At p=7 the probed power window still spans p consecutive exponents, so
    // membership patterns are conclusive: radical-zero verdicts must survive
    // an empty probe, NotMZ witnesses must verify.
    const int p = 7;
    std::vector<Poly> fs;
    for (int i1 = 0; i1 < p; ++i1) fs.push_back(Poly::monomial(p, i1));
    fs.push_back(Poly::from_coeffs(p, {1, 1}));
    fs.push_back(poly_pow(Poly::from_coeffs(p, {6, 1}), 2));  // (x-1)^2
    fs.push_back(poly_pow(Poly::from_coeffs(p, {6, 1}), 3));
    fs.push_back(Poly::from_coeffs(p, {3, 0, 1, 2}));
    fs.push_back(Poly::from_coeffs(p, {0, 2, 0, 5}));
    ProbeConfig cfg;
    cfg.max_candidate_degree = 2;
    cfg.degree_cap = 42;
    cfg.power_floor = 2;
    for (auto& f : fs) {
        Verdict v = classify_image_derivation(f);
        INFO("f = " << f.str());
        if (v.decision == Decision::NotMZ) {
            Witness w = *v.witness;
            w.m_lo = 1;
            w.m_hi = 8;
            CHECK(verify_witness(UnivariateDerivation{f}, IdealSpec::whole_ring(p), w)
                      .verified);
        } else {
            auto S = image_span(UnivariateDerivation{f}, IdealSpec::whole_ring(p), 42);
            CHECK(radical_probe(S, cfg).candidates.empty());
        }
    }
    // (x-1)^2 at p=7 is the multi-slot shape whose cofactor slot vanishes
    CHECK(classify_image_derivation(poly_pow(Poly::from_coeffs(p, {6, 1}), 2)).decision ==
          Decision::NotMZ);
}

TEST_CASE("p=5 witness soundness sweep", "[classify][property]") {
    // deterministic family of degree <= 2p inputs; every NotMZ witness must
    // verify over m in [1,8]
    const int p = 5;
    std::vector<Poly> fs;
    for (int i1 = 0; i1 < p; ++i1)
        for (auto f1 : {Poly::constant(p, 1), Poly::from_coeffs(p, {1, 1}),
                        Poly::from_coeffs(p, {0, 1})})
            fs.push_back(Poly::monomial(p, i1) * subst_xp(f1));
    // a few multi-slot shapes, including squares whose cofactor slot vanishes
    fs.push_back(Poly::from_coeffs(p, {1, 1}));                    // 1 + x
    fs.push_back(poly_pow(Poly::from_coeffs(p, {1, 1}), 2));       // (1+x)^2
    fs.push_back(poly_pow(Poly::from_coeffs(p, {4, 1}), 5 + 2));   // (x-1)^7
    fs.push_back(Poly::from_coeffs(p, {2, 0, 1, 3}));
    fs.push_back(poly_pow(Poly::from_coeffs(p, {1, 2, 1}), 3));
    int verified = 0;
    for (auto& f : fs) {
        Verdict v = classify_image_derivation(f);
        if (v.decision != Decision::NotMZ) continue;
        Witness w = *v.witness;
        w.m_lo = 1;
        w.m_hi = 8;
        auto c = verify_witness(UnivariateDerivation{f}, IdealSpec::whole_ring(p), w);
        INFO("f = " << f.str());
        CHECK(c.verified);
        ++verified;
    }
    CHECK(verified >= 10);
}

TEST_CASE("translation sum certificate", "[classify]") {
    CHECK(translation_sum_certificate(3, 1) == P(3, {2}));
    CHECK(translation_sum_certificate(2, 1) == P(2, {1}));
    for (int p : {2, 3, 5, 7})
        for (int c = 1; c < p; ++c)
            CHECK(translation_sum_certificate(p, c) ==
                  Poly::constant(p, gf_neg(gf_pow(c, p - 1, p), p)));
    CHECK_THROWS_AS(translation_sum_certificate(5, 0), std::invalid_argument);
}

TEST_CASE("multivariate single-partial classification", "[classify]") {
    SECTION("p=3, f = x1^4 x2 + x1: deg_{x1} = 4 with 3 | 4 - 1") {
        MultiPoly f = MultiPoly::zero(3, 2);
        f.set({4, 1}, 1);
        f.set({1, 0}, 1);
        CHECK(classify_single_partial_multivariate(f, 1).decision ==
              Decision::MZ_RadicalZero);
    }
    SECTION("p=2, f = x1^3 x2") {
        MultiPoly f = MultiPoly::zero(2, 2);
        f.set({3, 1}, 1);
        CHECK(classify_single_partial_multivariate(f, 1).decision ==
              Decision::MZ_RadicalZero);
    }
    SECTION("p=3, f = x1^2 x2: no divisibility, not univariate") {
        MultiPoly f = MultiPoly::zero(3, 2);
        f.set({2, 1}, 1);
        CHECK(classify_single_partial_multivariate(f, 1).decision == Decision::Unknown);
    }
    SECTION("univariate payloads delegate") {
        MultiPoly f = MultiPoly::zero(3, 2);
        f.set({2, 0}, 1);  // x1^2
        auto v = classify_single_partial_multivariate(f, 1);
        CHECK(v.decision == Decision::NotMZ);
    }
}

TEST_CASE("triangular classification", "[classify]") {
    const int p = 2;
    SECTION("zero map") {
        TriangularDerivation d(2, {MultiPoly::zero(p, 2), MultiPoly::zero(p, 2)});
        CHECK(classify_triangular(d).decision == Decision::MZ);
    }
    SECTION("f_n nonzero: obstruction at the full corner monomial") {
        TriangularDerivation d(2, {MultiPoly::var_power(p, 2, 2, 1),
                                   MultiPoly::constant(p, 2, 1)});
        auto v = classify_triangular(d);
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 2.8(1)");
        CHECK(std::get<MultiPoly>(v.witness->a) == MultiPoly::constant(p, 2, 1));
        MultiPoly x1x2 =
            MultiPoly::var_power(p, 2, 1, 1) * MultiPoly::var_power(p, 2, 2, 1);
        CHECK(std::get<MultiPoly>(v.witness->b) == x1x2);
        CHECK(verify_witness(MapSpec{d}, IdealSpec::whole_ring(p), *v.witness, Limits{}, 12)
                  .verified);
    }
    SECTION("f_n = 0: the last nonzero coefficient carries the witness") {
        TriangularDerivation d(2, {MultiPoly::var_power(p, 2, 2, 1), MultiPoly::zero(p, 2)});
        auto v = classify_triangular(d);
        REQUIRE(v.decision == Decision::NotMZ);
        CHECK(v.citation == "Proposition 2.8(2)");
        CHECK(std::get<MultiPoly>(v.witness->a) == MultiPoly::var_power(p, 2, 2, 1));
        CHECK(std::get<MultiPoly>(v.witness->b) == MultiPoly::var_power(p, 2, 1, 1));
        CHECK(verify_witness(MapSpec{d}, IdealSpec::whole_ring(p), *v.witness, Limits{}, 12)
                  .verified);
    }
}
