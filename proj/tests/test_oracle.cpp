#include <catch2/catch_amalgamated.hpp>

#include "mzlab/oracle.hpp"

using namespace mzlab;

namespace {
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

TEST_CASE("radical probe worked examples", "[oracle]") {
    SECTION("p=2, D=x^2 d/dx, d=2, N=20, m0=1: only x^2 survives") {
        auto S = image_span(UnivariateDerivation{Poly::monomial(2, 2)},
                            IdealSpec::whole_ring(2), 20);
        ProbeConfig cfg;
        cfg.max_candidate_degree = 2;
        cfg.degree_cap = 20;
        cfg.power_floor = 1;
        auto r = radical_probe(S, cfg);
        REQUIRE(r.candidates.size() == 1);
        CHECK(r.candidates[0] == Poly::monomial(2, 2));
        CHECK(r.exact);
        CHECK(r.scanned == 7);  // monic of degree <= 2 over GF(2)
    }
    SECTION("p=3, D=x d/dx, d=2, N=30, m0=2: empty") {
        auto S = image_span(UnivariateDerivation{Poly::monomial(3, 1)},
                            IdealSpec::whole_ring(3), 30);
        ProbeConfig cfg;
        cfg.max_candidate_degree = 2;
        cfg.degree_cap = 30;
        cfg.power_floor = 2;
        auto r = radical_probe(S, cfg);
        CHECK(r.candidates.empty());
    }
    SECTION("the zero subspace admits no candidates") {
        auto S = image_span(UnivariateDerivation{Poly::zero(3)}, IdealSpec::whole_ring(3), 10);
        ProbeConfig cfg;
        cfg.max_candidate_degree = 2;
        cfg.degree_cap = 10;
        cfg.power_floor = 1;
        CHECK(radical_probe(S, cfg).candidates.empty());
    }
    SECTION("budget is enforced") {
        auto S = image_span(UnivariateDerivation{Poly::monomial(3, 1)},
                            IdealSpec::whole_ring(3), 30);
        ProbeConfig cfg;
        cfg.max_candidate_degree = 12;
        cfg.degree_cap = 30;
        cfg.power_floor = 2;
        cfg.budget = 1000;
        CHECK_THROWS_AS(radical_probe(S, cfg), std::invalid_argument);
    }
}

TEST_CASE("probe candidates re-verify on a fresh subspace", "[oracle][property]") {
    for (int p : {2, 3}) {
        for_each_nonzero(p, 4, [&](const Poly& f) {
            auto S = image_span(UnivariateDerivation{f}, IdealSpec::whole_ring(p), 24);
            ProbeConfig cfg;
            cfg.max_candidate_degree = 2;
            cfg.degree_cap = 24;
            cfg.power_floor = 2;
            auto r = radical_probe(S, cfg);
            auto S2 = image_span(UnivariateDerivation{f}, IdealSpec::whole_ring(p), 24);
            for (auto& g : r.candidates) {
                Poly power = poly_pow(g, cfg.power_floor);
                int dg = g.degree() == 0 ? 1 : g.degree();
                for (int m = cfg.power_floor; m * dg <= cfg.degree_cap; ++m) {
                    CHECK(S2.member(power) == Membership::In);
                    power = power * g;
                    if (g.degree() == 0) break;
                }
            }
        });
    }
}

TEST_CASE("probe finds the proof witness exactly on NotMZ inputs", "[oracle][property]") {
    // single-slot f: the witness x^p f1(x^p), made monic, survives the probe
    // at its own degree exactly when the verdict is NotMZ
    for (int p : {2, 3}) {
        for (int r = 0; r < p; ++r) {
            int maxy = (4 - r) / p;
            for_each_nonzero(p, std::max(maxy, 0), [&](const Poly& f1) {
                Poly f = Poly::monomial(p, r) * subst_xp(f1);
                if (f.degree() > 4) return;
                Poly a = monic(Poly::monomial(p, p) * subst_xp(f1));
                auto v = classify_image_derivation(f);
                int N = 6 * (a.degree() + 1);
                auto S = image_span(UnivariateDerivation{f}, IdealSpec::whole_ring(p),
                                    std::max(N, 12));
                ProbeConfig cfg;
                cfg.max_candidate_degree = a.degree();
                cfg.degree_cap = S.N;
                cfg.power_floor = 2;
                auto rep = radical_probe(S, cfg);
                bool found = false;
                for (auto& g : rep.candidates)
                    if (g == a) found = true;
                CHECK(found == (v.decision == Decision::NotMZ));
            });
        }
    }
}

TEST_CASE("verify_witness worked examples", "[oracle]") {
    SECTION("p=3, D=x^2 d/dx, (x^3, x^4) verified in exact mode") {
        Witness w;
        w.a = Poly::monomial(3, 3);
        w.b = Poly::monomial(3, 4);
        w.mode = WitnessMode::ExactDerivation;
        w.m_lo = 1;
        w.m_hi = 10;
        auto c = verify_witness(UnivariateDerivation{Poly::monomial(3, 2)},
                                IdealSpec::whole_ring(3), w);
        CHECK(c.verified);
    }
    SECTION("p=2, D=x^2 d/dx, (x^2, x) verified") {
        Witness w;
        w.a = Poly::monomial(2, 2);
        w.b = Poly::monomial(2, 1);
        w.mode = WitnessMode::ExactDerivation;
        w.m_lo = 1;
        w.m_hi = 10;
        CHECK(verify_witness(UnivariateDerivation{Poly::monomial(2, 2)},
                             IdealSpec::whole_ring(2), w)
                  .verified);
    }
    SECTION("p=3, D=x d/dx, (x, 1) refuted at m=3 in the a-stage") {
        Witness w;
        w.a = Poly::monomial(3, 1);
        w.b = Poly::constant(3, 1);
        w.mode = WitnessMode::ExactDerivation;
        w.m_lo = 1;
        w.m_hi = 3;
        auto c = verify_witness(UnivariateDerivation{Poly::monomial(3, 1)},
                                IdealSpec::whole_ring(3), w);
        CHECK_FALSE(c.verified);
        CHECK(c.m == 3);
        CHECK(c.stage == "a-membership");
    }
    SECTION("window overflow reports the range stage") {
        Witness w;
        w.a = Poly::monomial(3, 3);
        w.b = Poly::monomial(3, 4);
        w.mode = WitnessMode::Window;
        w.m_lo = 1;
        w.m_hi = 10;
        Limits lim;
        lim.degree_cap = 20;
        auto c = verify_witness(UnivariateDerivation{Poly::monomial(3, 2)},
                                IdealSpec::whole_ring(3), w, lim);
        CHECK_FALSE(c.verified);
        CHECK(c.stage == "range");
    }
    SECTION("determinism") {
        Witness w;
        w.a = Poly::monomial(3, 1);
        w.b = Poly::constant(3, 1);
        w.mode = WitnessMode::ExactDerivation;
        w.m_lo = 1;
        w.m_hi = 3;
        auto c1 = verify_witness(UnivariateDerivation{Poly::monomial(3, 1)},
                                 IdealSpec::whole_ring(3), w);
        auto c2 = verify_witness(UnivariateDerivation{Poly::monomial(3, 1)},
                                 IdealSpec::whole_ring(3), w);
        CHECK(c1.verified == c2.verified);
        CHECK(c1.m == c2.m);
        CHECK(c1.stage == c2.stage);
    }
}

TEST_CASE("agreement suite", "[oracle]") {
    ProbeConfig cfg;
    cfg.max_candidate_degree = 2;
    cfg.degree_cap = 24;
    cfg.power_floor = 2;
    SECTION("p=2, deg f <= 4, whole ring") {
        auto r = agreement_suite({2}, 4, 0, cfg);
        CHECK(r.clean());
        CHECK(r.configurations == 31);
        CHECK(r.unknown == 0);
    }
    SECTION("p=3, deg f <= 3, generators of <= 2 slots") {
        auto r = agreement_suite({3}, 3, 2, cfg);
        CHECK(r.clean());
        CHECK(r.unknown == 0);
    }
    SECTION("empty prime list") {
        auto r = agreement_suite({}, 4, 2, cfg);
        CHECK(r.configurations == 0);
        CHECK(r.clean());
    }
}
