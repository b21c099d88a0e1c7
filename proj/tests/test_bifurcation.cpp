#include <doctest.h>

#include <cmath>
#include <random>

#include "tfold/bifurcation.hpp"

using namespace tfold;

namespace {

// Turing point of the example model at fixed nu, from the closed-form maximiser in k and bisection in mu
struct ExampleTuring {
    double mu, k;
};
ExampleTuring example_turing(double nu) {
    const double k2 = (4.0 + std::sqrt(16.0 - 12.0 * nu)) / 6.0;
    auto wmax = [&](double mu) {
        const double u = 1.0 + std::sqrt(1.0 + mu);
        return mu + 4 * u - 3 * u * u - nu * k2 + 2 * k2 * k2 - k2 * k2 * k2;
    };
    double lo = -1.0, hi = 0.0;  // wmax(-1) > 0 for nu < 1, wmax(0) < 0
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (wmax(mid) > 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), std::sqrt(k2)};
}

}  // namespace

TEST_SUITE("bifurcation") {

TEST_CASE("example Turing-fold point and expansion coefficients") {
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto r = locate_turing_fold(m, 0.9, -0.9);
    CHECK(r.mu_star == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(r.nu_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.k_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.u_star(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.audit_passed());
    CHECK(r.expansion.at("u_tilde") == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.expansion.at("mu_hat") == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(r.expansion.at("k_tilde") == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("Turing point at nu = 0.4 against the closed-form oracle") {
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto want = example_turing(0.4);
    const auto tp = find_turing(m, 0.4);
    CHECK(tp.mu_t == doctest::Approx(want.mu).epsilon(1e-9));
    CHECK(tp.k_c == doctest::Approx(want.k).epsilon(1e-8));
    CHECK(tp.mu_t == doctest::Approx(-0.9293355007).epsilon(1e-9));
}

TEST_CASE("expansion coefficients converge at second order under delta halving") {
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto r = locate_turing_fold(m, 0.9, -0.9);
    const double kt = r.expansion.at("k_tilde"), mh = r.expansion.at("mu_hat");
    double ek[3], em[3];
    const double ds[3] = {0.04, 0.02, 0.01};
    for (int i = 0; i < 3; ++i) {
        const auto o = example_turing(1.0 - ds[i]);
        ek[i] = std::abs(o.k - (r.k_star + kt * ds[i]));
        em[i] = std::abs(o.mu - (r.mu_star + mh * ds[i] * ds[i]));
    }
    for (int i = 0; i < 2; ++i) {
        CHECK(std::log2(ek[i] / ek[i + 1]) >= 1.8);
        CHECK(std::log2(em[i] / em[i + 1]) >= 1.8);
    }
}

TEST_CASE("canonical coefficients of the example agree with the extended-model closed forms") {
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto ab = ab_coefficients(locate_turing_fold(m, 0.9, -0.9), m);
    const auto ex = extended_model_canonical(0.0, 2.0);
    CHECK(std::abs(ab.alpha - 0.5) < 1e-12);
    CHECK(std::abs(ab.d - 0.5) < 1e-12);
    CHECK(std::abs(ab.beta - 8.0) < 1e-12);
    CHECK(std::abs(ab.alpha - ex.alpha) < 1e-12);
    CHECK(std::abs(ab.d - ex.d) < 1e-12);
    CHECK(std::abs(ab.beta - ex.beta) < 1e-12);
    CHECK(ab.constraint == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("extended model inversion reproduces (gamma, eta, d) for (alpha, beta) = (0.76, 2)") {
    const auto p = extended_from_canonical(0.76, 2.0);
    CHECK(p.gamma == doctest::Approx(-0.684).epsilon(1e-3));
    CHECK(p.eta == doctest::Approx(0.893).epsilon(1e-3));
    CHECK(p.d == doctest::Approx(0.329).epsilon(1e-3));
    const auto back = extended_model_canonical(p.gamma, p.eta);
    CHECK(back.alpha == doctest::Approx(0.76).epsilon(1e-12));
    CHECK(back.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(back.d == doctest::Approx(p.d).epsilon(1e-12));
}

TEST_CASE("extended model moves nu* to 1 - gamma") {
    for (double g : {-0.684, -0.3, 0.25}) {
        ScalarSixthOrder s;
        s.gamma = g;
        s.eta = 1.0;
        const ModelSpec m = s;
        const auto r = locate_turing_fold(m, 1.0, -1.0);
        CHECK(r.nu_star == doctest::Approx(1.0 - g).epsilon(1e-9));
    }
}

TEST_CASE("three-component RD model: audits, constraint and closed forms") {
    auto rd = make_rd_builtin("fold_turing3", {}, {0.05, 1.0, 10.0});
    const ModelSpec m = rd;
    const auto r = locate_turing_fold(m, 0.05, 0.3);
    CHECK(r.audit_passed());
    Vec u = r.u_star;
    // fold: F = 0 and F_u singular
    const auto F = rd.F(u, r.mu_star, r.nu_star);
    CHECK(F.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(rd.F_u(u, r.mu_star, r.nu_star).determinant()) < 1e-9);
    // Turing: T(k*) singular
    CHECK(std::abs(rd.T(u, r.mu_star, r.nu_star, r.k_star).determinant()) < 1e-9);
    const auto ab = ab_coefficients(r, m);
    CHECK(ab.constraint == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(ab.alpha == doctest::Approx(ab.alpha_closed).epsilon(1e-6));
    CHECK(ab.d == doctest::Approx(ab.d_closed).epsilon(1e-6));
    CHECK(ab.beta == doctest::Approx(ab.beta_closed).epsilon(1e-6));
    const auto L = landau_coefficient(r, m, 0.005);
    CHECK(L.opposite_signs);
}

TEST_CASE("opposite-sign law on randomized scalar models") {
    // F = mu u + p2 u^2 - p3 u^3, G = -(nu + gamma u) k^2 + 2 k^4 - k^6, quadratic term eta (U'')^2.
    // The fold sits at u* = p2 / (2 p3), mu* = -p2^2 / (4 p3); the Turing-fold at nu* = 1 - gamma u*.
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> P2(1.5, 3.0), P3(0.5, 1.5), ETA(-4.0, 6.0), GAM(-0.5, 0.5);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        GeneralScalarModel g = to_general(ScalarSixthOrder{});
        const double p2 = P2(rng), p3 = P3(rng);
        g.reaction.p = {0.0, 0.0, p2, -p3};
        g.b = {{ETA(rng)}};
        g.c = {GAM(rng)};
        const double us = p2 / (2 * p3), ms = -p2 * p2 / (4 * p3);
        const ModelSpec m = g;
        const auto r = locate_turing_fold(m, 1.0 - g.c[0] * us, ms, Seeds{std::nullopt, std::nullopt, Vec::Constant(1, 1.1 * us)});
        REQUIRE(r.audit_passed());
        CHECK(r.u_star(0) == doctest::Approx(us).epsilon(1e-9));
        CHECK(r.mu_star == doctest::Approx(ms).epsilon(1e-9));
        const auto L = landau_coefficient(r, m, 0.01);
        if (std::abs(L.beta) <= 0.1) continue;
        ++checked;
        CHECK(std::signbit(L.L_star) != std::signbit(L.beta));
        CHECK(std::signbit(L.L) != std::signbit(L.beta));
    }
    CHECK(checked >= 20);
}

TEST_CASE("Landau coefficient approaches L*/delta") {
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto r = locate_turing_fold(m, 0.9, -0.9);
    const auto a = landau_coefficient(r, m, 0.01), b = landau_coefficient(r, m, 0.005);
    CHECK(a.L_star == doctest::Approx(-4.0).epsilon(1e-8));
    const double ea = std::abs(a.L * 0.01 - a.L_star), eb = std::abs(b.L * 0.005 - b.L_star);
    CHECK(eb < ea);
}

}
