#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfold/experiments.hpp"

using namespace tfold;

TEST_SUITE("experiments") {

TEST_CASE("regime tags from diagnostics") {
    RegimeThresholds th;
    RegimeDiagnostics d;
    d.variance = 1e-14;
    d.amplitude_spread = 0.1;
    d.end_stable = false;
    d.K_end = 0.9;
    CHECK(regime_tag(d, 0.9, th) == Regime::stationary_quasiperiodic);
    d.amplitude_spread = 1e-4;
    d.end_stable = true;
    d.K_end = -0.05;
    CHECK(regime_tag(d, 0.9, th) == Regime::reselected);
    d.K_end = 0.9;
    CHECK(regime_tag(d, 0.9, th) == Regime::stationary_quasiperiodic);
    d.variance = 1e-6;
    d.periodic_fraction = 0.97;
    CHECK(regime_tag(d, 0.9, th) == Regime::time_periodic);
    d.periodic_fraction = 0.4;
    CHECK(regime_tag(d, 0.9, th) == Regime::irregular);
    CHECK(to_string(Regime::stationary_quasiperiodic) == "stationary_quasiperiodic");
}

TEST_CASE("periodic fraction separates a sinusoid from noise") {
    const Grid1D g{2 * std::numbers::pi, 16, Boundary::periodic};
    ABState end;
    end.A.assign(16, cplx(1.0, 0.0));
    end.B.assign(16, 0.0);
    RegimeThresholds th;
    std::vector<double> sine, noisy;
    std::uint64_t x = 88172645463325252ull;
    for (int i = 0; i < 5000; ++i) {
        sine.push_back(1.0 + 0.01 * std::sin(0.37 * i));
        x ^= x << 13, x ^= x >> 7, x ^= x << 17;
        noisy.push_back(1.0 + 0.01 * (static_cast<double>(x % 10000) / 5000.0 - 1.0));
    }
    const auto a = regime_diagnostics(sine, end, g, th);
    const auto b = regime_diagnostics(noisy, end, g, th);
    CHECK(a.periodic_fraction > 0.9);
    CHECK(b.periodic_fraction < 0.5);
    CHECK(a.amplitude_spread < 1e-12);
    CHECK(regime_tag(a, 0.0, th) == Regime::time_periodic);
    CHECK(regime_tag(b, 0.0, th) == Regime::irregular);
}

TEST_CASE("dominant wavenumber keeps its sign on periodic domains") {
    const Grid1D g{20 * std::numbers::pi, 256, Boundary::periodic};
    for (double K : {0.3, -0.3, 1.2, -0.7}) {
        ABState s;
        for (double x : g.nodes()) s.A.push_back(0.8 * std::exp(cplx(0, K * x)) + 0.01 * std::exp(cplx(0, 0.5 * x)));
        s.B.assign(g.N, 0.0);
        CHECK(dominant_wavenumber(s, g) == doctest::Approx(K).epsilon(1e-12));
    }
}

TEST_CASE("perturbed plane wave rejects incommensurate periodic wavenumbers") {
    const Grid1D g{20 * std::numbers::pi, 256, Boundary::periodic};
    const CanonicalAB ab(0.5, 0.5, 8.0, 2.0);
    CHECK_NOTHROW(perturbed_plane_wave(ab, 0.3, g, 1e-6, 1));
    CHECK_THROWS(perturbed_plane_wave(ab, 0.3141, g, 1e-6, 1));
}

TEST_CASE("leading-order plane wave of the example") {
    CHECK(table_Bp(0.0) == doctest::Approx(0.5));
    CHECK(table_Bp(0.3) == doctest::Approx((1 - 4 * 0.09) / 2));
}

TEST_CASE("ODE tipping collapses at the fold") {
    TippingConfig c;
    c.ode = true;
    const auto t = run_tipping(c);
    CHECK(t.mu_fold == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(t.outcome == "collapsed");
    REQUIRE(t.collapse_mu);
    CHECK(std::abs(*t.collapse_mu + 1.0) < 0.02);
}

TEST_CASE("supercritical tipping is evaded for eta = 2 and 4") {
    for (double eta : {2.0, 4.0}) {
        TippingConfig c;
        c.eta = eta;
        const auto t = run_tipping(c);
        CHECK(t.outcome == "evaded");
        CHECK_FALSE(t.collapse_mu);
    }
}

TEST_CASE("AB Stokes amplitude matches the GL fixed point near onset") {
    const ModelSpec m = ScalarSixthOrder{-1.0, 1.0, 2.0, 0.0};
    const auto rep = locate_turing_fold(m, 1.0, -1.0);
    const auto r = run_gl_embedding(rep, m, 0.01, 0.05);
    CHECK(r.landau < 0.0);
    CHECK(r.deviation < 0.1);
    CHECK(std::abs(r.amplitude_ab - r.amplitude_ab_closed) < 1e-4 * r.amplitude_ab_closed);
}

}
