#include <doctest.h>

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "tfold/models.hpp"
#include "tfold/spectral.hpp"

using namespace tfold;

TEST_SUITE("models") {

TEST_CASE("example reaction and its derivatives") {
    const auto F = ScalarReaction::example();
    for (double u : {-0.7, 0.0, 0.4, 1.3})
        for (double mu : {-1.2, -0.5, 0.3}) {
            CHECK(F.F(u, mu) == doctest::Approx(mu * u + 2 * u * u - u * u * u).epsilon(1e-14));
            CHECK(F.F_u(u, mu) == doctest::Approx(mu + 4 * u - 3 * u * u).epsilon(1e-14));
            CHECK(F.F_uu(u, mu) == doctest::Approx(4 - 6 * u).epsilon(1e-14));
            CHECK(F.F_uuu(u, mu) == doctest::Approx(-6.0));
            CHECK(F.F_mu(u, mu) == doctest::Approx(u).epsilon(1e-14));
        }
}

TEST_CASE("homogeneous states of the example are 0 and 1 +- sqrt(1 + mu)") {
    ScalarSixthOrder s;
    const ModelSpec m = s;
    for (double mu : {-0.9, -0.5, -0.1}) {
        auto hs = homogeneous_states(m, mu, 1.0);
        REQUIRE(hs.size() == 3);
        std::vector<double> u;
        for (auto& h : hs) u.push_back(h.u(0));
        std::sort(u.begin(), u.end());
        CHECK(u[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(u[1] == doctest::Approx(1 - std::sqrt(1 + mu)).epsilon(1e-12));
        CHECK(u[2] == doctest::Approx(1 + std::sqrt(1 + mu)).epsilon(1e-12));
        for (auto& h : hs) {
            // F_u = mu + 4u - 3u^2 is negative at 0 and at the upper root
            const bool middle = std::abs(h.u(0) - u[1]) < 1e-9;
            CHECK(h.ode_stable == !middle);
        }
    }
}

TEST_CASE("scalar dispersion relation at the fold is -k^2 (1 - k^2)^2") {
    ScalarSixthOrder s;
    s.eta = 3.0;
    const ModelSpec m = s;
    Vec u(1);
    u << 1.0;
    for (double k : {0.0, 0.3, 0.5, 1.0, 1.7}) {
        const auto d = dispersion(m, u, k, -1.0, 1.0);
        const double want = -k * k * (1 - k * k) * (1 - k * k);
        CHECK(d.omega[0].real() == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("fold_turing3 Jacobian and characteristic polynomial") {
    const double kappa = 1.5, c = 1.0, s = 0.3;
    auto rd = make_rd_builtin("fold_turing3", {{"kappa", kappa}, {"c", c}, {"s", s}}, {0.05, 1.0, 10.0});
    Vec u(3);
    u << 0.7, -0.2, 0.4;
    const double mu = 0.2, nu = 0.1;
    Mat J(3, 3);
    J << -2 * u(0) + s * u(1), -1 + s * u(0), 1, kappa - nu, -1, 0, c, 0, -1;
    CHECK((rd.F_u(u, mu, nu) - J).cwiseAbs().maxCoeff() < 1e-12);
    const double k = 0.8;
    Mat T = J;
    for (int i = 0; i < 3; ++i) T(i, i) -= rd.D[i] * k * k;
    CHECK((rd.T(u, mu, nu, k) - T).cwiseAbs().maxCoeff() < 1e-12);
    const ModelSpec m = rd;
    for (double lam : {-0.4, 0.0, 0.9}) {
        const double det = (T - lam * Mat::Identity(3, 3)).determinant();
        CHECK(char_poly(m, lam, u, mu, nu, k) == doctest::Approx(det).epsilon(1e-12));
    }
}

TEST_CASE("malformed models are rejected") {
    GeneralScalarModel g;
    g.m = 3;
    g.a = {0.0, 2.0};
    g.a_tilde = {-1.0, 0.0, 0.0};
    g.reaction = ScalarReaction::example();
    CHECK_THROWS_AS(g.validate(), ModelError);
    CHECK_THROWS_AS(make_rd_builtin("nope", {}, {}), ModelError);
}

TEST_CASE("spectral even derivatives, periodic and Neumann") {
    for (Boundary bc : {Boundary::periodic, Boundary::neumann}) {
        Grid1D g{2.0 * M_PI, 64, bc};
        Spectral sp(g);
        const auto x = g.nodes();
        std::vector<double> u(g.N);
        for (int i = 0; i < g.N; ++i) u[i] = std::cos(3.0 * x[i]);
        for (int j = 1; j <= 3; ++j) {
            const auto d = sp.even_derivative(u, j);
            double err = 0.0;
            for (int i = 0; i < g.N; ++i) err = std::max(err, std::abs(d[i] - std::pow(-9.0, j) * u[i]));
            // roundoff grows like k_max^{2j}
            CHECK(err < 50 * DBL_EPSILON * std::pow(g.N / 2.0, 2 * j));
        }
    }
}

TEST_CASE("grid validation") {
    CHECK_THROWS(Grid1D{-1.0, 64, Boundary::periodic}.validate());
    CHECK_THROWS(Grid1D{1.0, 2, Boundary::periodic}.validate());
}

}
