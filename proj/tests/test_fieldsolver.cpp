#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfold/fieldsolver.hpp"

using namespace tfold;

namespace {

ABState smooth_state(const Grid1D& g) {
    ABState s;
    for (double x : g.nodes()) {
        s.A.emplace_back(0.6 + 0.2 * std::cos(x), 0.1 * std::sin(2 * x));
        s.B.push_back(0.3 + 0.15 * std::cos(x + 0.4));
    }
    return s;
}

double sup_diff(const ABState& a, const ABState& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.A.size(); ++i) {
        m = std::max(m, std::abs(a.A[i] - b.A[i]));
        m = std::max(m, std::abs(a.B[i] - b.B[i]));
    }
    return m;
}

ABState evolve(const ABRaw& p, const Grid1D& g, double dt, double T) {
    ABSolver s(p, g, dt);
    s.set_state(smooth_state(g));
    const long n = std::lround(T / dt);
    for (long i = 0; i < n; ++i) s.step();
    return s.state();
}

}  // namespace

TEST_SUITE("fieldsolver") {

TEST_CASE("ETDRK4 is fourth order on the AB system") {
    const Grid1D g{2 * std::numbers::pi, 32, Boundary::periodic};
    const ABRaw p = ABRaw::canonical(CanonicalAB(0.5, 0.5, 8.0, 0.5));
    const double T = 2.0;
    const ABState ref = evolve(p, g, 0.2 / 64, T);
    std::vector<double> err;
    for (double dt : {0.2, 0.1, 0.05}) err.push_back(sup_diff(evolve(p, g, dt, T), ref));
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double order = std::log2(err[i - 1] / err[i]);
        MESSAGE("observed order " << order);
        CHECK(order >= 3.7);
    }
}

TEST_CASE("linear modes decay exactly") {
    // c3 = c7 = c8 = 0 leaves A_tau = A'' + A, B_tau = d B''
    ABRaw p = ABRaw::canonical(CanonicalAB(1.0, 0.5, 1.0, 1.0));
    p.c[2] = p.c[6] = p.c[7] = 0.0;
    p.c[4] = p.c[5] = 0.0;
    const Grid1D g{2 * std::numbers::pi, 32, Boundary::periodic};
    ABSolver s(p, g, 0.1);
    ABState st;
    for (double x : g.nodes()) {
        st.A.emplace_back(std::cos(2 * x), 0.0);
        st.B.push_back(std::cos(3 * x));
    }
    s.set_state(st);
    for (int i = 0; i < 10; ++i) s.step();
    const auto out = s.state();
    const auto x = g.nodes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(out.A[i].real() - std::exp(-3.0) * std::cos(2 * x[i])) < 1e-12);
        CHECK(std::abs(out.B[i] - std::exp(-0.5 * 9.0) * std::cos(3 * x[i])) < 1e-12);
    }
}

TEST_CASE("plane waves are steady under the solver") {
    const CanonicalAB ab(0.5, 0.5, 8.0, 2.0);
    const double K = 0.5;
    const auto w = plane_wave(ab, K);
    REQUIRE(w);
    const Grid1D g{2 * std::numbers::pi / K * 2, 64, Boundary::periodic};
    ABState s;
    for (double x : g.nodes()) {
        s.A.push_back(w->A_bar * std::exp(cplx(0, K * x)));
        s.B.push_back(w->B_bar);
    }
    ABSolver solver(ABRaw::canonical(ab), g, 0.05);
    solver.set_state(s);
    for (int i = 0; i < 200; ++i) solver.step();
    CHECK(sup_diff(solver.state(), s) < 1e-10);
}

TEST_CASE("scalar solver keeps the homogeneous fold state") {
    ScalarSixthOrder m{-0.5, 1.0, 2.0, 0.0};
    const auto gm = to_general(m);
    const double u = 1 + std::sqrt(0.5);
    const Grid1D g{4 * std::numbers::pi, 64, Boundary::neumann};
    ScalarSolver s(gm, g, 0.01);
    s.set_state(ScalarState{std::vector<double>(64, u), 0.0});
    RunOptions opt;
    opt.t_end = 5.0;
    const auto r = s.run(opt);
    CHECK(r.status == RunStatus::completed);
    for (double v : s.state().U) CHECK(std::abs(v - u) < 1e-10);
}

TEST_CASE("invalid inputs are rejected") {
    const Grid1D g{2 * std::numbers::pi, 32, Boundary::periodic};
    ABSolver s(ABRaw::canonical(CanonicalAB()), g, 0.1);
    ABState bad;
    bad.A.resize(10);
    bad.B.resize(10);
    CHECK_THROWS(s.set_state(bad));
    CHECK_THROWS(Grid1D{-1.0, 32}.validate());
}

TEST_CASE("ramp and rms") {
    const auto f = ramp_parameter(-0.5, 0.1);
    CHECK(f(0.0) == doctest::Approx(-0.5));
    CHECK(f(10.0) == doctest::Approx(-1.5));
    CHECK(rms({3.0, -3.0, 3.0, -3.0}) == doctest::Approx(3.0));
}

}
