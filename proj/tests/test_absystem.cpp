#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tfold/absystem.hpp"
#include "tfold/numerics.hpp"

using namespace tfold;

TEST_SUITE("absystem") {

TEST_CASE("Turing boundary anchor R_t(sqrt(4/5)) = 53/30 at d = 1/3") {
    CHECK(std::abs(R_t(1.0 / 3.0, std::sqrt(0.8)) - 53.0 / 30.0) < 1e-12);
}

TEST_CASE("Eckhaus ratio tends to 1/sqrt(3)") {
    CHECK(std::abs(eckhaus_ratio(1e-4) - 1.0 / std::sqrt(3.0)) < 1e-3);
    CHECK(std::abs(eckhaus_ratio(1e-8) - 1.0 / std::sqrt(3.0)) < 1e-7);
    CHECK_THROWS_AS(eckhaus_ratio(1.5), ABError);
}

TEST_CASE("plane waves solve the stationary AB equations") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> A(0.1, 3.0), K(-1.5, 1.5), R(-0.5, 3.0);
    int n = 0;
    for (int i = 0; i < 500; ++i) {
        const CanonicalAB ab(A(rng), A(rng), A(rng) * 4.0, R(rng));
        const double k = K(rng);
        const auto w = plane_wave(ab, k);
        if (!w) {
            CHECK((1 - k * k) * (1 - k * k) + ab.R - 1 < 0.0);
            continue;
        }
        ++n;
        // A'' + A - AB and alpha(d B'' + 1 - R - B^2 + beta |A|^2) for A = Abar e^{iK xi}
        const double ra = -k * k * w->A_bar + w->A_bar - w->A_bar * w->B_bar;
        const double rb = ab.alpha * (1 - ab.R - w->B_bar * w->B_bar + ab.beta * w->A_bar * w->A_bar);
        CHECK(std::abs(ra) < 1e-12);
        CHECK(std::abs(rb) < 1e-12);
    }
    CHECK(n > 100);
    CHECK_THROWS_AS(plane_wave(CanonicalAB(0.5, 0.5, 0.0, 1.0), 0.3), ABError);
    CHECK_THROWS_AS(CanonicalAB(-1.0, 0.5, 1.0), ABError);
}

TEST_CASE("periodic waves carry a neutral phase mode at k = 0") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> A(0.1, 3.0), K(-1.2, 1.2), R(0.5, 3.0);
    for (int i = 0; i < 200; ++i) {
        const CanonicalAB ab(A(rng), A(rng), A(rng), R(rng));
        const auto w = plane_wave(ab, K(rng));
        if (!w) continue;
        CHECK(std::abs(spectral_matrix(ab, *w, 0.0).determinant()) < 1e-12);
    }
}

TEST_CASE("homogeneous-state spectra match the diagonal closed forms") {
    for (double R : {-0.8, 0.0, 0.3, 0.9})
        for (bool plus : {true, false})
            for (double k : {0.0, 0.4, 1.3}) {
                const CanonicalAB ab(0.7, 0.4, 2.0, R);
                const auto h = homogeneous_state(ab, plus);
                const double s = plus ? std::sqrt(1 - R) : -std::sqrt(1 - R);
                const double l12 = 1 - s - k * k, l3 = -2 * ab.alpha * s - ab.d * ab.alpha * k * k;
                Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(spectral_matrix(ab, h, k));
                std::vector<double> got, want{l12, l12, l3};
                for (int i = 0; i < 3; ++i) {
                    CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-12);
                    got.push_back(es.eigenvalues()(i).real());
                }
                std::sort(got.begin(), got.end());
                std::sort(want.begin(), want.end());
                for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
                CHECK(std::abs(growth_rate(ab, h, k) - std::max(l12, l3)) < 1e-12);
            }
    CHECK_THROWS_AS(homogeneous_state(CanonicalAB(1, 1, 1, 1.5), true), ABError);
}

TEST_CASE("closed-form cubic growth rate matches the complex eigensolver") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> A(0.05, 5.0), K(-1.5, 1.5), R(-0.5, 3.0), kk(0.0, 4.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const CanonicalAB ab(A(rng), A(rng), A(rng), R(rng));
        const auto w = plane_wave(ab, K(rng));
        if (!w) continue;
        const double k = kk(rng);
        worst = std::max(worst, std::abs(growth_rate(ab, *w, k) - growth_rate_reference(ab, *w, k)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("cubic roots") {
    // (x - 1)(x + 2)(x - 3) = x^3 - 2x^2 - 5x + 6
    CHECK(num::cubic_max_real_part(-2, -5, 6) == doctest::Approx(3.0).epsilon(1e-13));
    // (x + 1)(x^2 - 2x + 5): roots -1, 1 +- 2i
    CHECK(num::cubic_max_real_part(-1, 3, 5) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("closed-form classes at reference points") {
    const CanonicalAB base(0.5, 0.5, 8.0, 2.0);
    CHECK(classify_closed(base, 0.0) == StabilityClass::stable);
    CHECK(classify_closed(base, 1.01) == StabilityClass::ode_unstable);
    CanonicalAB low = base;
    low.R = 0.1;
    CHECK(classify_closed(low, 0.5) == StabilityClass::nonexistent);  // R_e(0.5) = 0.4375
    CanonicalAB one = base;
    one.R = 1.0;
    CHECK(classify_closed(one, 0.6) == StabilityClass::sideband_unstable);  // R_s(0.6) = 1.512
    const CanonicalAB t(0.8, 1.0 / 3.0, 1.0, 53.0 / 30.0 - 0.01);
    CHECK(classify_closed(t, std::sqrt(0.8)) == StabilityClass::turing_unstable);
    CHECK(K_st(12.0) == doctest::Approx(0.2));
    CHECK(R_st(12.0) == doctest::Approx(145.0 / 625.0));
}

TEST_CASE("scan and closed form agree everywhere for large d") {
    BusseOptions opt;
    const auto r = busse_map(0.5, 12.0, 8.0, -1.2, 1.2, 60, -0.5, 3.0, 60, opt);
    const auto a = compare_raster(r);
    CHECK(a.disagree == 0);
}

TEST_CASE("parallel and serial rasters are identical") {
    BusseOptions par, ser;
    ser.parallel = false;
    const auto a = busse_map(0.5, 0.5, 8.0, -1.2, 1.2, 40, -0.5, 3.0, 40, par);
    const auto b = busse_map(0.5, 0.5, 8.0, -1.2, 1.2, 40, -0.5, 3.0, 40, ser);
    CHECK(a.closed == b.closed);
    CHECK(a.brute == b.brute);
    CHECK(a.max_growth == b.max_growth);
}

}
