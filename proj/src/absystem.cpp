#include "tfold/absystem.hpp"

#include <algorithm>
#include <cmath>

#include "tfold/numerics.hpp"

namespace tfold {

namespace {
constexpr double kProximity = 1e-6;
}

CanonicalAB::CanonicalAB(double alpha_, double d_, double beta_, double R_) : alpha(alpha_), d(d_), beta(beta_), R(R_) {
    if (!(alpha > 0.0)) throw ABError("alpha must be positive");
    if (!(d > 0.0)) throw ABError("d must be positive");
}

std::string to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::nonexistent: return "nonexistent";
        case StabilityClass::stable: return "stable";
        case StabilityClass::ode_unstable: return "ode_unstable";
        case StabilityClass::sideband_unstable: return "sideband_unstable";
        case StabilityClass::turing_unstable: return "turing_unstable";
    }
    return "unknown";
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::homogeneous_plus: return "homogeneous_plus";
        case Branch::homogeneous_minus: return "homogeneous_minus";
        case Branch::periodic: return "periodic";
    }
    return "unknown";
}

double R_e(double K) {
    const double b = 1.0 - K * K;
    return 1.0 - b * b;
}

double R_s(double K) {
    const double K2 = K * K;
    return -5.0 * K2 * K2 + 6.0 * K2;
}

double R_t(double d, double K) {
    const double K2 = K * K;
    const double s = 1.0 + (2.0 * d - 1.0) * K2;
    return 1.0 + s * s / (2.0 * d) - (1.0 - K2) * (1.0 - K2);
}

double K_st(double d) { return 1.0 / std::sqrt(2.0 * d + 1.0); }

double R_st(double d) { return (12.0 * d + 1.0) / ((2.0 * d + 1.0) * (2.0 * d + 1.0)); }

std::optional<PlaneWaveState> plane_wave(const CanonicalAB& ab, double K) {
    if (ab.beta == 0.0) throw ABError("beta = 0: the plane-wave family is degenerate");
    const double B = 1.0 - K * K;
    const double A2 = (B * B + ab.R - 1.0) / ab.beta;
    if (A2 < 0.0) return std::nullopt;
    return PlaneWaveState{K, ab.R, std::sqrt(A2), B, Branch::periodic};
}

PlaneWaveState homogeneous_state(const CanonicalAB& ab, bool plus) {
    if (ab.R > 1.0) throw ABError("homogeneous states require R <= 1");
    const double s = std::sqrt(1.0 - ab.R);
    return PlaneWaveState{0.0, ab.R, 0.0, plus ? s : -s, plus ? Branch::homogeneous_plus : Branch::homogeneous_minus};
}

Boundaries boundary_curves(const CanonicalAB& ab, double K) {
    Boundaries b;
    b.R_e = R_e(K);
    b.R_s = R_s(K);
    b.exists_turing = K * K > 1.0 / (2.0 * ab.d + 1.0);
    if (b.exists_turing) b.R_t = R_t(ab.d, K);
    return b;
}

Eigen::Matrix3cd spectral_matrix(const CanonicalAB& ab, const PlaneWaveState& w, double k) {
    const cplx I(0.0, 1.0);
    const double K = w.branch == Branch::periodic ? w.K : 0.0;
    const double a = 1.0 - K * K - w.B_bar - k * k;
    Eigen::Matrix3cd M;
    M << a, -2.0 * I * k * K, -w.A_bar,
         2.0 * I * k * K, a, 0.0,
         2.0 * ab.alpha * ab.beta * w.A_bar, 0.0, -2.0 * ab.alpha * w.B_bar - ab.d * ab.alpha * k * k;
    return M;
}

Eigen::Matrix3d spectral_matrix_real(const CanonicalAB& ab, const PlaneWaveState& w, double k) {
    const double K = w.branch == Branch::periodic ? w.K : 0.0;
    const double a = 1.0 - K * K - w.B_bar - k * k;
    Eigen::Matrix3d M;
    M << a, 2.0 * k * K, -w.A_bar,
         2.0 * k * K, a, 0.0,
         2.0 * ab.alpha * ab.beta * w.A_bar, 0.0, -2.0 * ab.alpha * w.B_bar - ab.d * ab.alpha * k * k;
    return M;
}

double growth_rate(const CanonicalAB& ab, const PlaneWaveState& w, double k) {
    // characteristic polynomial of the real form [[a, c, -A], [c, a, 0], [e, 0, f]]
    const double K = w.branch == Branch::periodic ? w.K : 0.0;
    const double a = 1.0 - K * K - w.B_bar - k * k;
    const double c = 2.0 * k * K;
    const double e = 2.0 * ab.alpha * ab.beta * w.A_bar;
    const double f = -2.0 * ab.alpha * w.B_bar - ab.d * ab.alpha * k * k;
    // block triangular when A vanishes; avoids the double root a +- c at k = 0
    if (w.A_bar == 0.0) return std::max({a + std::abs(c), f});
    const double tr = 2.0 * a + f;
    const double m2 = a * a - c * c + 2.0 * a * f + w.A_bar * e;
    const double det = (a * a - c * c) * f + a * w.A_bar * e;
    return num::cubic_max_real_part(-tr, m2, -det);
}

double growth_rate_reference(const CanonicalAB& ab, const PlaneWaveState& w, double k) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(spectral_matrix(ab, w, k), false);
    return es.eigenvalues().real().maxCoeff();
}

StabilityClass classify_closed(const CanonicalAB& ab, double K) {
    if (!plane_wave(ab, K)) return StabilityClass::nonexistent;
    if (ab.beta < 0.0 || std::abs(K) >= 1.0) return StabilityClass::ode_unstable;
    if (ab.R < R_s(K)) return StabilityClass::sideband_unstable;
    if (K * K > 1.0 / (2.0 * ab.d + 1.0) && ab.R < R_t(ab.d, K)) return StabilityClass::turing_unstable;
    return StabilityClass::stable;
}

ScanResult classify_scan(const CanonicalAB& ab, double K, const ScanOptions& opt) {
    ScanResult out;
    const auto w = plane_wave(ab, K);
    if (!w) {
        out.cls = StabilityClass::nonexistent;
        out.max_growth = 0.0;
        return out;
    }
    // k = 0: phase mode is exactly neutral, the amplitude/B block carries the ODE spectrum
    const double p = 2.0 * ab.alpha * w->B_bar, q = 2.0 * ab.alpha * ab.beta * w->A_bar * w->A_bar;
    const double disc = p * p / 4.0 - q;
    const double ode = disc >= 0.0 ? -p / 2.0 + std::sqrt(disc) : -p / 2.0;
    out.max_growth = ode;
    out.k_critical = 0.0;

    double kc = 0.0;
    const double K2 = K * K;
    if (K2 > 1.0 / (2.0 * ab.d + 1.0)) kc = std::sqrt(((2.0 * ab.d + 1.0) * K2 - 1.0) / ab.d);
    const double kmax = 3.0 * std::max({1.0, std::abs(K), kc});
    bool first_unstable = false, any_unstable = false;
    for (int i = 1; i <= opt.points; ++i) {
        const double k = kmax * i / opt.points;
        const double g = opt.reference ? growth_rate_reference(ab, *w, k) : growth_rate(ab, *w, k);
        if (g > out.max_growth) {
            out.max_growth = g;
            out.k_critical = k;
        }
        if (g > opt.tol) {
            any_unstable = true;
            if (i == 1) first_unstable = true;
        }
    }
    if (ode > opt.tol)
        out.cls = StabilityClass::ode_unstable;
    else if (first_unstable)
        out.cls = StabilityClass::sideband_unstable;
    else if (any_unstable)
        out.cls = StabilityClass::turing_unstable;
    else
        out.cls = StabilityClass::stable;
    return out;
}

StabilityReport classify(const CanonicalAB& ab, double K, const ScanOptions& opt) {
    StabilityReport rep;
    rep.cls = classify_closed(ab, K);
    rep.boundaries = boundary_curves(ab, K);
    const auto scan = classify_scan(ab, K, opt);
    rep.brute = scan.cls;
    rep.max_growth = scan.max_growth;
    rep.k_critical = scan.k_critical;
    const auto& b = rep.boundaries;
    rep.near_boundary = std::abs(ab.R - b.R_e) < kProximity || std::abs(ab.R - b.R_s) < kProximity ||
                        (b.R_t && std::abs(ab.R - *b.R_t) < kProximity) || std::abs(std::abs(K) - 1.0) < kProximity;
    return rep;
}

BusseRaster busse_map(double alpha, double d, double beta, double Kmin, double Kmax, int nK, double Rmin, double Rmax,
                      int nR, const BusseOptions& opt) {
    if (nK < 2 || nR < 2) throw ABError("raster needs at least two points per axis");
    CanonicalAB base(alpha, d, beta);
    BusseRaster r;
    r.alpha = alpha;
    r.d = d;
    r.beta = beta;
    r.K.resize(nK);
    r.R.resize(nR);
    for (int i = 0; i < nK; ++i) r.K[i] = Kmin + (Kmax - Kmin) * i / (nK - 1);
    for (int j = 0; j < nR; ++j) r.R[j] = Rmin + (Rmax - Rmin) * j / (nR - 1);
    const std::size_t cells = static_cast<std::size_t>(nK) * nR;
    r.closed.assign(cells, StabilityClass::nonexistent);
    r.brute.assign(cells, StabilityClass::nonexistent);
    r.max_growth.assign(cells, 0.0);

    auto row = [&](int j) {
        CanonicalAB ab = base;
        ab.R = r.R[j];
        for (int i = 0; i < nK; ++i) {
            const std::size_t c = static_cast<std::size_t>(j) * nK + i;
            r.closed[c] = classify_closed(ab, r.K[i]);
            if (opt.brute) {
                const auto s = classify_scan(ab, r.K[i], opt.scan);
                r.brute[c] = s.cls;
                r.max_growth[c] = s.max_growth;
            }
        }
    };
    if (opt.parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < nR; ++j) row(j);
    } else {
        for (int j = 0; j < nR; ++j) row(j);
    }
    return r;
}

RasterAgreement compare_raster(const BusseRaster& r) {
    RasterAgreement a;
    const int nK = r.nK(), nR = r.nR();
    a.cells = nK * nR;
    for (int j = 0; j < nR; ++j) {
        for (int i = 0; i < nK; ++i) {
            const auto c = r.closed[j * nK + i];
            if (c == r.brute[j * nK + i]) continue;
            ++a.disagree;
            bool edge = false;
            for (int dj = -1; dj <= 1 && !edge; ++dj)
                for (int di = -1; di <= 1 && !edge; ++di) {
                    const int jj = j + dj, ii = i + di;
                    if (jj < 0 || jj >= nR || ii < 0 || ii >= nK) continue;
                    if (r.closed[jj * nK + ii] != c) edge = true;
                }
            if (!edge) ++a.disagree_off_boundary;
        }
    }
    return a;
}

double eckhaus_ratio(double R) {
    if (!(R > 0.0 && R < 1.0)) throw ABError("eckhaus_ratio needs 0 < R < 1");
    // rationalised forms avoid cancellation for small R
    const double Ke2 = R / (1.0 + std::sqrt(1.0 - R));
    const double Ks2 = 2.0 * R / (6.0 + std::sqrt(36.0 - 20.0 * R));
    return std::sqrt(Ks2 / Ke2);
}

}  // namespace tfold
