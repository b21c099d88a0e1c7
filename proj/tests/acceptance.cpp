// Acceptance checks: one PASS/FAIL line per criterion.
// usage: acceptance [--only N]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tfold/absystem.hpp"
#include "tfold/bifurcation.hpp"
#include "tfold/experiments.hpp"
#include "tfold/fieldsolver.hpp"

using namespace tfold;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

// ---------------------------------------------------------------- tolerances
constexpr double kAnchorTol = 1e-12;
constexpr double kCoeffTol = 1e-12;
constexpr int kRandomModels = 20;
constexpr double kBetaFloor = 0.1;
constexpr double kNormRelTol = 0.15;
constexpr double kExponentTol = 0.08;
constexpr double kExponentLimitTol = 0.15;
constexpr double kEckhausTol = 1e-3;
constexpr int kRaster = 200;
constexpr double kMaxDisagree = 0.01;
constexpr double kFoldTol = 0.02;
constexpr double kResidualTol = 1e-12;
constexpr double kDetTol = 1e-12;
constexpr double kSpectrumTol = 1e-12;
constexpr double kEtdOrder = 3.7;
constexpr double kExpansionOrder = 1.8;

Outcome turing_anchor() {
    Outcome o;
    const double v = R_t(1.0 / 3.0, std::sqrt(0.8));
    o.detail << "R_t = " << v << ", |R_t - 53/30| = " << std::abs(v - 53.0 / 30.0);
    o.require(std::abs(v - 53.0 / 30.0) < kAnchorTol, "anchor");
    return o;
}

Outcome coefficient_pipeline() {
    Outcome o;
    ScalarSixthOrder s;
    s.eta = 2.0;
    const ModelSpec m = s;
    const auto ab = ab_coefficients(locate_turing_fold(m, 0.9, -0.9), m);
    const auto ex = extended_model_canonical(0.0, 2.0);
    o.detail.precision(15);
    o.detail << "general (" << ab.alpha << ", " << ab.d << ", " << ab.beta << "), extended (" << ex.alpha << ", "
             << ex.d << ", " << ex.beta << ")";
    o.require(std::abs(ab.alpha - 0.5) < kCoeffTol && std::abs(ab.d - 0.5) < kCoeffTol &&
                  std::abs(ab.beta - 8.0) < kCoeffTol,
              "general path");
    o.require(std::abs(ab.alpha - ex.alpha) < kCoeffTol && std::abs(ab.d - ex.d) < kCoeffTol &&
                  std::abs(ab.beta - ex.beta) < kCoeffTol,
              "paths differ");
    return o;
}

Outcome opposite_signs() {
    // F = mu u + p2 u^2 - p3 u^3, linear symbol -(nu + gamma u) k^2 + 2k^4 - k^6, quadratic term eta (U'')^2
    Outcome o;
    std::mt19937_64 rng(7031);
    std::uniform_real_distribution<double> P2(1.5, 3.0), P3(0.5, 1.5), ETA(-4.0, 6.0), GAM(-0.5, 0.5);
    int checked = 0, agree = 0, tried = 0;
    for (; tried < 200 && checked < 3 * kRandomModels; ++tried) {
        GeneralScalarModel g = to_general(ScalarSixthOrder{});
        const double p2 = P2(rng), p3 = P3(rng);
        g.reaction.p = {0.0, 0.0, p2, -p3};
        g.b = {{ETA(rng)}};
        g.c = {GAM(rng)};
        const double us = p2 / (2 * p3), ms = -p2 * p2 / (4 * p3);
        const ModelSpec m = g;
        try {
            const auto r = locate_turing_fold(m, 1.0 - g.c[0] * us, ms,
                                              Seeds{std::nullopt, std::nullopt, Vec::Constant(1, 1.1 * us)});
            if (!r.audit_passed()) continue;
            const auto L = landau_coefficient(r, m, 0.01);
            if (std::abs(L.beta) <= kBetaFloor) continue;
            ++checked;
            if (std::signbit(L.L_star) != std::signbit(L.beta)) ++agree;
        } catch (const std::exception&) {
        }
    }
    o.detail << agree << "/" << checked << " models with opposite signs (" << tried << " drawn)";
    o.require(checked >= kRandomModels, "too few admissible models");
    o.require(agree == checked, "sign law violated");
    return o;
}

Outcome table_reproduction() {
    struct Ref {
        double K, norm;
        std::vector<double> exps;  // rows 0.06 .. 0.20
        double limit;
    };
    const std::vector<Ref> refs{
        {0.0, 0.044, {1.954, 1.934, 1.920, 1.910, 1.904, 1.902, 1.905, 1.912}, 2.0},
        {0.1, 0.044, {1.806, 1.837, 1.852, 1.856, 1.861, 1.863, 1.868, 1.874}, -1.0},
        {0.3, 0.061, {1.476, 1.491, 1.503, 1.516, 1.533, 1.550, 1.564, 1.593}, 1.5},
    };
    Outcome o;
    for (const auto& ref : refs) {
        ConvergenceConfig c;
        c.K = ref.K;
        const auto rows = run_convergence(c);
        double worst = 0.0, norm = 0.0;
        for (std::size_t i = 2; i < rows.size(); ++i) worst = std::max(worst, std::abs(rows[i].exponent - ref.exps[i - 2]));
        for (const auto& r : rows)
            if (std::abs(r.delta - 0.10) < 1e-12) norm = r.norm_diff;
        o.detail << " K=" << ref.K << ": norm(0.1)=" << norm << " max|de|=" << worst << " e0=" << rows[0].exponent;
        o.require(std::abs(norm - ref.norm) <= kNormRelTol * ref.norm, "norm at K=" + std::to_string(ref.K));
        o.require(worst <= kExponentTol, "exponents at K=" + std::to_string(ref.K));
        if (ref.limit > 0.0)
            o.require(std::abs(rows[0].exponent - ref.limit) <= kExponentLimitTol, "limit at K=" + std::to_string(ref.K));
        for (const auto& r : rows) o.require(r.outcome == "steady", "run did not settle");
    }
    return o;
}

Outcome eckhaus() {
    Outcome o;
    const double v = eckhaus_ratio(1e-4);
    o.detail << "K_s/K_e = " << v << ", 1/sqrt(3) = " << 1.0 / std::sqrt(3.0);
    o.require(std::abs(v - 1.0 / std::sqrt(3.0)) < kEckhausTol, "ratio");
    return o;
}

Outcome oracle_equivalence() {
    struct Pair {
        double alpha, d, beta;
    };
    const std::vector<Pair> pairs{{0.5, 0.5, 8.0}, {0.8, 1.0 / 3.0, 1.0}, {0.5, 0.1, 8.0}};
    Outcome o;
    for (const auto& p : pairs) {
        const auto r = busse_map(p.alpha, p.d, p.beta, -1.2, 1.2, kRaster, -0.5, 3.0, kRaster);
        const auto a = compare_raster(r);
        const double frac = static_cast<double>(a.disagree) / a.cells;
        o.detail << " (" << p.alpha << "," << p.d << "): " << a.disagree << " disagree (" << 100 * frac << "%), "
                 << a.disagree_off_boundary << " off-boundary;";
        o.require(frac <= kMaxDisagree, "disagreement above 1%");
        o.require(a.disagree_off_boundary == 0, "disagreement away from boundaries");
    }
    return o;
}

Outcome tipping() {
    Outcome o;
    TippingConfig sup;
    const auto a = run_tipping(sup);
    TippingConfig sub;
    sub.eta = -1.0;
    const auto b = run_tipping(sub);
    TippingConfig ode;
    ode.ode = true;
    const auto c = run_tipping(ode);
    o.detail << "eta=2 " << a.outcome << "; eta=-1 " << b.outcome;
    if (b.collapse_mu) o.detail << " at mu=" << *b.collapse_mu;
    o.detail << "; ODE " << c.outcome;
    if (c.collapse_mu) o.detail << " at mu=" << *c.collapse_mu;
    o.require(a.outcome == "evaded", "eta=2 not evaded");
    o.require(b.outcome == "collapsed" && b.collapse_mu && *b.collapse_mu > -1.0, "eta=-1");
    o.require(c.outcome == "collapsed" && c.collapse_mu && std::abs(*c.collapse_mu + 1.0) <= kFoldTol, "ODE");
    return o;
}

Outcome regime_scan() {
    Outcome o;
    RegimeConfig c;
    c.alphas = {0.8, 0.758, 0.756, 0.7};
    const auto res = run_regime_scan(c);
    bool irregular = false;
    for (const auto& r : res) {
        o.detail << " a=" << r.alpha << ":" << to_string(r.tag);
        if (r.alpha > 0.75 && r.alpha < 0.76 && r.tag == Regime::irregular) irregular = true;
    }
    o.require(res.front().tag == Regime::stationary_quasiperiodic, "alpha=0.8");
    o.require(res.back().tag == Regime::reselected, "alpha=0.7");
    o.require(irregular, "no irregular run in (0.75, 0.76)");
    return o;
}

// Turing point of the example at fixed nu: closed-form maximiser in k, bisection in mu
std::pair<double, double> example_turing(double nu) {
    const double k2 = (4.0 + std::sqrt(16.0 - 12.0 * nu)) / 6.0;
    auto wmax = [&](double mu) {
        const double u = 1.0 + std::sqrt(1.0 + mu);
        return mu + 4 * u - 3 * u * u - nu * k2 + 2 * k2 * k2 - k2 * k2 * k2;
    };
    double lo = -1.0, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (wmax(mid) > 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), std::sqrt(k2)};
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> A(0.1, 3.0), K(-1.2, 1.2), R(-0.5, 3.0);
    double res = 0.0, det = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const CanonicalAB ab(A(rng), A(rng), 4.0 * A(rng), R(rng));
        const double k = K(rng);
        const auto w = plane_wave(ab, k);
        if (!w) continue;
        res = std::max(res, std::abs(-k * k * w->A_bar + w->A_bar - w->A_bar * w->B_bar));
        res = std::max(res, std::abs(1 - ab.R - w->B_bar * w->B_bar + ab.beta * w->A_bar * w->A_bar));
        det = std::max(det, std::abs(spectral_matrix(ab, *w, 0.0).determinant()));
    }
    double spec = 0.0;
    for (double Rv : {-0.8, 0.0, 0.5, 0.95})
        for (bool plus : {true, false})
            for (double k : {0.0, 0.3, 0.9, 1.7}) {
                const CanonicalAB ab(0.7, 0.4, 2.0, Rv);
                const double s = plus ? std::sqrt(1 - Rv) : -std::sqrt(1 - Rv);
                std::vector<double> want{1 - s - k * k, 1 - s - k * k, -2 * ab.alpha * s - ab.d * ab.alpha * k * k};
                Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(spectral_matrix(ab, homogeneous_state(ab, plus), k));
                std::vector<double> got;
                for (int i = 0; i < 3; ++i) {
                    got.push_back(es.eigenvalues()(i).real());
                    spec = std::max(spec, std::abs(es.eigenvalues()(i).imag()));
                }
                std::sort(got.begin(), got.end());
                std::sort(want.begin(), want.end());
                for (int i = 0; i < 3; ++i) spec = std::max(spec, std::abs(got[i] - want[i]));
            }
    // ETDRK4 order: dt halving against a fine reference
    const Grid1D g{2 * M_PI, 32, Boundary::periodic};
    const ABRaw p = ABRaw::canonical(CanonicalAB(0.5, 0.5, 8.0, 0.5));
    auto evolve = [&](double dt) {
        ABSolver s(p, g, dt);
        ABState st;
        for (double x : g.nodes()) {
            st.A.emplace_back(0.6 + 0.2 * std::cos(x), 0.1 * std::sin(2 * x));
            st.B.push_back(0.3 + 0.15 * std::cos(x + 0.4));
        }
        s.set_state(st);
        for (long i = 0, n = std::lround(2.0 / dt); i < n; ++i) s.step();
        return s.state();
    };
    const auto ref = evolve(0.2 / 64);
    auto err = [&](const ABState& s) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.A.size(); ++i)
            m = std::max({m, std::abs(s.A[i] - ref.A[i]), std::abs(s.B[i] - ref.B[i])});
        return m;
    };
    const double e1 = err(evolve(0.2)), e2 = err(evolve(0.1)), e3 = err(evolve(0.05));
    const double ord = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    // expansion order under delta halving
    ScalarSixthOrder s6;
    s6.eta = 2.0;
    const ModelSpec m = s6;
    const auto r = locate_turing_fold(m, 0.9, -0.9);
    const double kt = r.expansion.at("k_tilde"), mh = r.expansion.at("mu_hat");
    std::vector<double> ek, em;
    for (double d : {0.04, 0.02, 0.01}) {
        const auto [mu, k] = example_turing(1.0 - d);
        ek.push_back(std::abs(k - (r.k_star + kt * d)));
        em.push_back(std::abs(mu - (r.mu_star + mh * d * d)));
    }
    const double eord = std::min({std::log2(ek[0] / ek[1]), std::log2(ek[1] / ek[2]), std::log2(em[0] / em[1]),
                                  std::log2(em[1] / em[2])});
    o.detail << "residual " << res << ", det " << det << ", spectra " << spec << ", ETDRK4 order " << ord
             << ", expansion order " << eord;
    o.require(res < kResidualTol, "plane-wave residual");
    o.require(det < kDetTol, "det at k=0");
    o.require(spec < kSpectrumTol, "homogeneous spectra");
    o.require(ord >= kEtdOrder, "ETDRK4 order");
    o.require(eord >= kExpansionOrder, "expansion order");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
        {"turing boundary anchor", turing_anchor},
        {"coefficient pipeline", coefficient_pipeline},
        {"opposite-sign law", opposite_signs},
        {"convergence table", table_reproduction},
        {"eckhaus ratio", eckhaus},
        {"closed form vs eigenvalue scan", oracle_equivalence},
        {"tipping scenarios", tipping},
        {"regime scan", regime_scan},
        {"property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " threw: " << e.what();
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s  %zu  %-32s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first,
                    o.detail.str().c_str(), sec);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
