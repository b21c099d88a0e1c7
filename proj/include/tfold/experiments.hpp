#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfold/absystem.hpp"
#include "tfold/bifurcation.hpp"
#include "tfold/fieldsolver.hpp"

namespace tfold {

// ------------------------------------------------------------------ convergence study

struct ConvergenceConfig {
    double K = 0.0;
    double r = 4.0;
    double eta = 2.0;
    std::vector<double> deltas{0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
    int periods = 3;  // L = periods * 2 pi / (1 + sqrt(delta) K)
    int N = 64;
    double dt = 0.01;
    double t_max = 10000.0;
};

struct ConvergenceRow {
    double delta = 0.0;
    double norm_diff = 0.0;  // RMS of U_p - U_AB over the grid
    double exponent = 0.0;   // against the previous delta (the first row uses the second)
    std::string outcome;     // "steady", "not_converged", "collapsed", "blowup"
    double t_end = 0.0;
};

// leading-order plane wave of the example's raw AB system: B_p = (1 - 4K^2)/2
double table_Bp(double K);
double table_Ap(double K, double r, double eta);

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& cfg);

// ------------------------------------------------------------------ tipping

struct TippingConfig {
    double eta = 2.0;
    double gamma = 0.0;
    double delta = 0.6;  // nu = 1 - delta
    double mu0 = -0.874;
    std::optional<double> rate;  // default delta^2 / 4000
    double t_end = 2000.0;
    double L = 4.0 * 3.14159265358979323846;
    int N = 64;
    double dt = 0.01;
    double noise = 1e-3;
    double background = 1e-10;  // re-added at every sample so the pattern seed never underflows
    std::uint64_t seed = 1;
    bool ode = false;
    double sample_every = 1.0;
};

struct TippingTrace {
    std::vector<std::pair<double, double>> samples;  // (mu, RMS of U)
    std::string outcome;                              // evaded, collapsed, transitioned, blowup
    std::optional<double> collapse_mu;
    double mu_fold = -1.0;
};

TippingTrace run_tipping(const TippingConfig& cfg);

// ------------------------------------------------------------------ AB dynamics

struct ABRunConfig {
    CanonicalAB ab{0.5, 0.5, 8.0, 2.0};
    double K0 = 1.01;
    Boundary bc = Boundary::periodic;
    double L = 0.0;  // 0 selects the default of each experiment
    int N = 2048;
    double dt = 0.05;
    double t_max = 2000.0;
    double noise = 1e-6;
    std::uint64_t seed = 7;
    double sample_every = 1.0;
};

// plane wave on the grid plus seeded band-limited noise
ABState perturbed_plane_wave(const CanonicalAB& ab, double K, const Grid1D& grid, double noise, std::uint64_t seed);

// dominant modulation wavenumber of A from its spectral peak
double dominant_wavenumber(const ABState& s, const Grid1D& grid);

struct ReselectionResult {
    bool steady = false;
    RunStatus status = RunStatus::completed;
    double K_end = 0.0;
    StabilityClass end_class = StabilityClass::nonexistent;
    bool end_in_stable = false;
    std::vector<std::pair<double, double>> norm_trace;  // (tau, RMS |A|)
    ABState final;
    Grid1D grid;
};

ReselectionResult run_reselection(const ABRunConfig& cfg);

enum class Regime { stationary_quasiperiodic, time_periodic, irregular, reselected, blowup };
std::string to_string(Regime r);

struct RegimeThresholds {
    double window_fraction = 0.2;
    double stationary_variance = 1e-10;
    double periodic_fraction = 0.9;
    double uniform_tolerance = 1e-2;  // relative spread of |A| for a plane wave
};

struct RegimeDiagnostics {
    double variance = 0.0;
    double periodic_fraction = 0.0;
    int spatial_peaks = 0;
    double amplitude_spread = 0.0;
    double K_end = 0.0;
    bool end_stable = false;  // closed-form class of the plane wave at K_end
};

struct RegimeResult {
    double alpha = 0.0;
    Regime tag = Regime::irregular;
    RegimeDiagnostics diag;
    RunStatus status = RunStatus::completed;
    std::vector<std::pair<double, double>> norm_trace;
};

struct RegimeConfig {
    double d = 1.0 / 3.0;
    double beta = 1.0;
    double K0 = 0.894427190999915860;  // sqrt(4/5)
    double R_offset = -0.01;           // R = R_t(K0) + R_offset
    std::vector<double> alphas{0.8, 0.7745, 0.758, 0.756, 0.7};
    Boundary bc = Boundary::periodic;
    double L = 0.0;  // default 200 pi / K0
    int N = 1024;
    double dt = 0.05;
    double t_max = 5000.0;
    double noise = 1e-6;
    std::uint64_t seed = 11;
    double sample_every = 0.5;
    RegimeThresholds thresholds;
};

RegimeDiagnostics regime_diagnostics(const std::vector<double>& series, const ABState& end, const Grid1D& grid,
                                     const RegimeThresholds& th);
Regime regime_tag(const RegimeDiagnostics& d, double K0, const RegimeThresholds& th);
std::vector<RegimeResult> run_regime_scan(const RegimeConfig& cfg);

// ------------------------------------------------------------------ model-level comparisons

struct GLEmbeddingResult {
    double delta = 0.0;
    double R = 0.0;
    double amplitude_ab = 0.0;        // U-amplitude of the settled Stokes wave from the AB system
    double amplitude_ab_closed = 0.0; // the same from sqrt(R / beta)
    double amplitude_gl = 0.0;        // U-amplitude of the GL fixed point
    double deviation = 0.0;           // relative
    double landau = 0.0;
    double mu = 0.0, mu_t = 0.0;
};

GLEmbeddingResult run_gl_embedding(const TuringFoldReport& report, const ModelSpec& model, double delta,
                                   double R_small, double t_max = 200.0);

struct ChaosPairConfig {
    double alpha = 0.76;
    double beta = 2.0;
    double delta = 0.01;
    double K = 0.894427190999915860;
    double R_offset = -0.01;
    double L_xi = 0.0;  // default 200 pi / K
    int N_ab = 1024;
    int N_pde = 4096;
    double dt_ab = 0.05;
    double dt_pde = 0.01;
    double tau_max = 50.0;
    double sample_every = 1.0;
};

struct ChaosPairResult {
    double gamma = 0.0, eta = 0.0, d = 0.0;
    double nu = 0.0, mu = 0.0;
    std::vector<std::pair<double, double>> ab_trace;   // (tau, RMS |A|)
    std::vector<std::pair<double, double>> pde_trace;  // (tau, RMS (U - u*) / delta)
    ABState ab_final;
    ScalarState pde_final;
    std::vector<double> u_ab_final;  // U_AB on the PDE grid
    Grid1D ab_grid, pde_grid;
    RunStatus ab_status = RunStatus::completed, pde_status = RunStatus::completed;
};

ChaosPairResult run_underlying_chaos(const ChaosPairConfig& cfg);

}  // namespace tfold
