#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfold/models.hpp"

namespace tfold {

class BifurcationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FoldPoint {
    double mu_s = 0.0;
    double nu = 0.0;
    Vec u_s, v_s, p_s;
    bool oriented = true;  // <F_mu, p_s> > 0 achieved
};

struct TuringPoint {
    double mu_t = 0.0;
    double k_c = 0.0;
    double nu = 0.0;
    Vec u_t, v_t, p_t;
    double margin = 0.0;  // largest Re omega on the scan grid away from k_c
};

struct Seeds {
    std::optional<double> mu;
    std::optional<double> k;
    std::optional<Vec> u;
};

struct AuditItem {
    std::string name;
    std::string rule;
    double value = 0.0;
    bool pass = false;
};

struct TuringFoldReport {
    std::string model_class;  // "scalar" or "rd"
    double mu_star = 0.0, nu_star = 0.0, k_star = 0.0;
    Vec u_star;
    double residual = 0.0;
    double rho_kk = 0.0, omega_kk = 0.0;
    // scalar: u_tilde, mu_hat, k_tilde, omega_tilde, mu_tilde_s
    // rd: mu_tilde_s, omega_tilde_s, mu_hat_t, u_bar_t, omega_tilde_mu_t, k_tilde, rho_tilde
    std::map<std::string, double> expansion;
    std::map<std::string, Vec> expansion_vec;  // rd: u_tilde_s, u_tilde_t
    // derivative values and inner products that feed the coefficients
    std::map<std::string, double> q;
    Vec v_s, p_s, v_t, p_t;
    std::vector<AuditItem> audit;

    bool audit_passed() const;
    std::vector<std::string> failures() const;
};

// A_raw = a At, B_raw = b Bt, xi_canon = s xi_raw, tau_canon = t tau_raw, r_raw = rho R
struct ScaleMaps {
    double a = 1.0, b = 1.0, s = 1.0, t = 1.0, rho = 1.0;
};

struct ABCoefficients {
    std::array<double, 8> raw{};  // c1..c8
    double alpha = 0.0, d = 0.0, beta = 0.0;
    ScaleMaps maps;
    // the same triple from the closed-form expressions of the model class
    double alpha_closed = 0.0, d_closed = 0.0, beta_closed = 0.0;
    double mu_hat = 0.0;  // r-scale: mu = mu* + delta^2 mu_hat (1 - R)
    double constraint = 0.0;  // c7 b^2 / c5, equal to -1 by construction of the expansion
};

struct LandauResult {
    double delta = 0.0;
    double L = 0.0;          // full finite-delta Landau coefficient at nu = nu* - delta
    double L_star = 0.0;     // leading coefficient, L ~ L_star / delta
    double L_leading = 0.0;  // L_star / delta
    double beta = 0.0;
    bool beta_degenerate = false;
    bool opposite_signs = false;
    TuringPoint turing;
};

FoldPoint find_fold(const ModelSpec& model, double nu, const Seeds& seed = {});
TuringPoint find_turing(const ModelSpec& model, double nu, const Seeds& seeds = {});
TuringFoldReport locate_turing_fold(const ModelSpec& model, double nu_seed, double mu_seed,
                                    const Seeds& extra = {});
ABCoefficients ab_coefficients(const TuringFoldReport& report, const ModelSpec& model);
LandauResult landau_coefficient(const TuringFoldReport& report, const ModelSpec& model, double delta);

// canonical maps for any raw system with c1, c2 > 0 and c3, c5 != 0
ABCoefficients canonicalize(const std::array<double, 8>& raw);

// extended sixth-order model closed forms and their inverse
struct ExtendedCanonical {
    double alpha, d, beta;
};
ExtendedCanonical extended_model_canonical(double gamma, double eta);
struct ExtendedParams {
    double gamma, eta, d;
};
ExtendedParams extended_from_canonical(double alpha, double beta);

// leading-branch growth rate and its position for k in (0, k_max], interior local maxima only
struct BumpMax {
    double k = 0.0;
    double omega = -1e300;
    bool found = false;
};
BumpMax interior_maximum(const ModelSpec& model, const Vec& u, double mu, double nu, double k_max,
                         int samples = 800);

}  // namespace tfold
