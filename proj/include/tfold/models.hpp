#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace tfold {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

enum class Boundary { periodic, neumann };

struct Grid1D {
    double L = 2.0 * 3.14159265358979323846;
    int N = 64;
    Boundary bc = Boundary::periodic;

    // periodic: x_j = jL/N; neumann: cell centres (j + 1/2)L/N
    std::vector<double> nodes() const;
    void validate() const;
};

// F(u; mu) = sum_i p_i u^i + mu * sum_i q_i u^i
struct ScalarReaction {
    std::vector<double> p;
    std::vector<double> q;

    double F(double u, double mu) const;
    double F_u(double u, double mu) const;
    double F_uu(double u, double mu) const;
    double F_uuu(double u, double mu) const;
    double F_mu(double u, double mu) const;
    double F_umu(double u, double mu) const;

    // linear-in-u coefficient at u = 0, used as the stiff part of time stepping
    double linear_coefficient(double mu) const;

    static ScalarReaction example();  // mu u + 2u^2 - u^3
};

struct ScalarSixthOrder {
    double mu = -1.0;
    double nu = 1.0;
    double eta = 0.0;
    double gamma = 0.0;
};

// U_t = F(U; mu) + sum_j (a_j - nu at_j + c_j U) d^{2j} U + sum_{j<=l} b_jl d^{2j}U d^{2l}U
struct GeneralScalarModel {
    int m = 3;
    std::vector<double> a;        // a_1..a_m
    std::vector<double> a_tilde;  // at_1..at_m
    std::vector<std::vector<double>> b;  // b[j-1][l-1], only j <= l read
    std::vector<double> c;        // coefficients of U d^{2j} U, may be shorter than m
    ScalarReaction reaction;
    double mu = 0.0;
    double nu = 0.0;
    double nu_lo = -1e300;
    double nu_hi = 1e300;
    double k_scan_max = 4.0;

    int nb() const { return (m - 1) / 2; }
    double bcoef(int j, int l) const;
    double ccoef(int j) const;
    double lin(int j, double nu_) const { return a[j - 1] - nu_ * a_tilde[j - 1]; }

    // linear symbol about a homogeneous state u: G(u; k, nu) = sum (lin_j + c_j u)(-k^2)^j
    double G(double u, double k, double nu_) const;
    double G_k(double u, double k, double nu_) const;
    double G_kk(double u, double k, double nu_) const;
    double G_nu(double k) const;
    double G_knu(double k) const;
    double G_u(double k) const;
    double G_ku(double k) const;

    // quadratic cross-term coefficient from the b table (symmetrised)
    double P(double k1, double k2) const;
    // full quadratic symbol: F_uu + P(k1,k2) + sum c_j((-k1^2)^j + (-k2^2)^j)
    double S(double Fuu, double k1, double k2) const;

    void validate() const;
    bool well_posed(double nu_) const;
};

GeneralScalarModel to_general(const ScalarSixthOrder& s);

// one polynomial term coef * mu^pm * nu^pn * prod_j u_j^e_j in component `comp`
struct Monomial {
    int comp = 0;
    double coef = 0.0;
    int pm = 0;
    int pn = 0;
    std::vector<int> e;
};

struct RDModel {
    int n = 3;
    std::vector<double> D;
    std::vector<Monomial> terms;
    double mu = 0.0;
    double nu = 0.0;
    double k_scan_max = 5.0;
    std::string name = "polynomial";

    Vec F(const Vec& u, double mu_, double nu_) const;
    Mat F_u(const Vec& u, double mu_, double nu_) const;
    Vec F_uu(const Vec& u, double mu_, double nu_, const Vec& v, const Vec& w) const;
    Vec F_uuu(const Vec& u, double mu_, double nu_, const Vec& v, const Vec& w, const Vec& z) const;
    Vec F_mu(const Vec& u, double mu_, double nu_) const;
    Vec F_nu(const Vec& u, double mu_, double nu_) const;
    Mat F_umu(const Vec& u, double mu_, double nu_) const;
    Mat F_unu(const Vec& u, double mu_, double nu_) const;
    Vec F_mumu(const Vec& u, double mu_, double nu_) const;
    Vec F_munu(const Vec& u, double mu_, double nu_) const;
    Vec F_nunu(const Vec& u, double mu_, double nu_) const;

    // generic partial derivative of component i; du lists u indices (with repetition)
    double partial(int i, const Vec& u, double mu_, double nu_, const std::vector<int>& du, int dmu,
                   int dnu) const;

    Mat T(const Vec& u, double mu_, double nu_, double k) const;
    void validate() const;
};

// Built-in RD reactions.
// "scalar_lift": first component carries mu u + 2u^2 - u^3, the others relax linearly.
// "fold_turing3": u1' = mu - u1^2 - u2 + u3 + s u1 u2, u2' = (kappa - nu) u1 - u2, u3' = c u1 - u3
RDModel make_rd_builtin(const std::string& name, const std::map<std::string, double>& params,
                        const std::vector<double>& D);

using ModelSpec = std::variant<ScalarSixthOrder, GeneralScalarModel, RDModel>;

struct DispersionSample {
    double k = 0.0;
    std::vector<cplx> omega;
};

struct HomogeneousState {
    Vec u;
    bool ode_stable = false;
    double residual = 0.0;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int component_count(const ModelSpec& m);

std::vector<double> eval_rhs(const ModelSpec& model, const std::vector<double>& field, const Grid1D& grid);

std::vector<HomogeneousState> homogeneous_states(const ModelSpec& model, double mu, double nu,
                                                 const std::vector<Vec>& seeds = {});

DispersionSample dispersion(const ModelSpec& model, const Vec& u, double k, double mu, double nu);

// Leading branch followed across a k-grid by eigenvector overlap.
std::vector<cplx> track_leading_branch(const RDModel& model, const Vec& u, double mu, double nu,
                                       const std::vector<double>& ks);

// Characteristic polynomial P(lambda; u, mu, nu, k) = det(T(k) - lambda I)
double char_poly(const ModelSpec& model, double lambda, const Vec& u, double mu, double nu, double k);

struct DispersionDerivatives {
    std::map<std::string, double> s;        // omega_k, omega_kk, omega_mu, omega_nu, rho_kk, P_*, Q_*
    std::map<std::string, Vec> v;           // P_u, P_ku, Q_u
};

// which: subset of {"omega_k","omega_kk","omega_mu","omega_nu","rho_kk","P"}; "P" fills every
// characteristic-polynomial partial (RD) by central differences
DispersionDerivatives dispersion_derivatives(const ModelSpec& model, const Vec& u, double k, double mu,
                                             double nu, const std::vector<std::string>& which);

}  // namespace tfold
