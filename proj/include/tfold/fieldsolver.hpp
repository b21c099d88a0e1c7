#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfold/absystem.hpp"
#include "tfold/bifurcation.hpp"
#include "tfold/models.hpp"
#include "tfold/spectral.hpp"

namespace tfold {

class FieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A_tau = c1 A'' + c2 A + c3 AB,  B_tau = c4 B'' + c5 - c6 r + c7 B^2 + c8 |A|^2
struct ABRaw {
    std::array<double, 8> c{1.0, 1.0, -1.0, 0.25, 0.5, 0.5, -0.5, 4.0};
    double r = 0.0;

    static ABRaw canonical(const CanonicalAB& ab);
    static ABRaw from(const ABCoefficients& ab, double r);
};

struct ABState {
    std::vector<cplx> A;
    std::vector<double> B;
    double tau = 0.0;
};

struct ScalarState {
    std::vector<double> U;
    double t = 0.0;
};

// Exponential time differencing RK4 for v' = L v + N(v, t) with L diagonal per field and mode.
// phi-function coefficients come from a contour average over 32 points.
class Etdrk4 {
public:
    using Fields = std::vector<std::vector<cplx>>;
    using Nonlinear = std::function<void(const Fields& v, double t, Fields& out)>;

    Etdrk4(const std::vector<std::vector<double>>& L, double dt);
    void step(Fields& v, double t, const Nonlinear& N);
    double dt() const { return dt_; }

private:
    double dt_;
    std::vector<std::vector<double>> E_, E2_, Q_, f1_, f2_, f3_;
    Fields Nv_, Na_, Nb_, Nc_, a_, b_, c_;
};

enum class RunStatus { completed, steady, blowup };
std::string to_string(RunStatus s);

struct RunOptions {
    double t_end = 100.0;
    bool stop_when_steady = false;
    double steady_tol = 1e-9;
    double steady_window = 1.0;
    double blowup = 1e6;
    // called every sample_every time units (and at t = 0); returning false stops the run
    double sample_every = 0.0;
    std::function<bool(double t)> on_sample;
};

struct RunResult {
    RunStatus status = RunStatus::completed;
    double t = 0.0;
    long steps = 0;
    double last_change = 0.0;  // sup-norm change over the last steady window
};

class ABSolver {
public:
    ABSolver(const ABRaw& p, const Grid1D& grid, double dt = 0.01);

    void set_state(const ABState& s);
    ABState state() const;
    const Grid1D& grid() const { return spec_->grid(); }
    double time() const { return tau_; }
    void step();
    RunResult run(const RunOptions& opt);
    double sup_norm() const;

private:
    void to_physical(const Etdrk4::Fields& v, std::vector<double>& ar, std::vector<double>& ai, std::vector<double>& b) const;
    ABRaw p_;
    std::unique_ptr<Spectral> spec_;
    std::unique_ptr<Etdrk4> stepper_;
    Etdrk4::Fields v_;
    double tau_ = 0.0;
    mutable std::vector<double> ar_, ai_, b_;
    mutable std::vector<cplx> tmp_;
};

class ScalarSolver {
public:
    // linear_shift: constant moved into the exponential part; defaults to the reaction's linear
    // coefficient at the model's mu. mu_of_t overrides the model's mu inside the reaction.
    ScalarSolver(const GeneralScalarModel& model, const Grid1D& grid, double dt = 1e-3,
                 std::optional<double> linear_shift = std::nullopt,
                 std::function<double(double)> mu_of_t = {});

    void set_state(const ScalarState& s);
    ScalarState state() const;
    const Grid1D& grid() const { return spec_->grid(); }
    double time() const { return t_; }
    double mu_at(double t) const { return mu_of_t_ ? mu_of_t_(t) : model_.mu; }
    void step();
    RunResult run(const RunOptions& opt);
    double sup_norm() const;
    // spectral coefficients of the current state (for growth-rate checks)
    const std::vector<cplx>& coefficients() const { return v_[0]; }

private:
    GeneralScalarModel model_;
    double shift_;
    std::function<double(double)> mu_of_t_;
    std::unique_ptr<Spectral> spec_;
    std::unique_ptr<Etdrk4> stepper_;
    Etdrk4::Fields v_;
    double t_ = 0.0;
    int jmax_ = 0;
    std::vector<std::vector<double>> powk_;  // (-k^2)^j per mode
    mutable std::vector<std::vector<double>> deriv_;
    mutable std::vector<double> work_;
    mutable std::vector<cplx> tmp_;
};

// one ETDRK4 step from a given state, convenience wrappers over the solvers above
ABState step_ab(const ABRaw& p, const ABState& s, double dt, const Grid1D& grid);
ScalarState step_scalar(const GeneralScalarModel& model, const ScalarState& s, double dt, const Grid1D& grid);

// U = u* + delta b B + delta (a A e^{i k x} + c.c.), fields given at the grid nodes
std::vector<double> reconstruct_U_AB(const std::vector<cplx>& A, const std::vector<double>& B, double delta,
                                     double k_carrier, const ScaleMaps& maps, double u_star, const Grid1D& grid);

// linear ramp mu(t) = mu0 - rate t
std::function<double(double)> ramp_parameter(double mu0, double rate);

// sqrt(mean(U^2)) on the grid nodes
double rms(const std::vector<double>& u);

}  // namespace tfold
