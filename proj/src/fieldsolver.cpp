#include "tfold/fieldsolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tfold {

namespace {

constexpr int kContour = 32;

double sup(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v));
    }
    return m;
}

long steps_for(double span, double dt) { return std::max(0L, std::lround(span / dt)); }

}  // namespace

ABRaw ABRaw::canonical(const CanonicalAB& ab) {
    ABRaw p;
    const double a = ab.alpha;
    p.c = {1.0, 1.0, -1.0, a * ab.d, a, a, -a, a * ab.beta};
    p.r = ab.R;
    return p;
}

ABRaw ABRaw::from(const ABCoefficients& ab, double r) {
    ABRaw p;
    p.c = ab.raw;
    p.r = r;
    return p;
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::steady: return "steady";
        case RunStatus::blowup: return "blowup";
    }
    return "unknown";
}

Etdrk4::Etdrk4(const std::vector<std::vector<double>>& L, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw FieldError("dt must be positive");
    const std::size_t nf = L.size();
    auto shape = [&](std::vector<std::vector<double>>& x) {
        x.resize(nf);
        for (std::size_t f = 0; f < nf; ++f) x[f].resize(L[f].size());
    };
    shape(E_), shape(E2_), shape(Q_), shape(f1_), shape(f2_), shape(f3_);
    std::vector<cplx> roots(kContour);
    for (int j = 0; j < kContour; ++j) roots[j] = std::exp(cplx(0.0, M_PI * (j + 0.5) / kContour));
    for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t m = 0; m < L[f].size(); ++m) {
            const double hl = dt * L[f][m];
            E_[f][m] = std::exp(hl);
            E2_[f][m] = std::exp(0.5 * hl);
            cplx q = 0.0, a = 0.0, b = 0.0, c = 0.0;
            for (int j = 0; j < kContour; ++j) {
                // upper half of the circle; real parts of the conjugate half are identical
                const cplx z = hl + roots[j];
                const cplx ez = std::exp(z), ez2 = std::exp(0.5 * z);
                const cplx z3 = z * z * z;
                q += (ez2 - 1.0) / z;
                a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                b += (2.0 + z + ez * (z - 2.0)) / z3;
                c += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
            Q_[f][m] = dt * (q / double(kContour)).real();
            f1_[f][m] = dt * (a / double(kContour)).real();
            f2_[f][m] = dt * (b / double(kContour)).real();
            f3_[f][m] = dt * (c / double(kContour)).real();
        }
    }
    auto cshape = [&](Fields& x) {
        x.resize(nf);
        for (std::size_t f = 0; f < nf; ++f) x[f].assign(L[f].size(), 0.0);
    };
    cshape(Nv_), cshape(Na_), cshape(Nb_), cshape(Nc_), cshape(a_), cshape(b_), cshape(c_);
}

void Etdrk4::step(Fields& v, double t, const Nonlinear& N) {
    const std::size_t nf = v.size();
    const double h = dt_;
    N(v, t, Nv_);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t m = 0; m < v[f].size(); ++m) a_[f][m] = E2_[f][m] * v[f][m] + Q_[f][m] * Nv_[f][m];
    N(a_, t + 0.5 * h, Na_);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t m = 0; m < v[f].size(); ++m) b_[f][m] = E2_[f][m] * v[f][m] + Q_[f][m] * Na_[f][m];
    N(b_, t + 0.5 * h, Nb_);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t m = 0; m < v[f].size(); ++m)
            c_[f][m] = E2_[f][m] * a_[f][m] + Q_[f][m] * (2.0 * Nb_[f][m] - Nv_[f][m]);
    N(c_, t + h, Nc_);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t m = 0; m < v[f].size(); ++m)
            v[f][m] = E_[f][m] * v[f][m] + f1_[f][m] * Nv_[f][m] + 2.0 * f2_[f][m] * (Na_[f][m] + Nb_[f][m]) +
                      f3_[f][m] * Nc_[f][m];
}

// ---------------------------------------------------------------- AB system

ABSolver::ABSolver(const ABRaw& p, const Grid1D& grid, double dt) : p_(p) {
    spec_ = std::make_unique<Spectral>(grid);
    const auto& k = spec_->wavenumbers();
    const int M = spec_->modes();
    std::vector<std::vector<double>> L(3, std::vector<double>(M));
    for (int m = 0; m < M; ++m) {
        const double k2 = k[m] * k[m];
        L[0][m] = L[1][m] = -p_.c[0] * k2 + p_.c[1];
        L[2][m] = -p_.c[3] * k2;
    }
    stepper_ = std::make_unique<Etdrk4>(L, dt);
    v_.assign(3, std::vector<cplx>(M, 0.0));
    const int N = grid.N;
    ar_.resize(N), ai_.resize(N), b_.resize(N);
    tmp_.resize(M);
}

void ABSolver::to_physical(const Etdrk4::Fields& v, std::vector<double>& ar, std::vector<double>& ai,
                           std::vector<double>& b) const {
    auto* s = const_cast<Spectral*>(spec_.get());
    s->backward(v[0].data(), ar.data());
    s->backward(v[1].data(), ai.data());
    s->backward(v[2].data(), b.data());
}

void ABSolver::set_state(const ABState& st) {
    const int N = spec_->points();
    if (static_cast<int>(st.A.size()) != N || static_cast<int>(st.B.size()) != N)
        throw FieldError("state size does not match the grid");
    for (int i = 0; i < N; ++i) {
        ar_[i] = st.A[i].real();
        ai_[i] = st.A[i].imag();
    }
    spec_->forward(ar_.data(), v_[0].data());
    spec_->forward(ai_.data(), v_[1].data());
    spec_->forward(st.B.data(), v_[2].data());
    tau_ = st.tau;
}

ABState ABSolver::state() const {
    to_physical(v_, ar_, ai_, b_);
    ABState s;
    const int N = spec_->points();
    s.A.resize(N);
    for (int i = 0; i < N; ++i) s.A[i] = cplx(ar_[i], ai_[i]);
    s.B = b_;
    s.tau = tau_;
    return s;
}

double ABSolver::sup_norm() const {
    to_physical(v_, ar_, ai_, b_);
    return std::max({sup(ar_), sup(ai_), sup(b_)});
}

void ABSolver::step() {
    const auto& c = p_.c;
    const double src = c[4] - c[5] * p_.r;
    auto N = [&](const Etdrk4::Fields& v, double, Etdrk4::Fields& out) {
        to_physical(v, ar_, ai_, b_);
        const std::size_t n = ar_.size();
        std::vector<double>& na = ar_;
        std::vector<double>& ni = ai_;
        for (std::size_t i = 0; i < n; ++i) {
            const double xr = ar_[i], xi = ai_[i], y = b_[i];
            na[i] = c[2] * xr * y;
            ni[i] = c[2] * xi * y;
            b_[i] = src + c[6] * y * y + c[7] * (xr * xr + xi * xi);
        }
        spec_->forward(na.data(), out[0].data());
        spec_->forward(ni.data(), out[1].data());
        spec_->forward(b_.data(), out[2].data());
        for (auto& o : out) spec_->dealias(o.data());
    };
    stepper_->step(v_, tau_, N);
    tau_ += stepper_->dt();
}

template <class Solver>
static RunResult run_loop(Solver& s, const RunOptions& opt, double dt) {
    RunResult res;
    const long n = steps_for(opt.t_end - s.time(), dt);
    const long sample_stride = opt.sample_every > 0.0 ? std::max(1L, steps_for(opt.sample_every, dt)) : 0;
    const long window = std::max(1L, steps_for(opt.steady_window, dt));
    auto snap = [&]() { return s.snapshot(); };
    std::vector<double> ref = snap();
    if (sample_stride && opt.on_sample && !opt.on_sample(s.time())) {
        res.t = s.time();
        return res;
    }
    for (long i = 1; i <= n; ++i) {
        s.step();
        ++res.steps;
        const bool check = (i % window == 0);
        if (check || (sample_stride && i % sample_stride == 0)) {
            const double m = s.sup_norm();
            if (!(m < opt.blowup)) {
                res.status = RunStatus::blowup;
                res.t = s.time();
                return res;
            }
        }
        if (sample_stride && i % sample_stride == 0 && opt.on_sample && !opt.on_sample(s.time())) break;
        if (check) {
            std::vector<double> cur = snap();
            double d = 0.0;
            for (std::size_t j = 0; j < cur.size(); ++j) d = std::max(d, std::abs(cur[j] - ref[j]));
            res.last_change = d;
            ref.swap(cur);
            if (opt.stop_when_steady && d < opt.steady_tol) {
                res.status = RunStatus::steady;
                res.t = s.time();
                return res;
            }
        }
    }
    res.t = s.time();
    return res;
}

namespace {
// physical snapshots used by the steady-state test
struct ABView {
    ABSolver& s;
    double time() const { return s.time(); }
    void step() { s.step(); }
    double sup_norm() const { return s.sup_norm(); }
    std::vector<double> snapshot() const {
        const auto st = s.state();
        std::vector<double> x;
        x.reserve(3 * st.B.size());
        for (auto a : st.A) x.push_back(a.real()), x.push_back(a.imag());
        x.insert(x.end(), st.B.begin(), st.B.end());
        return x;
    }
};
struct ScalarView {
    ScalarSolver& s;
    double time() const { return s.time(); }
    void step() { s.step(); }
    double sup_norm() const { return s.sup_norm(); }
    std::vector<double> snapshot() const { return s.state().U; }
};
}  // namespace

RunResult ABSolver::run(const RunOptions& opt) {
    ABView v{*this};
    return run_loop(v, opt, stepper_->dt());
}

// ---------------------------------------------------------------- scalar PDE

ScalarSolver::ScalarSolver(const GeneralScalarModel& model, const Grid1D& grid, double dt,
                           std::optional<double> linear_shift, std::function<double(double)> mu_of_t)
    : model_(model), mu_of_t_(std::move(mu_of_t)) {
    model_.validate();
    shift_ = linear_shift.value_or(model_.reaction.linear_coefficient(mu_at(0.0)));
    spec_ = std::make_unique<Spectral>(grid);
    const auto& k = spec_->wavenumbers();
    const int M = spec_->modes();
    std::vector<std::vector<double>> L(1, std::vector<double>(M));
    for (int m = 0; m < M; ++m) {
        double sym = shift_, p = 1.0;
        for (int j = 1; j <= model_.m; ++j) {
            p *= -k[m] * k[m];
            sym += model_.lin(j, model_.nu) * p;
        }
        L[0][m] = sym;
    }
    stepper_ = std::make_unique<Etdrk4>(L, dt);
    v_.assign(1, std::vector<cplx>(M, 0.0));
    jmax_ = std::max(static_cast<int>(model_.c.size()), model_.nb());
    deriv_.assign(jmax_ + 1, std::vector<double>(grid.N));
    powk_.assign(jmax_ + 1, std::vector<double>(M, 1.0));
    for (int j = 1; j <= jmax_; ++j)
        for (int m = 0; m < M; ++m) powk_[j][m] = powk_[j - 1][m] * (-k[m] * k[m]);
    work_.resize(grid.N);
    tmp_.resize(M);
}

void ScalarSolver::set_state(const ScalarState& s) {
    if (static_cast<int>(s.U.size()) != spec_->points()) throw FieldError("state size does not match the grid");
    spec_->forward(s.U.data(), v_[0].data());
    t_ = s.t;
}

ScalarState ScalarSolver::state() const {
    ScalarState s;
    s.U.resize(spec_->points());
    const_cast<Spectral*>(spec_.get())->backward(v_[0].data(), s.U.data());
    s.t = t_;
    return s;
}

double ScalarSolver::sup_norm() const { return sup(state().U); }

void ScalarSolver::step() {
    const int M = spec_->modes();
    const int nb = model_.nb();
    auto N = [&](const Etdrk4::Fields& v, double t, Etdrk4::Fields& out) {
        const double mu = mu_at(t);
        spec_->backward(v[0].data(), deriv_[0].data());
        for (int j = 1; j <= jmax_; ++j) {
            for (int m = 0; m < M; ++m) tmp_[m] = v[0][m] * powk_[j][m];
            spec_->backward(tmp_.data(), deriv_[j].data());
        }
        std::vector<double>& U = deriv_[0];
        std::vector<double>& n = work_;
        for (std::size_t i = 0; i < U.size(); ++i) {
            const double u = U[i];
            double s = model_.reaction.F(u, mu) - shift_ * u;
            for (int j = 1; j <= static_cast<int>(model_.c.size()); ++j) s += model_.c[j - 1] * u * deriv_[j][i];
            for (int j = 1; j <= nb; ++j)
                for (int l = j; l <= nb; ++l) s += model_.bcoef(j, l) * deriv_[j][i] * deriv_[l][i];
            n[i] = s;
        }
        spec_->forward(n.data(), out[0].data());
        spec_->dealias(out[0].data());
    };
    stepper_->step(v_, t_, N);
    t_ += stepper_->dt();
}

RunResult ScalarSolver::run(const RunOptions& opt) {
    ScalarView v{*this};
    return run_loop(v, opt, stepper_->dt());
}

ABState step_ab(const ABRaw& p, const ABState& s, double dt, const Grid1D& grid) {
    ABSolver solver(p, grid, dt);
    solver.set_state(s);
    solver.step();
    if (!(solver.sup_norm() < 1e6)) throw FieldError("blow-up: sup norm exceeded 1e6");
    return solver.state();
}

ScalarState step_scalar(const GeneralScalarModel& model, const ScalarState& s, double dt, const Grid1D& grid) {
    ScalarSolver solver(model, grid, dt);
    solver.set_state(s);
    solver.step();
    if (!(solver.sup_norm() < 1e6)) throw FieldError("blow-up: sup norm exceeded 1e6");
    return solver.state();
}

std::vector<double> reconstruct_U_AB(const std::vector<cplx>& A, const std::vector<double>& B, double delta,
                                     double k_carrier, const ScaleMaps& maps, double u_star, const Grid1D& grid) {
    const auto x = grid.nodes();
    if (A.size() != x.size() || B.size() != x.size()) throw FieldError("field size does not match the grid");
    if (grid.bc == Boundary::periodic) {
        const double turns = k_carrier * grid.L / (2.0 * M_PI);
        if (std::abs(turns - std::round(turns)) > 1e-9 * std::max(1.0, turns)) {
            std::ostringstream os;
            os << "carrier wavenumber " << k_carrier << " is incommensurate with the periodic domain L = " << grid.L;
            throw FieldError(os.str());
        }
    }
    std::vector<double> U(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const cplx e = std::exp(cplx(0.0, k_carrier * x[i]));
        U[i] = u_star + delta * maps.b * B[i] + 2.0 * delta * (maps.a * A[i] * e).real();
    }
    return U;
}

std::function<double(double)> ramp_parameter(double mu0, double rate) {
    return [mu0, rate](double t) { return mu0 - rate * t; };
}

double rms(const std::vector<double>& u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return u.empty() ? 0.0 : std::sqrt(s / u.size());
}

}  // namespace tfold
