#include "tfold/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tfold/numerics.hpp"
#include "tfold/spectral.hpp"

namespace tfold {

namespace {

// smooth random field: random Fourier modes up to N/8, scaled to sup-norm `amp`
std::vector<double> band_noise(const Grid1D& g, double amp, std::mt19937_64& rng) {
    std::vector<double> out(g.N, 0.0);
    if (amp == 0.0) return out;
    std::normal_distribution<double> nd(0.0, 1.0);
    const auto x = g.nodes();
    const int jmax = std::max(1, g.N / 8);
    for (int j = 1; j <= jmax; ++j) {
        const double a = nd(rng), b = nd(rng);
        if (g.bc == Boundary::periodic) {
            const double k = 2.0 * M_PI * j / g.L;
            for (int i = 0; i < g.N; ++i) out[i] += a * std::cos(k * x[i]) + b * std::sin(k * x[i]);
        } else {
            const double k = M_PI * j / g.L;
            for (int i = 0; i < g.N; ++i) out[i] += a * std::cos(k * x[i]);
        }
    }
    double m = 0.0;
    for (double v : out) m = std::max(m, std::abs(v));
    for (double& v : out) v *= amp / m;
    return out;
}

double rms_abs(const std::vector<cplx>& A) {
    double s = 0.0;
    for (auto a : A) s += std::norm(a);
    return A.empty() ? 0.0 : std::sqrt(s / A.size());
}

double largest_stable_state(const ModelSpec& model, double mu, double nu) {
    const auto hs = homogeneous_states(model, mu, nu);
    double best = -1e300;
    for (const auto& h : hs)
        if (h.ode_stable) best = std::max(best, h.u(0));
    if (best == -1e300) throw FieldError("no ODE-stable homogeneous state at the initial parameter");
    return best;
}

}  // namespace

// ---------------------------------------------------------------- convergence

double table_Bp(double K) { return 0.5 * (1.0 - 4.0 * K * K); }

double table_Ap(double K, double r, double eta) {
    const double Bp = table_Bp(K);
    const double A2 = (Bp * Bp + r - 0.25) / (2.0 * (eta - 1.0));
    if (!(A2 >= 0.0)) throw FieldError("plane wave does not exist for these (K, r, eta)");
    return std::sqrt(A2);
}

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& cfg) {
    std::vector<ConvergenceRow> rows;
    const double Bp = table_Bp(cfg.K), Ap = table_Ap(cfg.K, cfg.r, cfg.eta);
    for (double delta : cfg.deltas) {
        ScalarSixthOrder s;
        s.eta = cfg.eta;
        s.nu = 1.0 - delta;
        s.mu = -1.0 + delta * delta / 4.0 - cfg.r * delta * delta;
        const double q = 1.0 + std::sqrt(delta) * cfg.K;
        Grid1D grid{cfg.periods * 2.0 * M_PI / q, cfg.N, Boundary::periodic};
        const auto x = grid.nodes();
        std::vector<double> U0(grid.N);
        for (int i = 0; i < grid.N; ++i) U0[i] = 1.0 + delta * Bp + 2.0 * delta * Ap * std::cos(q * x[i]);

        ScalarSolver solver(to_general(s), grid, cfg.dt);
        solver.set_state({U0, 0.0});
        RunOptions opt;
        opt.t_end = cfg.t_max;
        opt.stop_when_steady = true;
        const auto res = solver.run(opt);

        ConvergenceRow row;
        row.delta = delta;
        row.t_end = res.t;
        const auto U = solver.state().U;
        if (res.status == RunStatus::blowup) {
            row.outcome = "blowup";
        } else if (rms(U) < 0.1) {
            row.outcome = "collapsed";
        } else {
            row.outcome = res.status == RunStatus::steady ? "steady" : "not_converged";
        }
        std::vector<double> d(U.size());
        for (std::size_t i = 0; i < U.size(); ++i) d[i] = U[i] - U0[i];
        row.norm_diff = rms(d);
        rows.push_back(row);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows.size() < 2) break;
        const std::size_t a = i == 0 ? 0 : i - 1, b = i == 0 ? 1 : i;
        rows[i].exponent = std::log(rows[b].norm_diff / rows[a].norm_diff) / std::log(rows[b].delta / rows[a].delta);
    }
    return rows;
}

// ---------------------------------------------------------------- tipping

TippingTrace run_tipping(const TippingConfig& cfg) {
    ScalarSixthOrder s;
    s.eta = cfg.eta;
    s.gamma = cfg.gamma;
    s.nu = 1.0 - cfg.delta;
    s.mu = cfg.mu0;
    const ModelSpec model = s;
    const double rate = cfg.rate.value_or(cfg.delta * cfg.delta / 4000.0);
    const auto mu_of_t = ramp_parameter(cfg.mu0, rate);

    TippingTrace tr;
    // fold of the upper branch: continue u+ from mu0 towards decreasing mu
    Seeds fs;
    fs.mu = cfg.mu0;
    fs.u = Vec::Constant(1, largest_stable_state(model, cfg.mu0, s.nu));
    const auto fold = find_fold(model, s.nu, fs);
    tr.mu_fold = fold.mu_s;
    const double u_fold = fold.u_s(0);
    const double u0 = largest_stable_state(model, cfg.mu0, s.nu);

    bool collapsed = false, dipped = false;
    auto record = [&](double t, double norm) {
        const double mu = mu_of_t(t);
        tr.samples.emplace_back(mu, norm);
        if (norm < 1e-3) {
            collapsed = true;
            tr.collapse_mu = mu;
            return false;
        }
        if (mu < tr.mu_fold && norm <= 0.25 * u_fold) dipped = true;
        return true;
    };

    if (cfg.ode) {
        const ScalarReaction F = to_general(s).reaction;
        const double h = cfg.dt;
        const long n = std::lround(cfg.t_end / h);
        const long stride = std::max(1L, std::lround(cfg.sample_every / h));
        double u = u0, t = 0.0;
        record(t, std::abs(u));
        for (long i = 1; i <= n; ++i) {
            const double k1 = F.F(u, mu_of_t(t));
            const double k2 = F.F(u + 0.5 * h * k1, mu_of_t(t + 0.5 * h));
            const double k3 = F.F(u + 0.5 * h * k2, mu_of_t(t + 0.5 * h));
            const double k4 = F.F(u + h * k3, mu_of_t(t + h));
            u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = i * h;
            if (!std::isfinite(u) || std::abs(u) > 1e6) {
                tr.outcome = "blowup";
                return tr;
            }
            if (i % stride == 0 && !record(t, std::abs(u))) break;
        }
    } else {
        Grid1D grid{cfg.L, cfg.N, Boundary::periodic};
        ScalarSolver solver(to_general(s), grid, cfg.dt, std::nullopt, mu_of_t);
        std::mt19937_64 rng(cfg.seed);
        auto U = band_noise(grid, cfg.noise, rng);
        for (double& v : U) v += u0;
        solver.set_state({U, 0.0});
        RunOptions opt;
        opt.t_end = cfg.t_end;
        opt.sample_every = cfg.sample_every;
        opt.steady_window = opt.t_end + 1.0;
        opt.on_sample = [&](double t) {
            auto st = solver.state();
            if (!record(t, rms(st.U))) return false;
            if (cfg.background > 0.0) {
                const auto b = band_noise(grid, cfg.background, rng);
                for (int i = 0; i < grid.N; ++i) st.U[i] += b[i];
                solver.set_state(st);
            }
            return true;
        };
        if (solver.run(opt).status == RunStatus::blowup) {
            tr.outcome = "blowup";
            return tr;
        }
    }
    tr.outcome = collapsed ? "collapsed" : (dipped ? "transitioned" : "evaded");
    return tr;
}

// ---------------------------------------------------------------- AB dynamics

ABState perturbed_plane_wave(const CanonicalAB& ab, double K, const Grid1D& grid, double noise, std::uint64_t seed) {
    const auto w = plane_wave(ab, K);
    if (!w) throw ABError("no plane wave at this (K, R)");
    if (grid.bc == Boundary::periodic) {
        const double turns = K * grid.L / (2.0 * M_PI);
        if (std::abs(turns - std::round(turns)) > 1e-9 * std::max(1.0, std::abs(turns)))
            throw FieldError("K is incommensurate with the periodic domain");
    }
    std::mt19937_64 rng(seed);
    const auto nr = band_noise(grid, noise, rng), ni = band_noise(grid, noise, rng), nb = band_noise(grid, noise, rng);
    const auto x = grid.nodes();
    ABState s;
    s.A.resize(grid.N);
    s.B.resize(grid.N);
    for (int i = 0; i < grid.N; ++i) {
        // Neumann intervals carry the standing form, periodic ones the travelling form
        const cplx e = grid.bc == Boundary::periodic ? std::exp(cplx(0.0, K * x[i])) : cplx(std::cos(K * x[i]), 0.0);
        s.A[i] = w->A_bar * e + cplx(nr[i], ni[i]);
        s.B[i] = w->B_bar + nb[i];
    }
    return s;
}

double dominant_wavenumber(const ABState& s, const Grid1D& grid) {
    Spectral sp(grid);
    const int N = grid.N, M = sp.modes();
    std::vector<double> re(N), im(N);
    for (int i = 0; i < N; ++i) re[i] = s.A[i].real(), im[i] = s.A[i].imag();
    std::vector<cplx> R(M), I(M);
    sp.forward(re.data(), R.data());
    sp.forward(im.data(), I.data());
    const auto& k = sp.wavenumbers();
    const cplx i1(0.0, 1.0);
    double best = -1.0, K = 0.0;
    for (int m = 0; m < M; ++m) {
        if (grid.bc == Boundary::periodic) {
            const double p = std::abs(R[m] + i1 * I[m]), q = std::abs(std::conj(R[m]) + i1 * std::conj(I[m]));
            if (p > best) best = p, K = k[m];
            if (m > 0 && q > best) best = q, K = -k[m];
        } else {
            const double p = std::hypot(std::abs(R[m]), std::abs(I[m]));
            if (p > best) best = p, K = k[m];
        }
    }
    return K;
}

ReselectionResult run_reselection(const ABRunConfig& cfg) {
    ReselectionResult out;
    const double L = cfg.L > 0.0 ? cfg.L : 600.0 * M_PI / cfg.K0;
    out.grid = Grid1D{L, cfg.N, cfg.bc};
    ABSolver solver(ABRaw::canonical(cfg.ab), out.grid, cfg.dt);
    solver.set_state(perturbed_plane_wave(cfg.ab, cfg.K0, out.grid, cfg.noise, cfg.seed));
    RunOptions opt;
    opt.t_end = cfg.t_max;
    opt.stop_when_steady = true;
    opt.steady_tol = 1e-8;
    opt.sample_every = cfg.sample_every;
    opt.on_sample = [&](double t) {
        out.norm_trace.emplace_back(t, rms_abs(solver.state().A));
        return true;
    };
    const auto res = solver.run(opt);
    out.status = res.status;
    out.steady = res.status == RunStatus::steady;
    out.final = solver.state();
    if (res.status == RunStatus::blowup) return out;
    out.K_end = dominant_wavenumber(out.final, out.grid);
    CanonicalAB ab = cfg.ab;
    out.end_class = classify_closed(ab, out.K_end);
    out.end_in_stable = out.end_class == StabilityClass::stable;
    return out;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::stationary_quasiperiodic: return "stationary_quasiperiodic";
        case Regime::time_periodic: return "time_periodic";
        case Regime::irregular: return "irregular";
        case Regime::reselected: return "reselected";
        case Regime::blowup: return "blowup";
    }
    return "unknown";
}

RegimeDiagnostics regime_diagnostics(const std::vector<double>& series, const ABState& end, const Grid1D& grid,
                                     const RegimeThresholds& th) {
    RegimeDiagnostics d;
    const std::size_t n = series.size();
    std::size_t w = static_cast<std::size_t>(std::floor(th.window_fraction * n));
    w -= w % 2;
    if (w < 16) throw FieldError("time series too short for regime diagnostics");
    std::vector<double> tail(series.end() - w, series.end());
    const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / w;
    for (double v : tail) d.variance += (v - mean) * (v - mean);
    d.variance /= w;

    // power spectrum of the Hann-windowed, mean-free tail
    for (std::size_t i = 0; i < w; ++i) tail[i] = (tail[i] - mean) * (0.5 - 0.5 * std::cos(2.0 * M_PI * i / w));
    Spectral sp(Grid1D{static_cast<double>(w), static_cast<int>(w), Boundary::periodic});
    std::vector<cplx> c(sp.modes());
    sp.forward(tail.data(), c.data());
    double total = 0.0, peak = 0.0;
    int im = 1;
    for (int m = 1; m < sp.modes(); ++m) {
        const double p = std::norm(c[m]);
        total += p;
        if (p > peak) peak = p, im = m;
    }
    double near = 0.0;
    for (int m = std::max(1, im - 2); m <= std::min(sp.modes() - 1, im + 2); ++m) near += std::norm(c[m]);
    d.periodic_fraction = total > 0.0 ? near / total : 0.0;

    double amin = 1e300, amax = 0.0, asum = 0.0;
    for (auto a : end.A) {
        const double m = std::abs(a);
        amin = std::min(amin, m), amax = std::max(amax, m), asum += m;
    }
    d.amplitude_spread = asum > 0.0 ? (amax - amin) / (asum / end.A.size()) : 0.0;

    Spectral gs(grid);
    std::vector<double> mag(grid.N);
    for (int i = 0; i < grid.N; ++i) mag[i] = end.A[i].real();
    std::vector<cplx> R(gs.modes()), I(gs.modes());
    gs.forward(mag.data(), R.data());
    for (int i = 0; i < grid.N; ++i) mag[i] = end.A[i].imag();
    gs.forward(mag.data(), I.data());
    std::vector<double> spec(gs.modes());
    for (int m = 0; m < gs.modes(); ++m) spec[m] = std::hypot(std::abs(R[m]), std::abs(I[m]));
    const double smax = *std::max_element(spec.begin(), spec.end());
    for (int m = 0; m < gs.modes(); ++m) {
        const double l = m > 0 ? spec[m - 1] : -1.0, r = m + 1 < gs.modes() ? spec[m + 1] : -1.0;
        if (spec[m] > 0.01 * smax && spec[m] >= l && spec[m] >= r) ++d.spatial_peaks;
    }
    d.K_end = dominant_wavenumber(end, grid);
    return d;
}

Regime regime_tag(const RegimeDiagnostics& d, double K0, const RegimeThresholds& th) {
    if (d.variance < th.stationary_variance) {
        if (d.amplitude_spread < th.uniform_tolerance && d.end_stable && std::abs(d.K_end - K0) > 1e-9)
            return Regime::reselected;
        return Regime::stationary_quasiperiodic;
    }
    if (d.periodic_fraction > th.periodic_fraction) return Regime::time_periodic;
    return Regime::irregular;
}

std::vector<RegimeResult> run_regime_scan(const RegimeConfig& cfg) {
    std::vector<RegimeResult> out(cfg.alphas.size());
    const double L = cfg.L > 0.0 ? cfg.L : 200.0 * M_PI / cfg.K0;
    const Grid1D grid{L, cfg.N, cfg.bc};
    const double R = R_t(cfg.d, cfg.K0) + cfg.R_offset;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i) {
        RegimeResult& r = out[i];
        r.alpha = cfg.alphas[i];
        const CanonicalAB ab(r.alpha, cfg.d, cfg.beta, R);
        ABSolver solver(ABRaw::canonical(ab), grid, cfg.dt);
        solver.set_state(perturbed_plane_wave(ab, cfg.K0, grid, cfg.noise, cfg.seed));
        std::vector<double> series;
        RunOptions opt;
        opt.t_end = cfg.t_max;
        opt.sample_every = cfg.sample_every;
        opt.steady_window = opt.t_end + 1.0;
        opt.on_sample = [&](double t) {
            const double n = rms_abs(solver.state().A);
            series.push_back(n);
            r.norm_trace.emplace_back(t, n);
            return true;
        };
        r.status = solver.run(opt).status;
        if (r.status == RunStatus::blowup) {
            r.tag = Regime::blowup;
            continue;
        }
        r.diag = regime_diagnostics(series, solver.state(), grid, cfg.thresholds);
        r.diag.end_stable = classify_closed(ab, r.diag.K_end) == StabilityClass::stable;
        r.tag = regime_tag(r.diag, cfg.K0, cfg.thresholds);
    }
    return out;
}

// ---------------------------------------------------------------- model-level comparisons

GLEmbeddingResult run_gl_embedding(const TuringFoldReport& rep, const ModelSpec& model, double delta, double R,
                                   double t_max) {
    if (rep.model_class != "scalar") throw BifurcationError("GL embedding is implemented for scalar models");
    GLEmbeddingResult out;
    out.delta = delta;
    out.R = R;
    const auto ab = ab_coefficients(rep, model);
    const auto lan = landau_coefficient(rep, model, delta);
    out.landau = lan.L;
    out.mu_t = lan.turing.mu_t;
    out.mu = rep.mu_star + delta * delta * ab.mu_hat * (1.0 - R);
    const double nu = rep.nu_star - delta;

    // settled Stokes wave of the raw AB system on a short periodic interval
    Grid1D g{2.0 * M_PI, 16, Boundary::periodic};
    ABSolver solver(ABRaw::from(ab, ab.maps.rho * R), g, 0.01);
    const CanonicalAB can(ab.alpha, ab.d, ab.beta, R);
    const auto w = plane_wave(can, 0.0);
    if (!w) throw ABError("no Stokes wave at this R");
    ABState s;
    s.A.assign(g.N, cplx(0.5 * ab.maps.a * w->A_bar, 0.0));
    s.B.assign(g.N, ab.maps.b * w->B_bar);
    solver.set_state(s);
    RunOptions opt;
    opt.t_end = t_max;
    opt.stop_when_steady = true;
    opt.steady_tol = 1e-12;
    solver.run(opt);
    out.amplitude_ab = 2.0 * delta * std::abs(solver.state().A[0]);
    out.amplitude_ab_closed = 2.0 * delta * std::abs(ab.maps.a) * w->A_bar;

    // GL: A_t = omega_mu (mu - mu_t) A + L |A|^2 A with U = u_t + A e^{ikx} + c.c.
    const double ut = lan.turing.u_t(0), kc = lan.turing.k_c;
    auto growth = [&](double mu) {
        const auto hs = homogeneous_states(model, mu, nu);
        double u = hs.front().u(0);
        for (const auto& h : hs)
            if (std::abs(h.u(0) - ut) < std::abs(u - ut)) u = h.u(0);
        Vec uv(1);
        uv(0) = u;
        const auto disp = dispersion(model, uv, kc, mu, nu);
        return disp.omega.front().real();
    };
    const double wmu = num::d1(growth, out.mu_t);
    const double a2 = -wmu * (out.mu - out.mu_t) / lan.L;
    if (!(a2 > 0.0)) throw BifurcationError("GL fixed point does not exist at these parameters");
    out.amplitude_gl = 2.0 * std::sqrt(a2);
    out.deviation = std::abs(out.amplitude_ab - out.amplitude_gl) / out.amplitude_gl;
    return out;
}

ChaosPairResult run_underlying_chaos(const ChaosPairConfig& cfg) {
    ChaosPairResult out;
    const auto ep = extended_from_canonical(cfg.alpha, cfg.beta);
    out.gamma = ep.gamma, out.eta = ep.eta, out.d = ep.d;
    ScalarSixthOrder s;
    s.gamma = ep.gamma;
    s.eta = ep.eta;
    const ModelSpec model = s;
    const auto rep = locate_turing_fold(model, 1.0, -1.0);
    const auto ab = ab_coefficients(rep, model);
    const double R = R_t(ab.d, cfg.K) + cfg.R_offset;
    const double sd = ab.maps.s * std::sqrt(cfg.delta);

    // commensurate domains: integer carrier count in x and integer K turns in xi
    const double Lxi0 = cfg.L_xi > 0.0 ? cfg.L_xi : 200.0 * M_PI / cfg.K;
    const double ncar = std::max(1.0, std::round(rep.k_star * (Lxi0 / sd) / (2.0 * M_PI)));
    const double Lx = 2.0 * M_PI * ncar / rep.k_star;
    const double Lxi = Lx * sd;
    const double K = std::round(cfg.K * Lxi / (2.0 * M_PI)) * 2.0 * M_PI / Lxi;

    out.nu = rep.nu_star - cfg.delta;
    out.mu = rep.mu_star + cfg.delta * cfg.delta * ab.mu_hat * (1.0 - R);
    s.nu = out.nu;
    s.mu = out.mu;

    const CanonicalAB can(ab.alpha, ab.d, ab.beta, R);
    out.ab_grid = Grid1D{Lxi, cfg.N_ab, Boundary::periodic};
    out.pde_grid = Grid1D{Lx, cfg.N_pde, Boundary::periodic};
    ABSolver abs(ABRaw::canonical(can), out.ab_grid, cfg.dt_ab);
    abs.set_state(perturbed_plane_wave(can, K, out.ab_grid, 1e-6, 3));

    // PDE starts from the reconstructed plane wave; canonical xi = sd x, raw A = a At
    const double ustar = rep.u_star(0);
    const auto w = plane_wave(can, K);
    std::vector<cplx> A(cfg.N_pde);
    std::vector<double> B(cfg.N_pde, w->B_bar);
    const auto x = out.pde_grid.nodes();
    for (int i = 0; i < cfg.N_pde; ++i) A[i] = w->A_bar * std::exp(cplx(0.0, K * sd * x[i]));
    ScaleMaps unit = ab.maps;
    auto U0 = reconstruct_U_AB(A, B, cfg.delta, rep.k_star, unit, ustar, out.pde_grid);
    std::mt19937_64 rng(5);
    const auto nz = band_noise(out.pde_grid, 1e-6 * cfg.delta, rng);
    for (int i = 0; i < cfg.N_pde; ++i) U0[i] += nz[i];
    ScalarSolver pde(to_general(s), out.pde_grid, cfg.dt_pde);
    pde.set_state({U0, 0.0});

    RunOptions oa;
    oa.t_end = cfg.tau_max;
    oa.sample_every = cfg.sample_every;
    oa.steady_window = oa.t_end + 1.0;
    oa.on_sample = [&](double t) {
        out.ab_trace.emplace_back(t, rms_abs(abs.state().A));
        return true;
    };
    out.ab_status = abs.run(oa).status;
    out.ab_final = abs.state();

    const double t_per_tau = 1.0 / (ab.maps.t * cfg.delta);
    RunOptions op;
    op.t_end = cfg.tau_max * t_per_tau;
    op.sample_every = cfg.sample_every * t_per_tau;
    op.steady_window = op.t_end + 1.0;
    op.on_sample = [&](double t) {
        auto U = pde.state().U;
        for (double& v : U) v = (v - ustar) / cfg.delta;
        out.pde_trace.emplace_back(t / t_per_tau, rms(U));
        return true;
    };
    out.pde_status = pde.run(op).status;
    out.pde_final = pde.state();

    // AB end state sampled on the PDE grid by spectral interpolation of the canonical fields
    std::vector<cplx> Ai(cfg.N_pde);
    std::vector<double> Bi(cfg.N_pde);
    {
        Spectral sp(out.ab_grid);
        const int M = sp.modes();
        std::vector<double> buf(cfg.N_ab);
        std::vector<cplx> cr(M), ci(M), cb(M);
        for (int i = 0; i < cfg.N_ab; ++i) buf[i] = out.ab_final.A[i].real();
        sp.forward(buf.data(), cr.data());
        for (int i = 0; i < cfg.N_ab; ++i) buf[i] = out.ab_final.A[i].imag();
        sp.forward(buf.data(), ci.data());
        sp.forward(out.ab_final.B.data(), cb.data());
        const auto& k = sp.wavenumbers();
        auto eval = [&](const std::vector<cplx>& c, double xi) {
            double v = c[0].real();
            for (int m = 1; m < M; ++m) {
                const double f = (2 * m == cfg.N_ab) ? 1.0 : 2.0;
                v += f * (c[m] * std::exp(cplx(0.0, k[m] * xi))).real();
            }
            return v / cfg.N_ab;
        };
        for (int i = 0; i < cfg.N_pde; ++i) {
            const double xi = sd * x[i];
            Ai[i] = cplx(eval(cr, xi), eval(ci, xi));
            Bi[i] = eval(cb, xi);
        }
    }
    out.u_ab_final = reconstruct_U_AB(Ai, Bi, cfg.delta, rep.k_star, unit, ustar, out.pde_grid);
    return out;
}

}  // namespace tfold
