#include "tfold/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfold/numerics.hpp"

namespace tfold {

namespace {

constexpr double kGapTol = 1e-8;
constexpr double kHopfTol = 1e-8;

struct Sys {
    bool scalar = true;
    GeneralScalarModel g;
    const RDModel* rd = nullptr;
    int n = 1;
    double kmax = 4.0;

    explicit Sys(const ModelSpec& m) {
        if (const auto* r = std::get_if<RDModel>(&m)) {
            scalar = false;
            rd = r;
            n = r->n;
            kmax = r->k_scan_max;
        } else {
            g = std::holds_alternative<ScalarSixthOrder>(m) ? to_general(std::get<ScalarSixthOrder>(m))
                                                            : std::get<GeneralScalarModel>(m);
            kmax = g.k_scan_max;
        }
    }

    Vec F(const Vec& u, double mu, double nu) const {
        if (!scalar) return rd->F(u, mu, nu);
        return Vec::Constant(1, g.reaction.F(u[0], mu));
    }
    Mat T(const Vec& u, double mu, double nu, double k) const {
        if (!scalar) return rd->T(u, mu, nu, k);
        return Mat::Constant(1, 1, g.reaction.F_u(u[0], mu) + g.G(u[0], k, nu));
    }
    Vec Fmu(const Vec& u, double mu, double nu) const {
        if (!scalar) return rd->F_mu(u, mu, nu);
        return Vec::Constant(1, g.reaction.F_mu(u[0], mu));
    }
    Vec Fnu(const Vec& u, double mu, double nu) const {
        if (!scalar) return rd->F_nu(u, mu, nu);
        return Vec::Zero(1);
    }
    Vec Fuu(const Vec& u, double mu, double nu, const Vec& v, const Vec& w) const {
        if (!scalar) return rd->F_uu(u, mu, nu, v, w);
        return Vec::Constant(1, g.reaction.F_uu(u[0], mu) * v[0] * w[0]);
    }
    Vec Fuuu(const Vec& u, double mu, double nu, const Vec& v, const Vec& w, const Vec& z) const {
        if (!scalar) return rd->F_uuu(u, mu, nu, v, w, z);
        return Vec::Constant(1, g.reaction.F_uuu(u[0], mu) * v[0] * w[0] * z[0]);
    }
    double P(double lam, const Vec& u, double mu, double nu, double k) const {
        Mat t = T(u, mu, nu, k);
        t.diagonal().array() -= lam;
        return t.determinant();
    }
    // dP/dk through the cofactor expansion d det = tr(adj(M) dM), dM = -2k D
    double Pk(double lam, const Vec& u, double mu, double nu, double k) const {
        if (scalar) return g.G_k(u[0], k, nu);
        Mat t = T(u, mu, nu, k);
        t.diagonal().array() -= lam;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            Mat minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(rr, cc++) = t(r, c);
                }
                ++rr;
            }
            s += rd->D[i] * (n > 1 ? minor.determinant() : 1.0);
        }
        return -2.0 * k * s;
    }
    std::vector<cplx> spectrum(const Vec& u, double mu, double nu, double k) const {
        Eigen::EigenSolver<Mat> es(T(u, mu, nu, k), false);
        std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
        std::sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) { return a.real() > b.real(); });
        return ev;
    }
    cplx lead(const Vec& u, double mu, double nu, double k) const { return spectrum(u, mu, nu, k)[0]; }
};

void null_vectors(const Mat& M, Vec& v, Vec& p) {
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int n = static_cast<int>(M.rows());
    v = svd.matrixV().col(n - 1);
    p = svd.matrixU().col(n - 1);
    v /= v.norm();
    const double pv = p.dot(v);
    if (std::abs(pv) < 1e-14) throw BifurcationError("left and right null vectors are orthogonal");
    p /= pv;
}

// stable homogeneous state of the system at (mu, nu) found from u0 +/- eps v
std::optional<Vec> stable_state_near(const Sys& sys, const Vec& u0, const Vec& dir, double eps, double mu,
                                     double nu) {
    std::optional<Vec> best;
    for (double sgn : {1.0, -1.0}) {
        auto res = num::newton([&](const Vec& u) { return sys.F(u, mu, nu); }, u0 + sgn * eps * dir, 1e-13, 60);
        if (!res.converged && res.residual > 1e-11) continue;
        const auto ev = sys.spectrum(res.x, mu, nu, 0.0);
        if (ev[0].real() < 0.0) {
            if (!best || (res.x - u0).norm() < (*best - u0).norm()) best = res.x;
        }
    }
    return best;
}

Vec default_state(const ModelSpec& model, const Sys& sys, double mu, double nu) {
    double m = mu;
    for (int attempt = 0; attempt < 25; ++attempt) {
        try {
            auto hs = homogeneous_states(model, m, nu);
            const HomogeneousState* pick = nullptr;
            double best = -1e300;
            for (const auto& h : hs) {
                if (!h.ode_stable) continue;
                const double lead = sys.lead(h.u, m, nu, 0.0).real();
                if (lead > best) {
                    best = lead;
                    pick = &h;
                }
            }
            if (pick) return pick->u;
        } catch (const ModelError&) {
        }
        m += 0.05 * std::max(1.0, std::abs(mu)) * (1 << std::min(attempt, 6));
    }
    throw BifurcationError("no stable homogeneous state found near the seed");
}

FoldPoint fold_impl(const Sys& sys, const ModelSpec& model, double nu, const Vec& u0, double mu0) {
    const int n = sys.n;
    auto f = [&](const Vec& x) {
        Vec r(n + 1);
        const Vec u = x.head(n);
        r.head(n) = sys.F(u, x[n], nu);
        r[n] = sys.T(u, x[n], nu, 0.0).determinant();
        return r;
    };
    Vec x0(n + 1);
    x0.head(n) = u0;
    x0[n] = mu0;
    auto res = num::newton(f, x0, 1e-12, 80);
    if (!res.converged && !(res.residual < 1e-10))
        throw BifurcationError("fold Newton did not converge (residual " + std::to_string(res.residual) + ")");
    FoldPoint fp;
    fp.nu = nu;
    fp.u_s = res.x.head(n);
    fp.mu_s = res.x[n];
    null_vectors(sys.T(fp.u_s, fp.mu_s, nu, 0.0), fp.v_s, fp.p_s);
    const double fmp = sys.Fmu(fp.u_s, fp.mu_s, nu).dot(fp.p_s);
    if (fmp < 0.0) {
        fp.v_s = -fp.v_s;
        fp.p_s = -fp.p_s;
    }
    fp.oriented = sys.Fmu(fp.u_s, fp.mu_s, nu).dot(fp.p_s) > 0.0;
    const double fss = sys.Fuu(fp.u_s, fp.mu_s, nu, fp.v_s, fp.v_s).dot(fp.p_s);
    if (std::abs(fss) < 1e-10) throw BifurcationError("fold is degenerate: <F_uu(v,v),p> vanishes");
    (void)model;
    return fp;
}

BumpMax bump_impl(const Sys& sys, const Vec& u, double mu, double nu, double k_max, int samples) {
    BumpMax b;
    std::vector<double> w(samples + 1);
    for (int i = 0; i <= samples; ++i) w[i] = sys.lead(u, mu, nu, k_max * i / samples).real();
    int pick = -1;
    for (int i = 2; i < samples; ++i)
        if (w[i] >= w[i - 1] && w[i] >= w[i + 1] && (pick < 0 || w[i] > w[pick])) pick = i;
    if (pick < 0) return b;
    // golden-section refinement on [k_{i-1}, k_{i+1}]
    double lo = k_max * (pick - 1) / samples, hi = k_max * (pick + 1) / samples;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = sys.lead(u, mu, nu, c).real(), fd = sys.lead(u, mu, nu, d).real();
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = sys.lead(u, mu, nu, c).real();
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = sys.lead(u, mu, nu, d).real();
        }
    }
    b.k = 0.5 * (lo + hi);
    b.omega = sys.lead(u, mu, nu, b.k).real();
    b.found = true;
    return b;
}

TuringPoint turing_newton(const Sys& sys, double nu, const Vec& u0, double mu0, double k0) {
    const int n = sys.n;
    auto f = [&](const Vec& x) {
        Vec r(n + 2);
        const Vec u = x.head(n);
        r.head(n) = sys.F(u, x[n], nu);
        r[n] = sys.P(0.0, u, x[n], nu, x[n + 1]);
        r[n + 1] = sys.Pk(0.0, u, x[n], nu, x[n + 1]);
        return r;
    };
    Vec x0(n + 2);
    x0.head(n) = u0;
    x0[n] = mu0;
    x0[n + 1] = k0;
    auto res = num::newton(f, x0, 1e-12, 80);
    if (!res.converged && !(res.residual < 1e-10))
        throw BifurcationError("Turing Newton did not converge (residual " + std::to_string(res.residual) + ")");
    TuringPoint tp;
    tp.nu = nu;
    tp.u_t = res.x.head(n);
    tp.mu_t = res.x[n];
    tp.k_c = std::abs(res.x[n + 1]);
    return tp;
}

void verify_turing(const Sys& sys, TuringPoint& tp) {
    const auto ev0 = sys.spectrum(tp.u_t, tp.mu_t, tp.nu, 0.0);
    if (!(ev0[0].real() < 0.0)) throw BifurcationError("Turing point is not on an ODE-stable branch");
    const auto evc = sys.spectrum(tp.u_t, tp.mu_t, tp.nu, tp.k_c);
    if (std::abs(evc[0].imag()) > kHopfTol)
        throw BifurcationError("non-stationary Turing: leading eigenvalue at k_c is complex");
    if (std::abs(evc[0].real()) > 1e-7)
        throw BifurcationError("global margin violated: zero eigenvalue at k_c is not the leading one");
    if (sys.n > 1 && std::abs(evc[0] - evc[1]) < kGapTol)
        throw BifurcationError("critical eigenvalue at k_c is not simple");
    const double kmax = 3.0 * std::max({1.0, tp.k_c, sys.kmax / 3.0});
    double margin = -1e300;
    const int M = 2000;
    for (int i = 0; i <= M; ++i) {
        const double k = kmax * i / M;
        margin = std::max(margin, sys.lead(tp.u_t, tp.mu_t, tp.nu, k).real());
    }
    tp.margin = margin;
    if (margin > 1e-8) throw BifurcationError("global margin violated: another band is unstable");
    null_vectors(sys.T(tp.u_t, tp.mu_t, tp.nu, tp.k_c), tp.v_t, tp.p_t);
}

}  // namespace

bool TuringFoldReport::audit_passed() const {
    return std::all_of(audit.begin(), audit.end(), [](const AuditItem& a) { return a.pass; });
}

std::vector<std::string> TuringFoldReport::failures() const {
    std::vector<std::string> f;
    for (const auto& a : audit)
        if (!a.pass) f.push_back(a.name);
    return f;
}

BumpMax interior_maximum(const ModelSpec& model, const Vec& u, double mu, double nu, double k_max, int samples) {
    Sys sys(model);
    return bump_impl(sys, u, mu, nu, k_max, samples);
}

FoldPoint find_fold(const ModelSpec& model, double nu, const Seeds& seed) {
    Sys sys(model);
    double mu0 = seed.mu.value_or(std::visit([](const auto& m) { return m.mu; }, model));
    Vec u0 = seed.u ? *seed.u : default_state(model, sys, mu0, nu);
    return fold_impl(sys, model, nu, u0, mu0);
}

TuringPoint find_turing(const ModelSpec& model, double nu, const Seeds& seeds) {
    Sys sys(model);
    TuringPoint tp;
    if (seeds.mu && seeds.k) {
        Vec u0 = seeds.u ? *seeds.u : default_state(model, sys, *seeds.mu, nu);
        tp = turing_newton(sys, nu, u0, *seeds.mu, *seeds.k);
    } else {
        // bracket mu^t between the fold and a value where no band is unstable
        const FoldPoint fp = find_fold(model, nu, Seeds{seeds.mu, std::nullopt, seeds.u});
        const double fmp = sys.Fmu(fp.u_s, fp.mu_s, nu).dot(fp.p_s);
        const double fss = sys.Fuu(fp.u_s, fp.mu_s, nu, fp.v_s, fp.v_s).dot(fp.p_s);
        Vec prev = fp.u_s;
        auto upper = [&](double mu) -> std::optional<Vec> {
            const double eps = std::sqrt(std::max(0.0, -2.0 * fmp * (mu - fp.mu_s) / fss));
            return stable_state_near(sys, fp.u_s, fp.v_s, eps, mu, nu);
        };
        auto h = [&](double mu) {
            auto u = upper(mu);
            if (!u) throw BifurcationError("upper branch not found during Turing bracketing");
            prev = *u;
            const auto b = bump_impl(sys, *u, mu, nu, sys.kmax, 800);
            return b.found ? b.omega : -1.0;
        };
        double scale = 1e-3;
        double lo = fp.mu_s + 1e-9 * std::max(1.0, std::abs(fp.mu_s));
        if (!(h(lo) > 0.0)) throw BifurcationError("no Turing instability on the upper branch at this nu");
        double hi = lo + scale;
        while (h(hi) > 0.0) {
            lo = hi;
            scale *= 2.0;
            hi = fp.mu_s + scale;
            if (scale > 1e4) throw BifurcationError("Turing bracket search failed");
        }
        const double mu_t = num::brent(h, lo, hi, 1e-13);
        auto u = upper(mu_t);
        const auto b = bump_impl(sys, *u, mu_t, nu, sys.kmax, 800);
        tp = turing_newton(sys, nu, *u, mu_t, b.k);
    }
    verify_turing(sys, tp);
    return tp;
}

TuringFoldReport locate_turing_fold(const ModelSpec& model, double nu_seed, double mu_seed, const Seeds& extra) {
    Sys sys(model);
    const int n = sys.n;
    Seeds fs{mu_seed, std::nullopt, extra.u};
    FoldPoint fp = find_fold(model, nu_seed, fs);
    Vec warm_u = fp.u_s;
    double warm_mu = fp.mu_s;

    auto h = [&](double nu) -> std::optional<double> {
        try {
            FoldPoint f = fold_impl(sys, model, nu, warm_u, warm_mu);
            warm_u = f.u_s;
            warm_mu = f.mu_s;
            const auto b = bump_impl(sys, f.u_s, f.mu_s, nu, sys.kmax, 800);
            if (!b.found) return std::nullopt;
            return b.omega;
        } catch (const BifurcationError&) {
            return std::nullopt;
        }
    };

    double a = nu_seed;
    auto ha = h(a);
    if (!ha) throw BifurcationError("no interior dispersion maximum at the nu seed");
    double b = a;
    std::optional<double> hb;
    bool bracketed = std::abs(*ha) < 1e-14;
    const double step = 0.02 * std::max(1.0, std::abs(nu_seed));
    // last point on each side where h is defined; once h stops being defined, search back towards it
    double last[2] = {nu_seed, nu_seed};
    bool open[2] = {true, true};
    for (int j = 0; j < 12 && !bracketed; ++j) {
        for (int side = 0; side < 2 && !bracketed; ++side) {
            if (!open[side]) continue;
            const double sgn = side == 0 ? 1.0 : -1.0;
            const double t = nu_seed + sgn * step * (1 << j);
            warm_u = fp.u_s;
            warm_mu = fp.mu_s;
            auto ht = h(t);
            if (ht && (*ht) * (*ha) <= 0.0) {
                b = t;
                hb = ht;
                bracketed = true;
            } else if (ht) {
                last[side] = t;
            } else {
                open[side] = false;
                double lo = last[side], hi = t;
                for (int i = 0; i < 40 && !bracketed; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    warm_u = fp.u_s;
                    warm_mu = fp.mu_s;
                    auto hm = h(mid);
                    if (hm && (*hm) * (*ha) <= 0.0) {
                        b = mid;
                        hb = hm;
                        bracketed = true;
                    } else if (hm) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
        }
    }
    if (!bracketed) throw BifurcationError("could not bracket the Turing-fold point in nu");
    double nu_star = a;
    if (hb) {
        // shrink the bracket towards the seed side so warm starts stay valid
        auto hf = [&](double nu) {
            auto v = h(nu);
            if (!v) throw BifurcationError("dispersion maximum vanished inside the bracket");
            return *v;
        };
        nu_star = num::brent(hf, std::min(a, b), std::max(a, b), 1e-12);
    }
    FoldPoint f = fold_impl(sys, model, nu_star, warm_u, warm_mu);
    const auto bump = bump_impl(sys, f.u_s, f.mu_s, nu_star, sys.kmax, 800);
    double k0 = bump.found ? bump.k : extra.k.value_or(1.0);

    // simultaneous polish of (u, mu, nu, k)
    auto F = [&](const Vec& x) {
        Vec r(n + 3);
        const Vec u = x.head(n);
        const double mu = x[n], nu = x[n + 1], k = x[n + 2];
        r.head(n) = sys.F(u, mu, nu);
        r[n] = sys.T(u, mu, nu, 0.0).determinant();
        r[n + 1] = sys.P(0.0, u, mu, nu, k);
        r[n + 2] = sys.Pk(0.0, u, mu, nu, k);
        return r;
    };
    Vec x0(n + 3);
    x0.head(n) = f.u_s;
    x0[n] = f.mu_s;
    x0[n + 1] = nu_star;
    x0[n + 2] = k0;
    auto res = num::newton(F, x0, 1e-13, 60);
    if (!res.converged && !(res.residual < 1e-10))
        throw BifurcationError("co-dimension-2 Newton did not converge (residual " + std::to_string(res.residual) +
                               ")");

    TuringFoldReport rep;
    rep.model_class = sys.scalar ? "scalar" : "rd";
    rep.u_star = res.x.head(n);
    rep.mu_star = res.x[n];
    rep.nu_star = res.x[n + 1];
    rep.k_star = std::abs(res.x[n + 2]);
    rep.residual = res.residual;
    const Vec& us = rep.u_star;
    const double ms = rep.mu_star, ns = rep.nu_star, ks = rep.k_star;

    fp = fold_impl(sys, model, ns, us, ms);
    rep.v_s = fp.v_s;
    rep.p_s = fp.p_s;
    null_vectors(sys.T(us, ms, ns, ks), rep.v_t, rep.p_t);

    auto add = [&](const std::string& name, const std::string& rule, double value, bool pass) {
        rep.audit.push_back({name, rule, value, pass});
    };

    if (sys.scalar) {
        const auto& g = sys.g;
        const double x = us[0];
        const double Fuu = g.reaction.F_uu(x, ms), Fmu = g.reaction.F_mu(x, ms);
        const double Gnu = g.G_nu(ks), Gkk = g.G_kk(x, ks, ns), Gknu = g.G_knu(ks);
        const double Gu = g.G_u(ks), Gku = g.G_ku(ks);
        const double rho = g.G_kk(x, 0.0, ns);
        const double Pstar = g.P(ks, ks);
        const double c8 = g.S(Fuu, ks, ks);
        rep.rho_kk = rho;
        rep.omega_kk = Gkk;
        rep.q = {{"F_uu", Fuu},   {"F_mu", Fmu},     {"F_uuu", g.reaction.F_uuu(x, ms)},
                 {"F_umu", g.reaction.F_umu(x, ms)}, {"G_nu", Gnu},
                 {"G_kk", Gkk},   {"G_knu", Gknu},   {"G_u", Gu},
                 {"G_ku", Gku},   {"P_star", Pstar}, {"c8", c8}};
        const double ut = Gnu / (Fuu + Gu);
        const double mh = -Fuu * ut * ut / (2.0 * Fmu);
        rep.expansion["u_tilde"] = ut;
        rep.expansion["mu_hat"] = mh;
        rep.expansion["k_tilde"] = (Gknu - Gku * ut) / Gkk;
        rep.expansion["omega_tilde"] = (Fuu + Gu) * ut / (2.0 * mh);
        rep.expansion["mu_tilde_s"] = 0.0;
        add("F_uu", "F_uu* < 0", Fuu, Fuu < 0.0);
        add("F_mu", "F_mu* > 0", Fmu, Fmu > 0.0);
        add("rho_kk", "rho_kk* < 0", rho, rho < 0.0);
        add("G_kk", "G_kk* < 0", Gkk, Gkk < 0.0);
        add("G_nu", "G_nu* < 0", Gnu, Gnu < 0.0);
        add("F_uu_plus_G_u", "F_uu* + G_u* < 0", Fuu + Gu, Fuu + Gu < 0.0);
        return rep;
    }

    const RDModel& rd = *sys.rd;
    const auto dd = dispersion_derivatives(model, us, ks, ms, ns, {"P"});
    const double Pl = dd.s.at("P_lambda"), Pm = dd.s.at("P_mu"), Pn = dd.s.at("P_nu");
    const double Pkk = dd.s.at("P_kk"), Pkm = dd.s.at("P_kmu"), Pkn = dd.s.at("P_knu");
    const Vec Pu = dd.v.at("P_u"), Pku = dd.v.at("P_ku"), Qu = dd.v.at("Q_u");
    const double Qm = dd.s.at("Q_mu"), Qn = dd.s.at("Q_nu");
    rep.rho_kk = dd.s.at("rho_kk");
    rep.omega_kk = dd.s.at("omega_kk");

    const Mat Fu = rd.F_u(us, ms, ns);
    const Vec Fm = rd.F_mu(us, ms, ns), Fn = rd.F_nu(us, ms, ns);
    Mat Bd(n + 1, n + 1);
    Bd.topLeftCorner(n, n) = Fu;
    Bd.topRightCorner(n, 1) = Fm;
    Bd.bottomLeftCorner(1, n) = Qu.transpose();
    Bd(n, n) = Qm;
    Vec rhs(n + 1);
    rhs.head(n) = Fn;
    rhs[n] = Qn;
    const double bdet = Bd.determinant();
    const Vec sol = Bd.fullPivLu().solve(rhs);
    const Vec uts = sol.head(n);
    const double mts = sol[n];

    const double Fmp = Fm.dot(rep.p_s);
    const double Fss = rd.F_uu(us, ms, ns, rep.v_s, rep.v_s).dot(rep.p_s);
    const double X = rd.F_uu(us, ms, ns, rep.v_s, rep.v_t).dot(rep.p_t);
    const double Y = rd.F_uu(us, ms, ns, rep.v_t, rep.v_t).dot(rep.p_s);
    const double Puvs = Pu.dot(rep.v_s);
    const double ows = (Pn - Pm * mts - Pu.dot(uts)) / Pl;
    const double mht = -0.5 * Fss * std::pow(Pl * ows, 2) / (Fmp * Puvs * Puvs);
    const double ubt = Pl * ows / Puvs;
    const Vec utt = ubt * rep.v_s;
    const double owmu = ubt * X / (2.0 * mht);
    const double kt = (Pkn - Pkm * mts - Pku.dot(utt + uts)) / Pkk;
    const double rt = -std::sqrt(std::max(0.0, -2.0 * Fmp * Fss * mht));

    rep.q = {{"F_mu_p", Fmp}, {"F_uu_vs_vs_ps", Fss}, {"F_uu_vs_vt_pt", X}, {"F_uu_vt_vt_ps", Y},
             {"P_lambda", Pl}, {"P_mu", Pm},         {"P_nu", Pn},         {"P_kk", Pkk},
             {"P_kmu", Pkm},   {"P_knu", Pkn},       {"Pu_vs", Puvs},      {"Q_mu", Qm},
             {"Q_nu", Qn},     {"bordered_det", bdet}};
    rep.expansion = {{"mu_tilde_s", mts}, {"omega_tilde_s", ows}, {"mu_hat_t", mht},
                     {"u_bar_t", ubt},    {"omega_tilde_mu_t", owmu}, {"k_tilde", kt},
                     {"rho_tilde", rt}};
    rep.expansion_vec["u_tilde_s"] = uts;
    rep.expansion_vec["u_tilde_t"] = utt;

    const auto ev0 = sys.spectrum(us, ms, ns, 0.0);
    const auto evk = sys.spectrum(us, ms, ns, ks);
    const double re2_0 = n > 1 ? ev0[1].real() : -1.0;
    const double re2_k = n > 1 ? evk[1].real() : -1.0;
    add("F_mu_p", "<F_mu*, p_s*> > 0", Fmp, Fmp > 0.0);
    add("F_uu_vs_vs_ps", "<F_uu*(v_s*, v_s*), p_s*> < 0", Fss, Fss < 0.0);
    add("bordered_det", "det [F_u F_mu; Q_u^T Q_mu] != 0", bdet, std::abs(bdet) > 1e-10);
    add("rho_kk", "rho_kk* < 0", rep.rho_kk, rep.rho_kk < 0.0);
    add("re_omega2_0", "Re omega^2(0) < 0", re2_0, re2_0 < 0.0);
    add("omega_kk", "omega_kk* < 0", rep.omega_kk, rep.omega_kk < 0.0);
    add("Pu_vs_Plambda", "<P_u*, v_s*> P_lambda* > 0", Puvs * Pl, Puvs * Pl > 0.0);
    add("F_uu_vs_vt_pt", "<F_uu*(v_s*, v_t*), p_t*> < 0", X, X < 0.0);
    add("omega_tilde_s", "(P_nu* - P_mu* mu~s - <P_u*, u~s>) P_lambda* > 0", ows * Pl * Pl, ows > 0.0);
    add("re_omega2_kstar", "Re omega^2(k*) < 0", re2_k, re2_k < 0.0);
    return rep;
}

ABCoefficients canonicalize(const std::array<double, 8>& c) {
    const double c1 = c[0], c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5], c7 = c[6], c8 = c[7];
    if (!(c1 > 0.0)) throw BifurcationError("degenerate coefficient: diffusion c1 must be positive");
    if (!(c2 > 0.0)) throw BifurcationError("degenerate coefficient: linear growth c2 must be positive");
    if (c3 == 0.0 || c5 == 0.0 || c6 == 0.0) throw BifurcationError("degenerate coefficient: c3, c5, c6 nonzero");
    ABCoefficients ab;
    ab.raw = c;
    ab.maps.t = c2;
    ab.maps.s = std::sqrt(c2 / c1);
    ab.maps.b = -c2 / c3;
    ab.maps.a = 1.0;
    ab.maps.rho = c5 / c6;
    ab.alpha = c5 / (ab.maps.b * c2);
    ab.d = c4 / (c1 * ab.alpha);
    ab.beta = c8 * ab.maps.a * ab.maps.a / c5;
    ab.constraint = c7 * ab.maps.b * ab.maps.b / c5;
    return ab;
}

ABCoefficients ab_coefficients(const TuringFoldReport& rep, const ModelSpec& model) {
    (void)model;
    auto need = [&](const std::string& name) {
        for (const auto& a : rep.audit)
            if (a.name == name && !a.pass)
                throw BifurcationError("degenerate coefficient: audit condition " + a.rule + " failed");
    };
    std::array<double, 8> raw{};
    ABCoefficients ab;
    if (rep.model_class == "scalar") {
        for (const char* nm : {"F_uu", "F_mu", "rho_kk", "G_kk", "G_nu", "F_uu_plus_G_u"}) need(nm);
        const auto& q = rep.q;
        const double Fuu = q.at("F_uu"), Fmu = q.at("F_mu"), Gnu = q.at("G_nu"), Gu = q.at("G_u");
        const double mh = rep.expansion.at("mu_hat");
        raw = {-0.5 * rep.omega_kk, -Gnu, Fuu + Gu, -0.5 * rep.rho_kk, Fmu * mh, Fmu, 0.5 * Fuu, q.at("c8")};
        ab = canonicalize(raw);
        ab.mu_hat = mh;
        ab.alpha_closed = Fuu / (2.0 * (Fuu + Gu));
        ab.d_closed = rep.rho_kk / (rep.omega_kk * ab.alpha_closed);
        ab.beta_closed = -2.0 * q.at("c8") * Fuu * std::pow(Fuu + Gu, 2) / (Gnu * Gnu * Fuu * Fuu) * Fuu / Fuu;
        if (Gu == 0.0) {
            ab.alpha_closed = 0.5;
            ab.d_closed = 2.0 * rep.rho_kk / rep.omega_kk;
            ab.beta_closed = -2.0 * (Fuu + q.at("P_star")) * Fuu / (Gnu * Gnu);
        }
        return ab;
    }
    for (const char* nm : {"F_mu_p", "F_uu_vs_vs_ps", "rho_kk", "omega_kk", "Pu_vs_Plambda", "F_uu_vs_vt_pt",
                           "omega_tilde_s"})
        need(nm);
    const auto& q = rep.q;
    const double X = q.at("F_uu_vs_vt_pt"), Y = q.at("F_uu_vt_vt_ps"), Fss = q.at("F_uu_vs_vs_ps");
    const double Fmp = q.at("F_mu_p");
    const double mht = rep.expansion.at("mu_hat_t"), ubt = rep.expansion.at("u_bar_t");
    raw = {-0.5 * rep.omega_kk, -ubt * X, X, -0.5 * rep.rho_kk, mht * Fmp, Fmp, 0.5 * Fss, Y};
    ab = canonicalize(raw);
    ab.mu_hat = mht;
    ab.alpha_closed = Fss / (2.0 * X);
    ab.d_closed = 2.0 * rep.rho_kk * X / (rep.omega_kk * Fss);
    ab.beta_closed = Y / (mht * Fmp);
    return ab;
}

LandauResult landau_coefficient(const TuringFoldReport& rep, const ModelSpec& model, double delta) {
    if (!(delta > 0.0)) throw BifurcationError("delta must be positive");
    Sys sys(model);
    LandauResult out;
    out.delta = delta;
    const ABCoefficients ab = ab_coefficients(rep, model);
    out.beta = ab.beta;
    const double nu = rep.nu_star - delta;
    Seeds s;
    if (sys.scalar) {
        s.u = Vec::Constant(1, rep.u_star[0] + rep.expansion.at("u_tilde") * delta);
        s.mu = rep.mu_star + rep.expansion.at("mu_hat") * delta * delta;
    } else {
        s.u = rep.u_star + (rep.expansion_vec.at("u_tilde_s") + rep.expansion_vec.at("u_tilde_t")) * delta;
        s.mu = rep.mu_star + rep.expansion.at("mu_tilde_s") * delta + rep.expansion.at("mu_hat_t") * delta * delta;
    }
    s.k = rep.k_star + rep.expansion.at("k_tilde") * delta;
    const TuringPoint tp = find_turing(model, nu, s);
    out.turing = tp;
    const double k = tp.k_c, mu = tp.mu_t;
    if (sys.scalar) {
        const auto& g = sys.g;
        const double u = tp.u_t[0];
        const double Fu = g.reaction.F_u(u, mu), Fuu = g.reaction.F_uu(u, mu), Fuuu = g.reaction.F_uuu(u, mu);
        const double S0k = g.S(Fuu, 0.0, k), Skk = g.S(Fuu, k, k), S2k = g.S(Fuu, 2.0 * k, k);
        const double w2 = Fu + g.G(u, 2.0 * k, nu);
        out.L = -S0k * Skk / Fu - S2k * Skk / (2.0 * w2) + 0.5 * Fuuu;
        const auto& q = rep.q;
        const double Fus = q.at("F_uu") + q.at("G_u");
        out.L_star = -Fus * Fus * q.at("c8") / (q.at("F_uu") * q.at("G_nu"));
    } else {
        const RDModel& rd = *sys.rd;
        const Vec& u = tp.u_t;
        const Vec& v = tp.v_t;
        const Vec& p = tp.p_t;
        const Vec quad = rd.F_uu(u, mu, nu, v, v);
        const Vec x0 = rd.F_u(u, mu, nu).fullPivLu().solve(quad);
        const Vec x2 = rd.T(u, mu, nu, 2.0 * k).fullPivLu().solve(quad);
        const Vec cub = -rd.F_uu(u, mu, nu, x0, v) - 0.5 * rd.F_uu(u, mu, nu, x2, v) + 0.5 * rd.F_uuu(u, mu, nu, v, v, v);
        out.L = cub.dot(p);
        out.L_star = -rep.q.at("F_uu_vs_vt_pt") * rep.q.at("F_uu_vt_vt_ps") / rep.expansion.at("rho_tilde");
    }
    out.L_leading = out.L_star / delta;
    out.beta_degenerate = std::abs(out.beta) < 1e-12;
    out.opposite_signs = !out.beta_degenerate && (out.L_star * out.beta < 0.0);
    return out;
}

ExtendedCanonical extended_model_canonical(double gamma, double eta) {
    const double g2 = 2.0 + gamma;
    return {1.0 / g2, g2 / 4.0, -2.0 * g2 * g2 * (1.0 + gamma - eta)};
}

ExtendedParams extended_from_canonical(double alpha, double beta) {
    if (!(alpha > 0.0)) throw BifurcationError("alpha must be positive");
    const double gamma = 1.0 / alpha - 2.0;
    const double g2 = 2.0 + gamma;
    return {gamma, 1.0 + gamma + beta / (2.0 * g2 * g2), g2 / 4.0};
}

}  // namespace tfold
