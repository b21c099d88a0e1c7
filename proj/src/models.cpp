#include "tfold/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfold/numerics.hpp"
#include "tfold/spectral.hpp"

namespace tfold {

namespace {

double falling(int e, int r) {
    if (r > e) return 0.0;
    double f = 1.0;
    for (int i = 0; i < r; ++i) f *= (e - i);
    return f;
}

double poly_deriv(const std::vector<double>& c, double u, int r) {
    double s = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= r; --i) s = s * u + c[i] * falling(i, r);
    return s;
}

double mk2(double k, int j) { return std::pow(-k * k, j); }

// d/dk (-k^2)^j and d^2/dk^2 (-k^2)^j
double mk2_k(double k, int j) { return j == 0 ? 0.0 : -2.0 * k * j * std::pow(-k * k, j - 1); }
double mk2_kk(double k, int j) {
    if (j == 0) return 0.0;
    double v = -2.0 * j * std::pow(-k * k, j - 1);
    if (j >= 2) v += 4.0 * k * k * j * (j - 1) * std::pow(-k * k, j - 2);
    return v;
}

}  // namespace

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(N);
    const double h = L / N;
    for (int j = 0; j < N; ++j) x[j] = (bc == Boundary::periodic ? j : j + 0.5) * h;
    return x;
}

void Grid1D::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw ModelError("grid length must be positive");
    if (N < 16) throw ModelError("grid needs at least 16 points");
}

double ScalarReaction::F(double u, double mu) const { return poly_deriv(p, u, 0) + mu * poly_deriv(q, u, 0); }
double ScalarReaction::F_u(double u, double mu) const { return poly_deriv(p, u, 1) + mu * poly_deriv(q, u, 1); }
double ScalarReaction::F_uu(double u, double mu) const { return poly_deriv(p, u, 2) + mu * poly_deriv(q, u, 2); }
double ScalarReaction::F_uuu(double u, double mu) const { return poly_deriv(p, u, 3) + mu * poly_deriv(q, u, 3); }
double ScalarReaction::F_mu(double u, double) const { return poly_deriv(q, u, 0); }
double ScalarReaction::F_umu(double u, double) const { return poly_deriv(q, u, 1); }

double ScalarReaction::linear_coefficient(double mu) const {
    return (p.size() > 1 ? p[1] : 0.0) + mu * (q.size() > 1 ? q[1] : 0.0);
}

ScalarReaction ScalarReaction::example() { return ScalarReaction{{0.0, 0.0, 2.0, -1.0}, {0.0, 1.0}}; }

double GeneralScalarModel::bcoef(int j, int l) const {
    if (j > l) std::swap(j, l);
    if (j < 1 || j > static_cast<int>(b.size())) return 0.0;
    const auto& row = b[j - 1];
    if (l > static_cast<int>(row.size())) return 0.0;
    return row[l - 1];
}

double GeneralScalarModel::ccoef(int j) const {
    return (j >= 1 && j <= static_cast<int>(c.size())) ? c[j - 1] : 0.0;
}

double GeneralScalarModel::G(double u, double k, double nu_) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += (lin(j, nu_) + ccoef(j) * u) * mk2(k, j);
    return s;
}

double GeneralScalarModel::G_k(double u, double k, double nu_) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += (lin(j, nu_) + ccoef(j) * u) * mk2_k(k, j);
    return s;
}

double GeneralScalarModel::G_kk(double u, double k, double nu_) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += (lin(j, nu_) + ccoef(j) * u) * mk2_kk(k, j);
    return s;
}

double GeneralScalarModel::G_nu(double k) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s -= a_tilde[j - 1] * mk2(k, j);
    return s;
}

double GeneralScalarModel::G_knu(double k) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s -= a_tilde[j - 1] * mk2_k(k, j);
    return s;
}

double GeneralScalarModel::G_u(double k) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += ccoef(j) * mk2(k, j);
    return s;
}

double GeneralScalarModel::G_ku(double k) const {
    double s = 0.0;
    for (int j = 1; j <= m; ++j) s += ccoef(j) * mk2_k(k, j);
    return s;
}

double GeneralScalarModel::P(double k1, double k2) const {
    double s = 0.0;
    for (int j = 1; j <= nb(); ++j)
        for (int l = j; l <= nb(); ++l) {
            const double bj = bcoef(j, l);
            if (bj != 0.0) s += bj * (mk2(k1, j) * mk2(k2, l) + mk2(k2, j) * mk2(k1, l));
        }
    return s;
}

double GeneralScalarModel::S(double Fuu, double k1, double k2) const {
    double s = Fuu + P(k1, k2);
    for (int j = 1; j <= m; ++j) s += ccoef(j) * (mk2(k1, j) + mk2(k2, j));
    return s;
}

void GeneralScalarModel::validate() const {
    if (m < 3) throw ModelError("scalar model order must satisfy m >= 3");
    if (static_cast<int>(a.size()) != m || static_cast<int>(a_tilde.size()) != m)
        throw ModelError("a and a_tilde must have m entries");
    if (static_cast<int>(c.size()) > m) throw ModelError("c has more than m entries");
    if (static_cast<int>(b.size()) > nb()) throw ModelError("b table exceeds floor((m-1)/2) rows");
    for (const auto& row : b)
        if (static_cast<int>(row.size()) > nb()) throw ModelError("b table exceeds floor((m-1)/2) columns");
    if (reaction.p.empty() && reaction.q.empty()) throw ModelError("reaction has no terms");
}

bool GeneralScalarModel::well_posed(double nu_) const {
    const double lead = lin(m, nu_);
    return (m % 2 == 1) ? lead > 0.0 : lead < 0.0;
}

GeneralScalarModel to_general(const ScalarSixthOrder& s) {
    GeneralScalarModel g;
    g.m = 3;
    g.a = {0.0, 2.0, 1.0};
    g.a_tilde = {-1.0, 0.0, 0.0};
    g.b = {{s.eta}};
    g.c = {s.gamma};
    g.reaction = ScalarReaction::example();
    g.mu = s.mu;
    g.nu = s.nu;
    g.k_scan_max = 3.0;
    return g;
}

double RDModel::partial(int i, const Vec& u, double mu_, double nu_, const std::vector<int>& du, int dmu,
                        int dnu) const {
    std::vector<int> cnt(n, 0);
    for (int j : du) cnt[j]++;
    double s = 0.0;
    for (const auto& t : terms) {
        if (t.comp != i) continue;
        double v = t.coef * falling(t.pm, dmu) * falling(t.pn, dnu);
        if (v == 0.0) continue;
        v *= std::pow(mu_, t.pm - dmu) * std::pow(nu_, t.pn - dnu);
        for (int j = 0; j < n && v != 0.0; ++j) {
            const int e = j < static_cast<int>(t.e.size()) ? t.e[j] : 0;
            v *= falling(e, cnt[j]);
            if (e - cnt[j] > 0) v *= std::pow(u[j], e - cnt[j]);
        }
        s += v;
    }
    return s;
}

Vec RDModel::F(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 0, 0);
    return f;
}

Mat RDModel::F_u(const Vec& u, double mu_, double nu_) const {
    Mat J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = partial(i, u, mu_, nu_, {j}, 0, 0);
    return J;
}

Vec RDModel::F_uu(const Vec& u, double mu_, double nu_, const Vec& v, const Vec& w) const {
    Vec r = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const double vw = v[j] * w[l];
                if (vw != 0.0) r[i] += partial(i, u, mu_, nu_, {j, l}, 0, 0) * vw;
            }
    return r;
}

Vec RDModel::F_uuu(const Vec& u, double mu_, double nu_, const Vec& v, const Vec& w, const Vec& z) const {
    Vec r = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                for (int q = 0; q < n; ++q) {
                    const double p = v[j] * w[l] * z[q];
                    if (p != 0.0) r[i] += partial(i, u, mu_, nu_, {j, l, q}, 0, 0) * p;
                }
    return r;
}

Vec RDModel::F_mu(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 1, 0);
    return f;
}

Vec RDModel::F_nu(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 0, 1);
    return f;
}

Mat RDModel::F_umu(const Vec& u, double mu_, double nu_) const {
    Mat J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = partial(i, u, mu_, nu_, {j}, 1, 0);
    return J;
}

Mat RDModel::F_unu(const Vec& u, double mu_, double nu_) const {
    Mat J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = partial(i, u, mu_, nu_, {j}, 0, 1);
    return J;
}

Vec RDModel::F_mumu(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 2, 0);
    return f;
}

Vec RDModel::F_munu(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 1, 1);
    return f;
}

Vec RDModel::F_nunu(const Vec& u, double mu_, double nu_) const {
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = partial(i, u, mu_, nu_, {}, 0, 2);
    return f;
}

Mat RDModel::T(const Vec& u, double mu_, double nu_, double k) const {
    Mat t = F_u(u, mu_, nu_);
    for (int i = 0; i < n; ++i) t(i, i) -= k * k * D[i];
    return t;
}

void RDModel::validate() const {
    if (n < 1) throw ModelError("RD model needs at least one component");
    if (static_cast<int>(D.size()) != n) throw ModelError("D must have n entries");
    for (double d : D)
        if (!(d > 0.0)) throw ModelError("diffusion coefficients must be strictly positive");
    for (const auto& t : terms) {
        if (t.comp < 0 || t.comp >= n) throw ModelError("monomial component out of range");
        if (static_cast<int>(t.e.size()) > n) throw ModelError("monomial exponent list longer than n");
        if (t.pm < 0 || t.pn < 0) throw ModelError("negative parameter power");
        for (int e : t.e)
            if (e < 0) throw ModelError("negative exponent");
    }
}

RDModel make_rd_builtin(const std::string& name, const std::map<std::string, double>& params,
                        const std::vector<double>& D) {
    auto par = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    RDModel r;
    r.name = name;
    if (name == "scalar_lift") {
        r.n = D.empty() ? 3 : static_cast<int>(D.size());
        if (r.n < 2) throw ModelError("scalar_lift needs n >= 2");
        r.D = D.empty() ? std::vector<double>(r.n, 1.0) : D;
        const double couple = par("couple", 0.5);
        auto e1 = [&](int j, int p) {
            std::vector<int> e(r.n, 0);
            e[j] = p;
            return e;
        };
        r.terms.push_back({0, 1.0, 1, 0, e1(0, 1)});
        r.terms.push_back({0, 2.0, 0, 0, e1(0, 2)});
        r.terms.push_back({0, -1.0, 0, 0, e1(0, 3)});
        for (int i = 1; i < r.n; ++i) {
            r.terms.push_back({i, couple, 0, 0, e1(0, 1)});
            r.terms.push_back({i, -1.0, 0, 0, e1(i, 1)});
        }
        r.k_scan_max = 3.0;
    } else if (name == "fold_turing3") {
        r.n = 3;
        r.D = D.empty() ? std::vector<double>{0.05, 1.0, 10.0} : D;
        const double kappa = par("kappa", 1.5), c = par("c", 1.0), s = par("s", 0.0);
        r.terms = {
            {0, 1.0, 1, 0, {0, 0, 0}},  {0, -1.0, 0, 0, {2, 0, 0}}, {0, -1.0, 0, 0, {0, 1, 0}},
            {0, 1.0, 0, 0, {0, 0, 1}},  {0, s, 0, 0, {1, 1, 0}},    {1, kappa, 0, 0, {1, 0, 0}},
            {1, -1.0, 0, 1, {1, 0, 0}}, {1, -1.0, 0, 0, {0, 1, 0}}, {2, c, 0, 0, {1, 0, 0}},
            {2, -1.0, 0, 0, {0, 0, 1}},
        };
        r.k_scan_max = 5.0;
    } else {
        throw ModelError("unknown built-in reaction: " + name);
    }
    r.validate();
    return r;
}

int component_count(const ModelSpec& m) {
    if (const auto* rd = std::get_if<RDModel>(&m)) return rd->n;
    return 1;
}

namespace {

GeneralScalarModel scalar_of(const ModelSpec& m) {
    if (const auto* s6 = std::get_if<ScalarSixthOrder>(&m)) return to_general(*s6);
    return std::get<GeneralScalarModel>(m);
}

}  // namespace

std::vector<double> eval_rhs(const ModelSpec& model, const std::vector<double>& field, const Grid1D& grid) {
    grid.validate();
    const int N = grid.N;
    const int n = component_count(model);
    if (static_cast<int>(field.size()) != n * N) throw ModelError("field length does not match grid");
    Spectral sp(grid);
    std::vector<double> out(n * N, 0.0);
    if (const auto* rd = std::get_if<RDModel>(&model)) {
        std::vector<std::vector<double>> lap(n);
        for (int i = 0; i < n; ++i) {
            std::vector<double> ui(field.begin() + i * N, field.begin() + (i + 1) * N);
            lap[i] = sp.even_derivative(ui, 1);
        }
        Vec u(n);
        for (int x = 0; x < N; ++x) {
            for (int i = 0; i < n; ++i) u[i] = field[i * N + x];
            const Vec f = rd->F(u, rd->mu, rd->nu);
            for (int i = 0; i < n; ++i) {
                if (!std::isfinite(f[i])) throw ModelError("non-finite reaction value");
                out[i * N + x] = f[i] + rd->D[i] * lap[i][x];
            }
        }
        return out;
    }
    const GeneralScalarModel g = scalar_of(model);
    std::vector<std::vector<double>> dU(g.m + 1);
    dU[0] = field;
    for (int j = 1; j <= g.m; ++j) dU[j] = sp.even_derivative(field, j);
    for (int x = 0; x < N; ++x) {
        const double u = field[x];
        double r = g.reaction.F(u, g.mu);
        if (!std::isfinite(r)) throw ModelError("non-finite reaction value");
        for (int j = 1; j <= g.m; ++j) r += (g.lin(j, g.nu) + g.ccoef(j) * u) * dU[j][x];
        for (int j = 1; j <= g.nb(); ++j)
            for (int l = j; l <= g.nb(); ++l) r += g.bcoef(j, l) * dU[j][x] * dU[l][x];
        out[x] = r;
    }
    return out;
}

namespace {

std::vector<double> real_poly_roots(const std::vector<double>& c) {
    int deg = static_cast<int>(c.size()) - 1;
    while (deg > 0 && c[deg] == 0.0) --deg;
    std::vector<double> roots;
    if (deg <= 0) return roots;
    Mat comp = Mat::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(0, i) = -c[deg - 1 - i] / c[deg];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Mat> es(comp);
    for (int i = 0; i < deg; ++i) {
        const cplx z = es.eigenvalues()[i];
        if (std::abs(z.imag()) < 1e-6 * std::max(1.0, std::abs(z))) roots.push_back(z.real());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

std::vector<HomogeneousState> homogeneous_states(const ModelSpec& model, double mu, double nu,
                                                 const std::vector<Vec>& seeds) {
    std::vector<HomogeneousState> out;
    if (!std::holds_alternative<RDModel>(model)) {
        const GeneralScalarModel g = scalar_of(model);
        const auto& R = g.reaction;
        const std::size_t len = std::max(R.p.size(), R.q.size());
        std::vector<double> c(len, 0.0);
        for (std::size_t i = 0; i < len; ++i)
            c[i] = (i < R.p.size() ? R.p[i] : 0.0) + mu * (i < R.q.size() ? R.q[i] : 0.0);
        for (double r : real_poly_roots(c)) {
            // polish simple roots; double roots are left at companion accuracy
            for (int it = 0; it < 8; ++it) {
                const double f = R.F(r, mu), fp = R.F_u(r, mu);
                if (std::abs(f) < 1e-15 || std::abs(fp) < 1e-10) break;
                r -= f / fp;
            }
            HomogeneousState h;
            h.u = Vec::Constant(1, r);
            h.residual = std::abs(R.F(r, mu));
            h.ode_stable = R.F_u(r, mu) < 0.0;
            out.push_back(h);
        }
        for (const auto& h : out)
            if (h.residual > 1e-10) throw ModelError("homogeneous root residual above tolerance");
        return out;
    }
    const auto& rd = std::get<RDModel>(model);
    std::vector<Vec> starts = seeds;
    if (starts.empty()) {
        for (double s : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) starts.push_back(Vec::Constant(rd.n, s));
    }
    std::vector<Vec> found;
    for (const auto& s0 : starts) {
        // deflated Newton: each known root multiplies the residual by (1/||u - r||^2 + 1)
        auto deflated = [&](const Vec& u) {
            Vec f = rd.F(u, mu, nu);
            for (const auto& r : found) f *= 1.0 / (u - r).squaredNorm() + 1.0;
            return f;
        };
        auto res = num::newton(deflated, s0, 1e-12, 80);
        if (!res.converged) continue;
        auto plain = num::newton([&](const Vec& u) { return rd.F(u, mu, nu); }, res.x, 1e-13, 10);
        const double r = rd.F(plain.x, mu, nu).lpNorm<Eigen::Infinity>();
        if (r > 1e-10) continue;
        bool dup = false;
        for (const auto& f : found) dup = dup || (f - plain.x).norm() < 1e-7;
        if (!dup) found.push_back(plain.x);
    }
    if (found.empty()) throw ModelError("no homogeneous state found from the provided seeds");
    for (const auto& u : found) {
        HomogeneousState h;
        h.u = u;
        h.residual = rd.F(u, mu, nu).lpNorm<Eigen::Infinity>();
        Eigen::EigenSolver<Mat> es(rd.F_u(u, mu, nu));
        h.ode_stable = es.eigenvalues().real().maxCoeff() < 0.0;
        out.push_back(h);
    }
    return out;
}

DispersionSample dispersion(const ModelSpec& model, const Vec& u, double k, double mu, double nu) {
    DispersionSample s;
    s.k = k;
    if (const auto* rd = std::get_if<RDModel>(&model)) {
        Eigen::EigenSolver<Mat> es(rd->T(u, mu, nu, k), false);
        if (es.info() != Eigen::Success) throw ModelError("eigenvalue solver did not converge");
        for (int i = 0; i < rd->n; ++i) s.omega.push_back(es.eigenvalues()[i]);
        std::sort(s.omega.begin(), s.omega.end(),
                  [](const cplx& a, const cplx& b) { return a.real() > b.real(); });
        return s;
    }
    const GeneralScalarModel g = scalar_of(model);
    s.omega.push_back(g.reaction.F_u(u[0], mu) + g.G(u[0], k, nu));
    return s;
}

std::vector<cplx> track_leading_branch(const RDModel& model, const Vec& u, double mu, double nu,
                                       const std::vector<double>& ks) {
    std::vector<cplx> out;
    Eigen::VectorXcd prev;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        Eigen::EigenSolver<Mat> es(model.T(u, mu, nu, ks[i]));
        const auto& ev = es.eigenvalues();
        const auto& V = es.eigenvectors();
        int pick = 0;
        if (i == 0) {
            for (int j = 1; j < model.n; ++j)
                if (ev[j].real() > ev[pick].real()) pick = j;
        } else {
            double best = -1.0;
            for (int j = 0; j < model.n; ++j) {
                const double ov = std::abs(prev.dot(V.col(j))) / (prev.norm() * V.col(j).norm());
                if (ov > best) {
                    best = ov;
                    pick = j;
                }
            }
        }
        prev = V.col(pick);
        out.push_back(ev[pick]);
    }
    return out;
}

double char_poly(const ModelSpec& model, double lambda, const Vec& u, double mu, double nu, double k) {
    if (const auto* rd = std::get_if<RDModel>(&model)) {
        Mat t = rd->T(u, mu, nu, k);
        t.diagonal().array() -= lambda;
        return t.determinant();
    }
    const GeneralScalarModel g = scalar_of(model);
    return g.reaction.F_u(u[0], mu) + g.G(u[0], k, nu) - lambda;
}

DispersionDerivatives dispersion_derivatives(const ModelSpec& model, const Vec& u, double k, double mu,
                                             double nu, const std::vector<std::string>& which) {
    DispersionDerivatives out;
    auto want = [&](const std::string& s) { return std::find(which.begin(), which.end(), s) != which.end(); };

    if (!std::holds_alternative<RDModel>(model)) {
        const GeneralScalarModel g = scalar_of(model);
        const double x = u[0];
        const auto& R = g.reaction;
        out.s["omega_k"] = g.G_k(x, k, nu);
        out.s["omega_kk"] = g.G_kk(x, k, nu);
        out.s["omega_mu"] = R.F_umu(x, mu);
        out.s["omega_nu"] = g.G_nu(k);
        out.s["rho_kk"] = g.G_kk(x, 0.0, nu);
        if (want("P")) {
            out.s["P_lambda"] = -1.0;
            out.s["P_mu"] = R.F_umu(x, mu);
            out.s["P_nu"] = g.G_nu(k);
            out.s["P_k"] = g.G_k(x, k, nu);
            out.s["P_kk"] = g.G_kk(x, k, nu);
            out.s["P_kmu"] = 0.0;
            out.s["P_knu"] = g.G_knu(k);
            out.s["Q_mu"] = R.F_umu(x, mu);
            out.s["Q_nu"] = 0.0;
            out.v["P_u"] = Vec::Constant(1, R.F_uu(x, mu) + g.G_u(k));
            out.v["P_ku"] = Vec::Constant(1, g.G_ku(k));
            out.v["Q_u"] = Vec::Constant(1, R.F_uu(x, mu));
        }
        return out;
    }

    const auto& rd = std::get<RDModel>(model);
    const int n = rd.n;
    // the branch of interest is the leading eigenvalue at k; it must be real and simple
    auto leading = [&](double kk) {
        const DispersionSample ds = dispersion(model, u, kk, mu, nu);
        if (n > 1 && std::abs(ds.omega[0] - ds.omega[1]) < 1e-8)
            throw ModelError("leading eigenvalue is not simple (spectral gap below 1e-8)");
        if (std::abs(ds.omega[0].imag()) > 1e-8)
            throw ModelError("leading eigenvalue is complex; derivatives refer to a real branch");
        return ds.omega[0].real();
    };
    const double lam = leading(k);
    auto Pf = [&](double l, const Vec& uu, double m_, double n_, double kk) {
        return char_poly(model, l, uu, m_, n_, kk);
    };
    using num::d1;
    using num::d11;
    using num::d2;
    const double P_l = d1([&](double l) { return Pf(l, u, mu, nu, k); }, lam);
    const double P_ll = d2([&](double l) { return Pf(l, u, mu, nu, k); }, lam);
    const double P_k = d1([&](double kk) { return Pf(lam, u, mu, nu, kk); }, k);
    const double P_kk = d2([&](double kk) { return Pf(lam, u, mu, nu, kk); }, k);
    const double P_kl = d11([&](double kk, double l) { return Pf(l, u, mu, nu, kk); }, k, lam);
    const double P_m = d1([&](double m_) { return Pf(lam, u, m_, nu, k); }, mu);
    const double P_n = d1([&](double n_) { return Pf(lam, u, mu, n_, k); }, nu);
    const double wk = -P_k / P_l;
    out.s["omega_k"] = wk;
    out.s["omega_kk"] = -(P_kk + 2.0 * P_kl * wk + P_ll * wk * wk) / P_l;
    out.s["omega_mu"] = -P_m / P_l;
    out.s["omega_nu"] = -P_n / P_l;
    {
        const double lam0 = leading(0.0);
        const double P0_l = d1([&](double l) { return Pf(l, u, mu, nu, 0.0); }, lam0);
        const double P0_kk = d2([&](double kk) { return Pf(lam0, u, mu, nu, kk); }, 0.0);
        out.s["rho_kk"] = -P0_kk / P0_l;
    }
    if (want("P")) {
        out.s["P_lambda"] = P_l;
        out.s["P_mu"] = P_m;
        out.s["P_nu"] = P_n;
        out.s["P_k"] = P_k;
        out.s["P_kk"] = P_kk;
        out.s["P_kmu"] = d11([&](double kk, double m_) { return Pf(lam, u, m_, nu, kk); }, k, mu);
        out.s["P_knu"] = d11([&](double kk, double n_) { return Pf(lam, u, mu, n_, kk); }, k, nu);
        Vec Pu(n), Pku(n), Qu(n);
        for (int i = 0; i < n; ++i) {
            auto shift = [&](double xi) {
                Vec w = u;
                w[i] = xi;
                return w;
            };
            Pu[i] = d1([&](double xi) { return Pf(lam, shift(xi), mu, nu, k); }, u[i]);
            Pku[i] = d11([&](double kk, double xi) { return Pf(lam, shift(xi), mu, nu, kk); }, k, u[i]);
            Qu[i] = d1([&](double xi) { return Pf(0.0, shift(xi), mu, nu, 0.0); }, u[i]);
        }
        out.v["P_u"] = Pu;
        out.v["P_ku"] = Pku;
        out.v["Q_u"] = Qu;
        out.s["Q_mu"] = d1([&](double m_) { return Pf(0.0, u, m_, nu, 0.0); }, mu);
        out.s["Q_nu"] = d1([&](double n_) { return Pf(0.0, u, mu, n_, 0.0); }, nu);
    }
    return out;
}

}  // namespace tfold
