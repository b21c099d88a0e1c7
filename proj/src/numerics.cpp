#include "tfold/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tfold::num {

Eigen::MatrixXd fd_jacobian(const VecFn& f, const Eigen::VectorXd& x, double scale) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (int j = 0; j < x.size(); ++j) {
        const double h = fd_step(x[j], scale);
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

NewtonResult newton(const VecFn& f, Eigen::VectorXd x0, double tol, int max_iter) {
    NewtonResult r;
    r.x = std::move(x0);
    Eigen::VectorXd fx = f(r.x);
    r.residual = fx.lpNorm<Eigen::Infinity>();
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        if (!std::isfinite(r.residual)) break;
        if (r.residual < tol) {
            r.converged = true;
            return r;
        }
        const Eigen::MatrixXd J = fd_jacobian(f, r.x);
        const Eigen::VectorXd dx = J.fullPivLu().solve(-fx);
        double lam = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            Eigen::VectorXd xt = r.x + lam * dx;
            Eigen::VectorXd ft = f(xt);
            const double rt = ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(rt) && rt < r.residual * (1.0 - 1e-4 * lam)) {
                r.x = xt;
                fx = ft;
                r.residual = rt;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) {
            // accept a full step once stagnation is at round-off level
            Eigen::VectorXd xt = r.x + dx;
            Eigen::VectorXd ft = f(xt);
            const double rt = ft.lpNorm<Eigen::Infinity>();
            if (std::isfinite(rt) && rt <= r.residual) {
                r.x = xt;
                fx = ft;
                r.residual = rt;
            }
            r.converged = r.residual < tol;
            return r;
        }
    }
    r.converged = r.residual < tol;
    return r;
}

double d1(const std::function<double(double)>& g, double x, double scale) {
    const double h = fd_step(x, scale);
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

double d2(const std::function<double(double)>& g, double x, double scale) {
    const double h = fd_step(x, scale);
    return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
}

double d11(const std::function<double(double, double)>& g, double x, double y, double scale) {
    const double hx = fd_step(x, scale);
    const double hy = fd_step(y, scale);
    return (g(x + hx, y + hy) - g(x + hx, y - hy) - g(x - hx, y + hy) + g(x - hx, y - hy)) /
           (4.0 * hx * hy);
}

std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c) {
    using cd = std::complex<double>;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    const double shift = -a / 3.0;
    std::array<cd, 3> t;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double A = -std::copysign(std::cbrt(0.5 * std::abs(q) + s), q);
        const double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
        t[0] = cd(A + B, 0.0);
        t[1] = cd(-0.5 * (A + B), 0.5 * std::sqrt(3.0) * (A - B));
        t[2] = std::conj(t[1]);
    } else {
        const double r = std::sqrt(std::max(0.0, -p / 3.0));
        if (r == 0.0) {
            t = {cd(0.0), cd(0.0), cd(0.0)};
        } else {
            const double arg = std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0);
            const double phi = std::acos(arg);
            for (int k = 0; k < 3; ++k) t[k] = cd(2.0 * r * std::cos((phi + 2.0 * M_PI * k) / 3.0), 0.0);
        }
    }
    std::array<cd, 3> x;
    for (int k = 0; k < 3; ++k) {
        cd z = t[k] + shift;
        for (int it = 0; it < 2; ++it) {
            const cd f = ((z + a) * z + b) * z + c;
            const cd fp = (3.0 * z + 2.0 * a) * z + b;
            if (std::abs(fp) < 1e-300) break;
            const cd zn = z - f / fp;
            if (std::abs(((zn + a) * zn + b) * zn + c) < std::abs(f)) z = zn;
        }
        x[k] = z;
    }
    return x;
}

double cubic_max_real_part(double a, double b, double c) {
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    const double shift = -a / 3.0;
    auto polish = [&](double z) {
        for (int it = 0; it < 2; ++it) {
            const double f = ((z + a) * z + b) * z + c;
            const double fp = (3.0 * z + 2.0 * a) * z + b;
            if (fp == 0.0) break;
            const double zn = z - f / fp;
            if (std::abs(((zn + a) * zn + b) * zn + c) < std::abs(f)) z = zn;
        }
        return z;
    };
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double A = -std::copysign(std::cbrt(0.5 * std::abs(q) + s), q);
        const double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
        const double x0 = polish(A + B + shift);
        // the conjugate pair shares the remaining trace
        return std::max(x0, 0.5 * (-a - x0));
    }
    const double r = std::sqrt(std::max(0.0, -p / 3.0));
    if (r == 0.0) return polish(shift);
    const double phi = std::acos(std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0));
    double m = -1e300;
    for (int k = 0; k < 3; ++k) m = std::max(m, polish(2.0 * r * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift));
    return m;
}

double brent(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
    double a = lo, b = hi, c = hi;
    double fa = f(a), fb = f(b), fc = fb;
    if (fa * fb > 0.0) return std::numeric_limits<double>::quiet_NaN();
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return b;
}

}  // namespace tfold::num
