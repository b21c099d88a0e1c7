#pragma once

#include <array>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace tfold::num {

inline double fd_step(double x, double scale = 1e-6) { return scale * std::max(1.0, std::abs(x)); }

struct NewtonResult {
    Eigen::VectorXd x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

using VecFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Damped Newton with a central-difference Jacobian. Stops on ||f||_inf < tol.
NewtonResult newton(const VecFn& f, Eigen::VectorXd x0, double tol = 1e-12, int max_iter = 60);

Eigen::MatrixXd fd_jacobian(const VecFn& f, const Eigen::VectorXd& x, double scale = 1e-6);

// central differences of a scalar function of one variable
double d1(const std::function<double(double)>& g, double x, double scale = 1e-6);
double d2(const std::function<double(double)>& g, double x, double scale = 1e-4);
// mixed second derivative of g(x, y)
double d11(const std::function<double(double, double)>& g, double x, double y, double scale = 1e-4);

// roots of x^3 + a x^2 + b x + c
std::array<std::complex<double>, 3> cubic_roots(double a, double b, double c);
// largest real part among those roots
double cubic_max_real_part(double a, double b, double c);

double brent(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14,
             int max_iter = 200);

}  // namespace tfold::num
