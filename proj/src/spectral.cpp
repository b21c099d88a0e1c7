#include "tfold/spectral.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace tfold {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Spectral::Spectral(const Grid1D& g) : grid_(g) {
    grid_.validate();
    const int N = grid_.N;
    std::lock_guard<std::mutex> lock(planner_mutex());
    rbuf_ = fftw_alloc_real(N);
    if (grid_.bc == Boundary::periodic) {
        M_ = N / 2 + 1;
        keep_ = N / 3;
        k_.resize(M_);
        for (int j = 0; j < M_; ++j) k_[j] = 2.0 * M_PI * j / grid_.L;
        cbuf_ = fftw_alloc_complex(M_);
        plan_f_ = fftw_plan_dft_r2c_1d(N, rbuf_, static_cast<fftw_complex*>(cbuf_), FFTW_ESTIMATE);
        plan_b_ = fftw_plan_dft_c2r_1d(N, static_cast<fftw_complex*>(cbuf_), rbuf_, FFTW_ESTIMATE);
    } else {
        M_ = N;
        keep_ = (2 * N) / 3;
        k_.resize(M_);
        for (int j = 0; j < M_; ++j) k_[j] = M_PI * j / grid_.L;
        dbuf_ = fftw_alloc_real(N);
        plan_f_ = fftw_plan_r2r_1d(N, rbuf_, dbuf_, FFTW_REDFT10, FFTW_ESTIMATE);
        plan_b_ = fftw_plan_r2r_1d(N, dbuf_, rbuf_, FFTW_REDFT01, FFTW_ESTIMATE);
    }
}

Spectral::~Spectral() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_f_) fftw_destroy_plan(static_cast<fftw_plan>(plan_f_));
    if (plan_b_) fftw_destroy_plan(static_cast<fftw_plan>(plan_b_));
    if (rbuf_) fftw_free(rbuf_);
    if (cbuf_) fftw_free(cbuf_);
    if (dbuf_) fftw_free(dbuf_);
}

void Spectral::forward(const double* in, cplx* out) {
    const int N = grid_.N;
    std::copy(in, in + N, rbuf_);
    fftw_execute(static_cast<fftw_plan>(plan_f_));
    if (grid_.bc == Boundary::periodic) {
        auto* c = static_cast<fftw_complex*>(cbuf_);
        for (int j = 0; j < M_; ++j) out[j] = cplx(c[j][0], c[j][1]);
    } else {
        for (int j = 0; j < M_; ++j) out[j] = cplx(dbuf_[j], 0.0);
    }
}

void Spectral::backward(const cplx* in, double* out) {
    const int N = grid_.N;
    double scale;
    if (grid_.bc == Boundary::periodic) {
        auto* c = static_cast<fftw_complex*>(cbuf_);
        for (int j = 0; j < M_; ++j) {
            c[j][0] = in[j].real();
            c[j][1] = in[j].imag();
        }
        scale = 1.0 / N;
    } else {
        for (int j = 0; j < M_; ++j) dbuf_[j] = in[j].real();
        scale = 1.0 / (2.0 * N);
    }
    fftw_execute(static_cast<fftw_plan>(plan_b_));
    for (int i = 0; i < N; ++i) out[i] = rbuf_[i] * scale;
}

void Spectral::dealias(cplx* c) const {
    for (int j = keep_ + 1; j < M_; ++j) c[j] = 0.0;
}

std::vector<double> Spectral::even_derivative(const std::vector<double>& u, int j) {
    std::vector<cplx> c(M_);
    forward(u.data(), c.data());
    for (int m = 0; m < M_; ++m) c[m] *= std::pow(-k_[m] * k_[m], j);
    std::vector<double> out(grid_.N);
    backward(c.data(), out.data());
    return out;
}

}  // namespace tfold
