#pragma once

#include <complex>
#include <vector>

#include "tfold/models.hpp"

namespace tfold {

// Real-to-spectral transform on a 1-D grid: r2c FFT for periodic, DCT-II/III for Neumann.
// Coefficients are stored as complex numbers in both cases (imaginary parts vanish for Neumann).
class Spectral {
public:
    explicit Spectral(const Grid1D& g);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int modes() const { return M_; }
    int points() const { return grid_.N; }
    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& wavenumbers() const { return k_; }

    void forward(const double* in, cplx* out);
    void backward(const cplx* in, double* out);
    void dealias(cplx* c) const;

    // d^{2j}/dx^{2j} of a physical field, computed spectrally
    std::vector<double> even_derivative(const std::vector<double>& u, int j);

private:
    Grid1D grid_;
    int M_ = 0;
    int keep_ = 0;
    std::vector<double> k_;
    double* rbuf_ = nullptr;
    void* cbuf_ = nullptr;
    double* dbuf_ = nullptr;
    void* plan_f_ = nullptr;
    void* plan_b_ = nullptr;
};

}  // namespace tfold
