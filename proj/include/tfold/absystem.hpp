#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tfold {

using cplx = std::complex<double>;

class ABError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A_tau = A'' + A - AB,  B_tau / alpha = d B'' + 1 - R - B^2 + beta |A|^2
struct CanonicalAB {
    double alpha = 0.5;
    double d = 0.5;
    double beta = 8.0;
    double R = 0.0;

    CanonicalAB() = default;
    CanonicalAB(double alpha_, double d_, double beta_, double R_ = 0.0);
};

enum class Branch { homogeneous_plus, homogeneous_minus, periodic };

struct PlaneWaveState {
    double K = 0.0;
    double R = 0.0;
    double A_bar = 0.0;
    double B_bar = 0.0;
    Branch branch = Branch::periodic;
};

enum class StabilityClass { nonexistent, stable, ode_unstable, sideband_unstable, turing_unstable };

std::string to_string(StabilityClass c);
std::string to_string(Branch b);

struct Boundaries {
    double R_e = 0.0;
    double R_s = 0.0;
    std::optional<double> R_t;
    bool exists_turing = false;
};

struct StabilityReport {
    StabilityClass cls = StabilityClass::nonexistent;
    StabilityClass brute = StabilityClass::nonexistent;
    double max_growth = 0.0;
    double k_critical = 0.0;
    Boundaries boundaries;
    bool near_boundary = false;  // R within the proximity band of a boundary curve
};

// periodic member of the family, nullopt when it does not exist; beta = 0 throws
std::optional<PlaneWaveState> plane_wave(const CanonicalAB& ab, double K);
// (0, +-sqrt(1 - R)), requires R <= 1
PlaneWaveState homogeneous_state(const CanonicalAB& ab, bool plus);

Boundaries boundary_curves(const CanonicalAB& ab, double K);

double R_e(double K);
double R_s(double K);
double R_t(double d, double K);
double K_st(double d);
double R_st(double d);

// linearisation about a plane wave for perturbations e^{ik xi}, acting on (Re a, Im a, b)
Eigen::Matrix3cd spectral_matrix(const CanonicalAB& ab, const PlaneWaveState& w, double k);
// the same operator after conjugation by diag(1, i, 1), which is real
Eigen::Matrix3d spectral_matrix_real(const CanonicalAB& ab, const PlaneWaveState& w, double k);

// largest real part of the three eigenvalues; closed-form cubic, or Eigen on the complex matrix
double growth_rate(const CanonicalAB& ab, const PlaneWaveState& w, double k);
double growth_rate_reference(const CanonicalAB& ab, const PlaneWaveState& w, double k);

struct ScanOptions {
    int points = 2000;
    double tol = 1e-10;
    bool reference = false;
};

struct ScanResult {
    StabilityClass cls = StabilityClass::stable;
    double max_growth = 0.0;
    double k_critical = 0.0;
};

StabilityClass classify_closed(const CanonicalAB& ab, double K);
ScanResult classify_scan(const CanonicalAB& ab, double K, const ScanOptions& opt = {});
StabilityReport classify(const CanonicalAB& ab, double K, const ScanOptions& opt = {});

struct BusseRaster {
    double alpha = 0.0, d = 0.0, beta = 0.0;
    std::vector<double> K, R;
    std::vector<StabilityClass> closed, brute;  // row-major in R, columns in K
    std::vector<double> max_growth;
    int nK() const { return static_cast<int>(K.size()); }
    int nR() const { return static_cast<int>(R.size()); }
};

struct BusseOptions {
    bool brute = true;
    bool parallel = true;
    ScanOptions scan;
};

BusseRaster busse_map(double alpha, double d, double beta, double Kmin, double Kmax, int nK, double Rmin,
                      double Rmax, int nR, const BusseOptions& opt = {});

// cells whose closed-form and scan classes differ, and how many of those touch a class boundary
struct RasterAgreement {
    int cells = 0;
    int disagree = 0;
    int disagree_off_boundary = 0;
};
RasterAgreement compare_raster(const BusseRaster& r);

// K_s(R) / K_e(R) from the exact existence and sideband curves
double eckhaus_ratio(double R);

}  // namespace tfold
