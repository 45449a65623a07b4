#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "nasolv/parallel.hpp"

namespace nasolv {

using Complex = std::complex<double>;
using CFn1 = std::function<Complex(double)>;

// A spectral multiplier F(lambda), lambda >= 0, given in closed form or by samples on a
// uniform grid [0, gridStep * (n - 1)] (linear interpolation, zero beyond the grid).
// With evenExtension set, the stored function is f(s) = F(s^2) instead of F.
struct MultiplierProfile {
    std::string name;
    CFn1 fn;
    std::vector<Complex> samples;
    double gridStep = 0.0;
    bool evenExtension = false;
    double bandLimit = 0.0;  // > 0: Fourier transform of f supported in [-bandLimit, bandLimit]

    Complex F(double lambda) const;
    Complex f(double s) const;
    double lambda_max() const;  // end of the sample grid, infinity for closed forms

    static MultiplierProfile closed_form(std::string name, CFn1 F);
    static MultiplierProfile from_samples(std::string name, std::vector<Complex> values, double step,
                                          bool evenExtension = false);
    static MultiplierProfile zero();
    static MultiplierProfile one();
    static MultiplierProfile heat(double t);          // e^{-t lambda}
    static MultiplierProfile imag_power(double gamma);  // lambda^{i gamma}
    static MultiplierProfile log_profile();           // log lambda
    static MultiplierProfile psi();                   // dyadic partition bump
    // "exp", "exp:t", "imagpower:g", "psi", "one", "zero", "log"
    static MultiplierProfile parse(const std::string& spec);
    // CSV rows "lambda,F" (or "lambda,re,im") on a uniform grid starting at 0
    static MultiplierProfile from_csv(const std::string& path);
};

MultiplierProfile dilate(const MultiplierProfile& F, double a);              // F(a lambda)
MultiplierProfile dyadic_piece(const MultiplierProfile& F, int j);           // F(2^j lambda) psi(lambda)
MultiplierProfile sampled(const MultiplierProfile& F, double lambdaMax, double step);

// Band-limited test multipliers: f(s) = sinc(a s)^{2n} (1 + g cos(b s)) with 2 n a + b = r,
// so that the Fourier transform of f is supported in [-r, r].
constexpr int kBandBankSize = 5;
MultiplierProfile band_limited_profile(int member, double r);

// C^infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);
// psi(lambda) = beta(log2 lambda) - beta(log2 lambda - 1), beta(y) = smooth_step(y + 1);
// supported in [1/2, 2] and sum_j psi(2^j lambda) = 1 on (0, inf).
double psi_bump(double lambda);

// Plancherel density |c_Q(s)|^{-2} of H^{Q+1}, normalised so that it is monic in s.
double plancherel_density(int Q, double s);
// c_Delta: 1 / (4 pi^2) for Q = 2, otherwise calibrated against ||h_1||_2.
double plancherel_constant(int Q);
// c_cal of the H^3 spherical transform: 1 / (2 pi^2).
double spherical_constant_h3();

struct KernelL2Report {
    double exact = 0.0;       // (c_Delta int_R |F(s^2)|^2 density(s) ds)^{1/2}
    double comparison = 0.0;  // (int_0^inf |F(l^2)|^2 (l^3 + l^{Q+1}) dl / l)^{1/2}
    double tail = 0.0;        // relative size of the integrand at the cut-off
    double sMax = 0.0;
};
// Norm of the kernel of F(Delta); throws ConvergenceError when the tail stays above tol.
KernelL2Report kernel_l2_norm(const MultiplierProfile& F, int Q, double tol = 1e-10);

// Radial part phi_F of the kernel of F(Delta) on H^3: k = m^{1/2} phi_F,
//   phi_F(r) = c_cal / sinh r * int_0^inf F(s^2) s sin(s r) ds,
// evaluated by the trapezoid rule in s, which is exact for band-limited integrands
// once the step resolves bandLimit + r.
struct SphericalOptions {
    double rMax = 10.0;      // largest radius that will be evaluated
    double band = 0.0;       // effective band of f when not band-limited; default 30
    double ds = 0.0;         // default from band and rMax
    double tailTol = 1e-13;  // relative size of |f(s) s| beyond the cut-off
    int maxNodes = 4000000;
};

class SphericalSynthesizer {
public:
    SphericalSynthesizer(const MultiplierProfile& F, const SphericalOptions& opt = {});

    Complex phi(double r) const;
    double ds() const { return ds_; }
    double s_max() const { return ds_ * static_cast<double>(w_.size()); }
    int nodes() const { return static_cast<int>(w_.size()); }

private:
    double ds_ = 0.0;
    std::vector<Complex> w_;  // ds * f(s_i) * s_i at s_i = i ds, i >= 1
};

struct RadialKernel {
    std::vector<double> r;
    std::vector<Complex> phi;
};
RadialKernel spherical_kernel_h3(const MultiplierProfile& F, const std::vector<double>& rGrid,
                                 const SphericalOptions& opt = {}, Exec exec = Exec::Parallel);

// Radial L^1 and L^2 norms of k = m^{1/2} phi over G (Q = 2) on [0, rMax].
double radial_l1(const std::function<double(double)>& absPhi, double rMax, int panels,
                 const std::function<double(double)>& weight = {});
double radial_l2(const std::function<double(double)>& absPhi, double rMax, int panels);

// Sobolev norm (int (1 + w^2)^s |g^(w)|^2 dw / 2 pi)^{1/2} on a periodised grid.
struct SobolevGrid {
    int n = 1 << 14;
    double halfWidth = 8.0;  // grid [-halfWidth, halfWidth)
};
double sobolev_norm(const CFn1& g, double s, const SobolevGrid& grid = {});

struct HebischOptions {
    int n = 1 << 14;
    double halfWidth = 6.283185307179586;  // grid [-2 pi, 2 pi), Nyquist 2^12
    int Lmax = 12;
    double alpha = 3.0;  // weights of the tail energies
    double beta = 3.0;
    int fitLo = 3;
    int fitHi = 10;
};

struct HebischDecomposition {
    std::vector<double> lambda;
    std::vector<Complex> f;
    std::vector<std::vector<Complex>> pieces;  // f_0..f_Lmax on the grid
    double reconstructionError = 0.0;          // max |f - sum f_l|
    double bandLeak = 0.0;                     // max |f_l^| beyond 2^l relative to max |f^|
    std::vector<double> energy;                // int |f_l|^2 (|l|^alpha + |l|^beta) dl
    double tailSlope = 0.0;                    // fitted slope of log2 energy against l
};
// Throws std::invalid_argument when f is not even or not supported in [-2, 2].
HebischDecomposition hebisch_decompose(const CFn1& f, const HebischOptions& opt = {});

enum class MHRegime { Low, High };

struct MHOptions {
    int quarterSteps = 40;  // t = 2^{k/4}, k in [-quarterSteps, -1] or [0, quarterSteps]
    SobolevGrid grid{};
};

struct MHNormReport {
    double norm = 0.0;
    double argmaxT = 0.0;
    std::vector<double> t, values;
};
// sup over t = 2^{k/4}, kLo <= k <= kHi, of ||F(t .) psi||_{H^s}
MHNormReport mh_norm_range(const MultiplierProfile& F, double s, int kLo, int kHi, const SobolevGrid& grid = {},
                           Exec exec = Exec::Parallel);
MHNormReport mh_norm(const MultiplierProfile& F, double s, MHRegime regime, const MHOptions& opt = {},
                     Exec exec = Exec::Parallel);

struct L1L2Point {
    int member = 0;
    double r = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;        // Plancherel
    double l2Radial = 0.0;  // from the synthesised kernel
    double ratio = 0.0;     // l1 / (min(r^{3/2}, r^{(Q+1)/2}) l2)
    double supportLeak = 0.0;  // max |phi| on [1.02 r, 2 r] over max |phi|
};

struct L1L2Report {
    std::vector<L1L2Point> points;
    double spread = 0.0;      // max ratio / min ratio
    double maxRatio = 0.0;    // fitted constant
    double slopeSmall = 0.0;  // mean slope of log(l1 / l2) against log r for r <= 1
    double slopeLarge = 0.0;  // same for r >= 1
    double maxLeak = 0.0;
    double maxL2Mismatch = 0.0;  // |l2Radial / l2 - 1|
};
L1L2Report l1_l2_check(const std::vector<double>& radii, int bankSize = kBandBankSize, Exec exec = Exec::Parallel);

// phi_F sinh(rho) is the sine transform of s f(s), taken by one FFT on a grid resolving
// supp f = [0, 2 / sqrt t] with samplesPerSupport points.
struct WeightedBoundOptions {
    int n = 1 << 20;
    int samplesPerSupport = 2048;
    HebischOptions hebisch{};
};

struct WeightedBoundReport {
    double t = 0.0;
    double epsilon = 0.0;
    double weightedL1 = 0.0;         // int |k| (1 + t^{-1/2} rho)^eps dmu
    double l1 = 0.0;
    double decompositionBound = 0.0;  // sum_l 2^{l eps} min(..)^{3/2} ||k_l||_2
    double rhoCut = 0.0;
    double tail = 0.0;  // share of the weighted norm from rho in [3/4 rhoCut, rhoCut]
};
// Q = 2; F supported in [0, 4].
WeightedBoundReport weighted_kernel_bounds(const MultiplierProfile& F, double t, double epsilon,
                                           const WeightedBoundOptions& opt = {});

// ||R_y h_t - h_t||_1 for y = (0, delta) against delta ||grad_H h_t||_1 (Q = 2).
struct TranslationPoint {
    double t = 0.0;
    double diff = 0.0;
    double gradBound = 0.0;
};
struct TranslationReport {
    std::vector<TranslationPoint> points;
    double slopeDiff = 0.0;  // slope of log(diff / delta) against log t
    double slopeGrad = 0.0;
    double maxRatio = 0.0;   // diff / gradBound
};
TranslationReport translation_check(const std::vector<double>& ts, double delta, Exec exec = Exec::Parallel);

struct DyadicPiece {
    int j = 0;
    double weightedL1 = 0.0;
    double sobolev = 0.0;
    double ratio = 0.0;
    bool zero = false;
};
struct DyadicDemoReport {
    std::vector<DyadicPiece> pieces;
    double supNonPositive = 0.0;  // sup of ratio over j <= 0
    double supPositive = 0.0;     // sup of ratio over j > 0
    double mhLow = 0.0;
    double mhHigh = 0.0;
};
DyadicDemoReport dyadic_multiplier_demo(const MultiplierProfile& F, double s0, double sInf, int jLo, int jHi,
                                        double epsilon = 0.1, Exec exec = Exec::Parallel);

}  // namespace nasolv
