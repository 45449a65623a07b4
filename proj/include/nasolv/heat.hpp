#pragma once

#include <cstdint>
#include <vector>

#include "nasolv/group.hpp"
#include "nasolv/parallel.hpp"
#include "nasolv/quadrature.hpp"

namespace nasolv {

struct HeatOptions {
    double tMin = 0.25;
    double thetaStep = 0.04;  // trapezoid step of the theta-integral in Psi_t
    double sStep = 0.05;      // step in s = log(xi)
    double sMin = -7.0;
    double rhoMax = 0.0;      // radial truncation; default 14 sqrt(t) + 12
    double relTol = 1e-6;
};

struct HorizontalGradient {
    std::vector<double> components;  // X_0 h, X_1 h, ..., X_q h

    double norm() const;
};

// Heat kernel h_t on G = R^Q x R via subordination to the Euclidean heat kernel.
// With c = cosh u + e^{-u}|z|^2 / 2 = cosh(rho),
//   h_t(z, u) = e^{-Qu/2} A_0(c),   A_k(c) = int Psi_t(xi) e^{-c/xi} (2 pi xi)^{-Q/2} xi^{-k} dxi.
class HeatEvaluator {
public:
    HeatEvaluator(const GroupModel& model, double t, const HeatOptions& opt = {});

    double t() const { return t_; }
    int Q() const { return Q_; }
    double rho_max() const { return rhoMax_; }
    const HeatOptions& options() const { return opt_; }
    const std::vector<double>& s_grid() const { return s_; }
    const std::vector<double>& psi_table() const { return psi_; }

    // Psi_t(xi) by direct theta quadrature.
    double psi(double xi) const;
    // xi-moment A_k(cosh rho); throws ConvergenceError beyond the tabulated range.
    double moment(int k, double rho) const;
    double kernel(const GPoint& x) const;
    HorizontalGradient gradient(const GPoint& x) const;
    // rho of the point x, i.e. the Riemannian distance to the identity
    double rho(const GPoint& x) const;

private:
    GroupModel model_;
    double t_;
    int Q_;
    HeatOptions opt_;
    double rhoMax_;
    std::vector<double> s_, xi_, psi_, w_;  // w = Psi xi (2 pi xi)^{-Q/2} ds
};

double psi_t(double t, double xi, const HeatOptions& opt = {});

// Closed-form H^3 heat kernel (Q = 2) in the normalisation of h_t:
// e^{u} h_t(z, u) = (4 pi t)^{-3/2} (rho / sinh rho) e^{-rho^2 / 4t}.
double h3_profile(double t, double rho);

// Integrals over G in (rho, u) coordinates, u = +-(rho - v^2).
struct HeatIntegrals {
    double mass = 0.0;           // int h dmu
    double l2 = 0.0;             // ||h||_2
    double gradL1 = 0.0;         // || |grad_H h|_g ||_1
    double oracleMass = 0.0;     // int of the H^3 closed form (Q = 2)
    double oracleL1Diff = 0.0;   // ||h - oracle||_1 (Q = 2)
    double tailEstimate = 0.0;   // relative contribution of the last radial panel
    int rhoNodes = 0;
};

HeatIntegrals heat_integrals(const HeatEvaluator& h, Exec exec = Exec::Parallel);

struct GradNormReport {
    double t = 0.0;
    double norm = 0.0;
    double scaled = 0.0;  // sqrt(t) * norm
    double tail = 0.0;
};
// Throws ConvergenceError when the tail estimate exceeds relTol.
GradNormReport grad_l1_norm(const HeatEvaluator& h, Exec exec = Exec::Parallel);

// ||h_s * h_s - h_{2s}||_1 (Q = 2), the convolution written in geodesic polar coordinates
// about the identity and summed on a truncated (rho, a) grid.
struct SemigroupReport {
    double l1Diff = 0.0;
    double l1Target = 0.0;
};
SemigroupReport semigroup_check(const HeatEvaluator& hs, const HeatEvaluator& h2s, Exec exec = Exec::Parallel);

// Relative change of A_0 at the given rho when both quadrature steps are halved.
double quadrature_refinement_change(const GroupModel& model, double t, double rho, const HeatOptions& opt = {});

// Max relative mismatch between analytic gradient components and central differences.
struct GradientFDReport {
    int points = 0;
    double maxRelErr = 0.0;
    double maxOddAtZero = 0.0;  // |X_j h| at z = 0, j >= 1
};
GradientFDReport gradient_fd_check(const HeatEvaluator& h, int points, std::uint64_t seed);

// h_t(x) <= m(x)^{1/2} h_t(0) at random points.
struct ModularBoundReport {
    int points = 0;
    int violations = 0;
    double maxRatio = 0.0;  // max h_t(x) / (m^{1/2}(x) h_t(0))
};
ModularBoundReport modular_bound_check(const HeatEvaluator& h, int points, std::uint64_t seed);

// Inner integral int_R int_0^inf cosh(a u) xi^{-2-a} exp(-(cosh th + cosh u)/xi) dxi du.
double inner_integral_numeric(double alpha, double theta);
// Same with the xi-integral done in closed form, Gamma(1 + a) (cosh th + cosh u)^{-1-a}.
double inner_integral_reduced(double alpha, double theta);
// Bound shape e^{-theta} (alpha > 0) or e^{-theta}(1 + theta) (alpha = 0).
double inner_integral_envelope(double alpha, double theta);

// Exponential decay of the radial profile phi(rho) = e^{Qu/2} h_t on (0, rhoTest].
struct EnvelopeReport {
    double logC = 0.0;        // smallest log C with phi(rho) <= C phi(0) e^{-b rho}
    double fittedRate = 0.0;  // slope of -log phi against rho
};
EnvelopeReport gaussian_envelope_check(const HeatEvaluator& h, double rhoTest, double b);

}  // namespace nasolv
