#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "nasolv/group.hpp"
#include "nasolv/parallel.hpp"
#include "nasolv/quadrature.hpp"

namespace nasolv {

struct HJStateN {
    NPoint z;
    NPoint zeta;
};

struct HJStateG {
    NPoint z;
    double u = 0.0;
    NPoint zeta;
    double nu = 0.0;
};

// <M_z zeta, zeta> = sum_j (X_j(z) . zeta)^2
double quad_form(const GroupModel& m, const NPoint& z, const NPoint& zeta);
double hamiltonian_n(const GroupModel& m, const HJStateN& s);
double hamiltonian_g(const GroupModel& m, const HJStateG& s);

inline constexpr int kDefaultFlowSteps = 400;

// Fixed-step Runge-Kutta-Fehlberg 7(8) integration of the cogeodesic equations.
HJStateN hj_flow_n(const GroupModel& m, const HJStateN& s0, double t, int steps = kDefaultFlowSteps);
HJStateG hj_flow_g(const GroupModel& m, const HJStateG& s0, double t, int steps = kDefaultFlowSteps);

// arccosh(1 + x) for x >= 0 without cancellation near 0.
double acosh1p(double x);

double cc_distance_n(const GroupModel& m, const NPoint& a, const NPoint& b);
double cc_norm_n(const GroupModel& m, const NPoint& z);
double cc_distance_g(const GroupModel& m, const GPoint& x, const GPoint& y);

// Heisenberg geodesic inversion: twist angle phi in [0, 2pi] of the unit-speed
// geodesic from 0 reaching horizontal radius rho and vertical coordinate |t|.
double heisenberg_twist(double rho, double absT);

enum class ReparamBranch { PositiveH, ZeroHNuNonzero, ZeroHNuZero };

struct ReparamSolution {
    ReparamBranch branch = ReparamBranch::ZeroHNuZero;
    double omega = 0.0;
    double tStar = 0.0;
    double uStar = 0.0;
    double u0 = 0.0;
    double nu0 = 0.0;
    double H0N = 0.0;

    double v(double t) const;
    double u(double t) const;
    double nu(double t) const;
    // Supremum of the range of v on [0, inf).
    double v_sup() const;
    // Time t with v(t) = T; requires 0 <= T < v_sup().
    double v_inverse(double T) const;
};

ReparamSolution reparam_solve(double u0, double nu0, double H0N);
double reach_condition(double u0, double u1, double T, double H0N);

// HJ-curve on N sampled uniformly on [0, T].
struct HJCurveN {
    GroupModel model;
    std::vector<HJStateN> samples;
    double T = 0.0;

    HJStateN at(double s) const;
    double H0() const { return hamiltonian_n(model, samples.front()); }
    double length() const;
    // Max relative mismatch between consecutive samples and the exact flow between them.
    double residual() const;
};

HJCurveN sample_hj_curve_n(const GroupModel& m, const HJStateN& s0, double T, int nSamples = 65);

struct LiftedGeodesic {
    HJCurveN base;
    ReparamSolution rep;
    double u0 = 0.0;
    double u1 = 0.0;
    double tau = 0.0;      // G-time at which the lift reaches v = T
    double length = 0.0;   // sqrt(2H) * tau
    double lengthN = 0.0;  // T * sqrt(2 H0N)

    HJStateG start() const;
    HJStateG at(double t) const;
    // |cosh L - (1 + e^{2(u1-u0)} + (e^{-u0} L^N)^2) / (2 e^{u1-u0})| relative to cosh L
    double length_relation_residual() const;
};

class ResidualError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LiftedGeodesic lift_geodesic(const HJCurveN& curve, double u0, double u1, double residualTol = 1e-8);

// Boundary-value oracle: multi-start damped Newton on the initial covector.
struct ShootingOptions {
    int maxStarts = 50;
    int wantConverged = 4;
    int steps = 200;
    int maxNewton = 60;
    double tol = 1e-10;
    std::uint64_t seed = 1;
};

struct ShootingResult {
    bool converged = false;
    double length = std::numeric_limits<double>::quiet_NaN();
    int startsUsed = 0;
    int convergedStarts = 0;
    double residual = std::numeric_limits<double>::infinity();
    HJStateG initial;
};

ShootingResult shoot_distance_g(const GroupModel& m, const GPoint& x, const GPoint& y, const ShootingOptions& opt = {});

// ---- volumes and radial integrals ----

// Lebesgue measure of the unit CC ball of N (exact for abelian N).
double unit_ball_volume_n_exact(int Q);

struct MCEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    std::int64_t hits = 0;
};

// Monte Carlo volume of the unit CC ball of N (any model).
MCEstimate mc_unit_ball_volume_n(const GroupModel& m, std::int64_t samples, std::uint64_t seed, Exec exec = Exec::Parallel);

double radial_constant_cN(int Q, double VN);
double ball_volume_g(int Q, double VN, double r);

struct RadialProfile {
    Fn1 f;
    double support = std::numeric_limits<double>::infinity();
};

enum class ModularPower { Zero, Half, One };

// Integral over G of f(|x|) m(x)^p for p in {0, 1/2, 1}; p = 0 and p = 1 agree.
double radial_integral_g(int Q, double VN, const RadialProfile& prof, ModularPower p = ModularPower::Zero, double tol = 1e-11);

// Brute-force reference: integral over G (abelian N) of f(|x|) m^p by nested quadrature in (u, |z|).
double radial_integral_direct(int Q, double VN, const RadialProfile& prof, ModularPower p, double rCut, double tol = 1e-9);

struct InverseWeightReport {
    double value = 0.0;
    double reference = 0.0;  // r^{Q+1} for r <= 1, r^2 for r >= 1
    double ratio = 0.0;
};

InverseWeightReport inverse_weight_ball_integral(int Q, double VN, double r);

// Empirical constant in  int m f w dmu <= C int f |x| dmu  over the given radii.
double weighted_radial_constant(int Q, double VN, const std::vector<double>& radii);

// Monte Carlo volume of the G-ball B(0, r) sampled in B_N(0, e^r) x (-r, r).
MCEstimate mc_ball_volume_g(const GroupModel& m, double r, std::int64_t samples, std::uint64_t seed,
                            Exec exec = Exec::Parallel);

}  // namespace nasolv
