#include "nasolv/metric.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nasolv {

namespace {

using State = std::array<double, 2 * kMaxDim + 2>;

// a_j = X_j(z) . zeta, with X_j = e_j + ½[z, e_j]
void frame_pairings(const GroupModel& m, const double* z, const double* zeta, double* a) {
    for (int j = 0; j < m.q; ++j) {
        double v = zeta[j];
        if (m.step >= 2) {
            for (int i = 0; i < m.q; ++i) {
                if (z[i] == 0.0) continue;
                const NPoint& br = m.bracket[i][j];
                double s = 0.0;
                for (int k = 0; k < m.d; ++k) s += zeta[k] * br[k];
                v += 0.5 * z[i] * s;
            }
        }
        a[j] = v;
    }
}

// Shared right-hand side; `scale` is e^{2u} on G and 1 on N.
void cogeodesic_rhs(const GroupModel& m, const double* z, const double* zeta, double scale, double* dz, double* dzeta,
                    double* aa) {
    std::array<double, kMaxDim> a{};
    frame_pairings(m, z, zeta, a.data());
    for (int k = 0; k < m.d; ++k) {
        dz[k] = 0.0;
        dzeta[k] = 0.0;
    }
    double sumsq = 0.0;
    for (int j = 0; j < m.q; ++j) {
        sumsq += a[j] * a[j];
        dz[j] += scale * a[j];
        if (m.step >= 2) {
            // ½[z, e_j] contribution of X_j
            for (int i = 0; i < m.q; ++i) {
                if (z[i] == 0.0) continue;
                const NPoint& br = m.bracket[i][j];
                for (int k = 0; k < m.d; ++k) dz[k] += scale * a[j] * 0.5 * z[i] * br[k];
            }
            for (int i = 0; i < m.q; ++i) {
                const NPoint& br = m.bracket[i][j];
                double s = 0.0;
                for (int k = 0; k < m.d; ++k) s += zeta[k] * br[k];
                dzeta[i] -= scale * a[j] * 0.5 * s;
            }
        }
    }
    *aa = sumsq;
}

void check_steps(double t, int steps) {
    if (steps < 1) throw std::invalid_argument("hj flow: steps must be >= 1");
    const double h = t / steps;
    if (t != 0.0 && std::abs(h) < 1e-300) throw ConvergenceError("hj flow: step-size underflow");
}

}  // namespace

double quad_form(const GroupModel& m, const NPoint& z, const NPoint& zeta) {
    std::array<double, kMaxDim> a{};
    frame_pairings(m, z.c.data(), zeta.c.data(), a.data());
    double s = 0.0;
    for (int j = 0; j < m.q; ++j) s += a[j] * a[j];
    return s;
}

double hamiltonian_n(const GroupModel& m, const HJStateN& s) { return 0.5 * quad_form(m, s.z, s.zeta); }

double hamiltonian_g(const GroupModel& m, const HJStateG& s) {
    return 0.5 * (std::exp(2.0 * s.u) * quad_form(m, s.z, s.zeta) + s.nu * s.nu);
}

HJStateN hj_flow_n(const GroupModel& m, const HJStateN& s0, double t, int steps) {
    check_steps(t, steps);
    const int d = m.d;
    State y{};
    for (int k = 0; k < d; ++k) {
        y[k] = s0.z[k];
        y[d + k] = s0.zeta[k];
    }
    auto sys = [&m, d](const State& x, State& dx, double) {
        double aa = 0.0;
        cogeodesic_rhs(m, x.data(), x.data() + d, 1.0, dx.data(), dx.data() + d, &aa);
    };
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    boost::numeric::odeint::integrate_n_steps(stepper, sys, y, 0.0, t / steps, steps);
    HJStateN r{NPoint(d), NPoint(d)};
    for (int k = 0; k < d; ++k) {
        r.z[k] = y[k];
        r.zeta[k] = y[d + k];
    }
    return r;
}

HJStateG hj_flow_g(const GroupModel& m, const HJStateG& s0, double t, int steps) {
    check_steps(t, steps);
    const int d = m.d;
    State y{};
    for (int k = 0; k < d; ++k) {
        y[k] = s0.z[k];
        y[d + 1 + k] = s0.zeta[k];
    }
    y[d] = s0.u;
    y[2 * d + 1] = s0.nu;
    auto sys = [&m, d](const State& x, State& dx, double) {
        const double e2u = std::exp(2.0 * x[d]);
        double aa = 0.0;
        cogeodesic_rhs(m, x.data(), x.data() + d + 1, e2u, dx.data(), dx.data() + d + 1, &aa);
        dx[d] = x[2 * d + 1];
        dx[2 * d + 1] = -e2u * aa;
    };
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    boost::numeric::odeint::integrate_n_steps(stepper, sys, y, 0.0, t / steps, steps);
    HJStateG r{NPoint(d), y[d], NPoint(d), y[2 * d + 1]};
    for (int k = 0; k < d; ++k) {
        r.z[k] = y[k];
        r.zeta[k] = y[d + 1 + k];
    }
    return r;
}

double acosh1p(double x) {
    if (x < 0.0) x = 0.0;
    if (x > 1e8) return std::log(2.0) + std::log1p(x);
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
}

namespace {

// (phi - sin phi) / (8 sin^2(phi/2)) for phi in [0, pi]
double twist_ratio_low(double phi) {
    if (phi < 1e-4) return phi / 12.0 * (1.0 - phi * phi / 60.0);
    const double s = std::sin(0.5 * phi);
    return (phi - std::sin(phi)) / (8.0 * s * s);
}

// Same ratio written in e = 2pi - phi, e in (0, pi]
double twist_ratio_high(double e) {
    const double s = std::sin(0.5 * e);
    return (2.0 * std::numbers::pi - e + std::sin(e)) / (8.0 * s * s);
}

}  // namespace

double heisenberg_twist(double rho, double absT) {
    if (absT == 0.0) return 0.0;
    if (rho == 0.0) return 2.0 * std::numbers::pi;
    const double target = absT / (rho * rho);
    const double mid = twist_ratio_low(std::numbers::pi);
    if (target <= mid) {
        double lo = 0.0, hi = std::numbers::pi;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            const double c = 0.5 * (lo + hi);
            (twist_ratio_low(c) < target ? lo : hi) = c;
        }
        return 0.5 * (lo + hi);
    }
    double lo = 0.0, hi = std::numbers::pi;  // in e; ratio decreasing in e
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double c = 0.5 * (lo + hi);
        (twist_ratio_high(c) > target ? lo : hi) = c;
    }
    return 2.0 * std::numbers::pi - 0.5 * (lo + hi);
}

double cc_distance_n(const GroupModel& m, const NPoint& a, const NPoint& b) {
    const NPoint w = n_multiply(m, n_inverse(m, a), b);
    if (m.kind == NKind::Abelian) {
        double s = 0.0;
        for (int k = 0; k < m.d; ++k) s += w[k] * w[k];
        return std::sqrt(s);
    }
    const double rho = std::hypot(w[0], w[1]);
    const double t = std::abs(w[2]);
    if (t == 0.0) return rho;
    if (rho == 0.0) return std::sqrt(4.0 * std::numbers::pi * t);
    const double phi = heisenberg_twist(rho, t);
    if (phi < 1e-8) return rho * (1.0 + phi * phi / 24.0);
    const double half = phi <= std::numbers::pi ? std::sin(0.5 * phi) : std::sin(std::numbers::pi - 0.5 * phi);
    return rho * phi / (2.0 * half);
}

double cc_norm_n(const GroupModel& m, const NPoint& z) { return cc_distance_n(m, n_zero(m), z); }

double cc_distance_g(const GroupModel& m, const GPoint& x, const GPoint& y) {
    const double dn = cc_distance_n(m, x.z, y.z);
    const double sh = std::sinh(0.5 * (x.u - y.u));
    return acosh1p(2.0 * sh * sh + std::exp(-(x.u + y.u)) * dn * dn * 0.5);
}

// ---- reparametrization ----

namespace {
double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}
}  // namespace

double ReparamSolution::v(double t) const {
    switch (branch) {
        case ReparamBranch::PositiveH:
            return (omega * std::tanh(omega * (t - tStar)) + nu0) / (2.0 * H0N);
        case ReparamBranch::ZeroHNuNonzero:
            return std::exp(2.0 * u0) * std::expm1(2.0 * nu0 * t) / (2.0 * nu0);
        case ReparamBranch::ZeroHNuZero:
            return std::exp(2.0 * u0) * t;
    }
    return 0.0;
}

double ReparamSolution::u(double t) const {
    switch (branch) {
        case ReparamBranch::PositiveH:
            return uStar - log_cosh(omega * (t - tStar));
        case ReparamBranch::ZeroHNuNonzero:
            return u0 + nu0 * t;
        case ReparamBranch::ZeroHNuZero:
            return u0;
    }
    return 0.0;
}

double ReparamSolution::nu(double t) const {
    if (branch == ReparamBranch::PositiveH) return -omega * std::tanh(omega * (t - tStar));
    return nu0;
}

double ReparamSolution::v_sup() const {
    switch (branch) {
        case ReparamBranch::PositiveH:
            return (omega + nu0) / (2.0 * H0N);
        case ReparamBranch::ZeroHNuNonzero:
            return nu0 > 0.0 ? std::numeric_limits<double>::infinity() : std::exp(2.0 * u0) / (-2.0 * nu0);
        case ReparamBranch::ZeroHNuZero:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double ReparamSolution::v_inverse(double T) const {
    if (T < 0.0 || !(T < v_sup())) throw std::domain_error("v_inverse: value outside the range of v");
    switch (branch) {
        case ReparamBranch::PositiveH:
            return tStar + std::atanh((2.0 * H0N * T - nu0) / omega) / omega;
        case ReparamBranch::ZeroHNuNonzero:
            return std::log1p(2.0 * nu0 * T * std::exp(-2.0 * u0)) / (2.0 * nu0);
        case ReparamBranch::ZeroHNuZero:
            return T * std::exp(-2.0 * u0);
    }
    return 0.0;
}

ReparamSolution reparam_solve(double u0, double nu0, double H0N) {
    if (H0N < 0.0) throw std::invalid_argument("reparam_solve: H0N must be nonnegative");
    ReparamSolution r;
    r.u0 = u0;
    r.nu0 = nu0;
    r.H0N = H0N;
    if (H0N > 0.0) {
        r.branch = ReparamBranch::PositiveH;
        r.omega = std::sqrt(nu0 * nu0 + 2.0 * H0N * std::exp(2.0 * u0));
        r.uStar = std::log(r.omega / std::sqrt(2.0 * H0N));
        r.tStar = std::atanh(nu0 / r.omega) / r.omega;
    } else if (nu0 != 0.0) {
        r.branch = ReparamBranch::ZeroHNuNonzero;
        r.omega = std::abs(nu0);
    } else {
        r.branch = ReparamBranch::ZeroHNuZero;
    }
    return r;
}

double reach_condition(double u0, double u1, double T, double H0N) {
    if (!(T > 0.0)) throw std::invalid_argument("reach_condition: T must be positive");
    return (std::exp(2.0 * u1) - std::exp(2.0 * u0)) / (2.0 * T) + H0N * T;
}

// ---- N-curves and lifts ----

namespace {
constexpr int kSegmentSteps = 64;
}

HJStateN HJCurveN::at(double s) const {
    const int n = static_cast<int>(samples.size());
    if (n == 1 || T == 0.0) return samples.front();
    const double h = T / (n - 1);
    int k = static_cast<int>(std::floor(s / h));
    k = std::clamp(k, 0, n - 2);
    const double ds = s - k * h;
    if (ds == 0.0) return samples[k];
    return hj_flow_n(model, samples[k], ds, kSegmentSteps);
}

double HJCurveN::length() const { return T * std::sqrt(2.0 * H0()); }

double HJCurveN::residual() const {
    const int n = static_cast<int>(samples.size());
    if (n < 2) return 0.0;
    const double h = T / (n - 1);
    double worst = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
        const HJStateN p = hj_flow_n(model, samples[k], h, 2 * kSegmentSteps);
        double diff = 0.0, scale = 1.0;
        for (int i = 0; i < model.d; ++i) {
            diff = std::max({diff, std::abs(p.z[i] - samples[k + 1].z[i]), std::abs(p.zeta[i] - samples[k + 1].zeta[i])});
            scale = std::max({scale, std::abs(p.z[i]), std::abs(p.zeta[i])});
        }
        worst = std::max(worst, diff / scale);
    }
    return worst;
}

HJCurveN sample_hj_curve_n(const GroupModel& m, const HJStateN& s0, double T, int nSamples) {
    if (nSamples < 2) throw std::invalid_argument("sample_hj_curve_n: need at least two samples");
    HJCurveN c{m, {s0}, T};
    const double h = T / (nSamples - 1);
    for (int k = 1; k < nSamples; ++k) c.samples.push_back(hj_flow_n(m, c.samples.back(), h, 2 * kSegmentSteps));
    return c;
}

HJStateG LiftedGeodesic::start() const {
    const HJStateN& s = base.samples.front();
    return {s.z, u0, s.zeta, rep.nu0};
}

HJStateG LiftedGeodesic::at(double t) const {
    const HJStateN s = base.at(rep.v(t));
    return {s.z, rep.u(t), s.zeta, rep.nu(t)};
}

double LiftedGeodesic::length_relation_residual() const {
    const double rhs = (1.0 + std::exp(2.0 * (u1 - u0)) + std::pow(std::exp(-u0) * lengthN, 2)) / (2.0 * std::exp(u1 - u0));
    return std::abs(std::cosh(length) - rhs) / std::cosh(length);
}

LiftedGeodesic lift_geodesic(const HJCurveN& curve, double u0, double u1, double residualTol) {
    const double res = curve.residual();
    if (res > residualTol) {
        std::ostringstream os;
        os << "lift_geodesic: N-curve is not an HJ solution (residual " << res << ")";
        throw ResidualError(os.str());
    }
    LiftedGeodesic g;
    g.base = curve;
    g.u0 = u0;
    g.u1 = u1;
    const double H0N = curve.H0();
    const double T = curve.T;
    if (T > 0.0) {
        const double nu0 = reach_condition(u0, u1, T, H0N);
        g.rep = reparam_solve(u0, nu0, H0N);
        g.tau = g.rep.v_inverse(T);
    } else {
        if (u0 != u1) throw std::invalid_argument("lift_geodesic: zero-length N-curve cannot change u");
        g.rep = reparam_solve(u0, 0.0, H0N);
        g.tau = 0.0;
    }
    const double speed = std::sqrt(g.rep.nu0 * g.rep.nu0 + 2.0 * H0N * std::exp(2.0 * u0));
    g.length = speed * g.tau;
    g.lengthN = T * std::sqrt(2.0 * H0N);
    return g;
}

}  // namespace nasolv
