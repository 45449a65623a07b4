#include "nasolv/heat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nasolv/metric.hpp"

namespace nasolv {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kShards = 64;

double log_sinh(double x) { return x < 20.0 ? std::log(std::sinh(x)) : x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); }

double psi_direct(double t, double xi, double h) {
    const double logTwoXi = std::log(2.0 * xi);
    const double thMax = std::max(1.0, std::min(4.0 * t + 80.0 * std::sqrt(t) + 60.0, logTwoXi + 80.0));
    const int n = static_cast<int>(std::ceil(thMax / h));
    // even integrand vanishing at 0: the trapezoid rule on [0, inf) is spectrally accurate
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double th = k * h;
        const double coshOverXi = std::exp(th - logTwoXi) * (1.0 + std::exp(-2.0 * th));
        const double L = log_sinh(th) - th * th / (4.0 * t) - coshOverXi;
        acc += std::exp(L) * std::sin(kPi * th / (2.0 * t));
    }
    return acc * h * std::exp(kPi * kPi / (4.0 * t)) / (xi * xi * std::sqrt(4.0 * kPi * kPi * kPi * t));
}

void require_time(double t, const HeatOptions& opt) {
    if (!(t >= opt.tMin)) throw std::invalid_argument("heat: t below tMin (oscillatory regime refused)");
}

std::vector<double> nodes_uniform(double a, double b, int n) {
    std::vector<double> x(n + 1);
    for (int i = 0; i <= n; ++i) x[i] = a + (b - a) * i / n;
    return x;
}

}  // namespace

double HorizontalGradient::norm() const {
    double s = 0.0;
    for (double c : components) s += c * c;
    return std::sqrt(s);
}

double psi_t(double t, double xi, const HeatOptions& opt) {
    require_time(t, opt);
    if (!(xi > 0.0)) throw std::invalid_argument("psi_t: xi must be positive");
    return psi_direct(t, xi, opt.thetaStep);
}

double h3_profile(double t, double rho) {
    const double ratio = rho < 1e-8 ? 1.0 : rho / std::sinh(rho);
    return std::pow(4.0 * kPi * t, -1.5) * ratio * std::exp(-rho * rho / (4.0 * t));
}

HeatEvaluator::HeatEvaluator(const GroupModel& model, double t, const HeatOptions& opt)
    : model_(model), t_(t), Q_(model.Q), opt_(opt) {
    if (model.kind != NKind::Abelian) throw std::invalid_argument("heat: evaluation is implemented for abelian N only");
    require_time(t, opt);
    rhoMax_ = opt.rhoMax > 0.0 ? opt.rhoMax : 14.0 * std::sqrt(t) + 12.0;
    if (rhoMax_ > 650.0) throw std::invalid_argument("heat: rhoMax above 650");
    const double logCmax = rhoMax_ - std::log(2.0);
    const double sMax = std::max(80.0, logCmax + 40.0);
    const int n = static_cast<int>(std::ceil((sMax - opt.sMin) / opt.sStep));
    s_ = nodes_uniform(opt.sMin, opt.sMin + n * opt.sStep, n);
    xi_.resize(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) xi_[i] = std::exp(s_[i]);
    psi_.assign(s_.size(), 0.0);
    const int m = static_cast<int>(s_.size());
    run_shards<int>(kShards, Exec::Parallel, [&](int sh) {
        for (int i = sh * m / kShards; i < (sh + 1) * m / kShards; ++i) psi_[i] = psi_direct(t_, xi_[i], opt_.thetaStep);
        return 0;
    });
    w_.resize(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i)
        w_[i] = psi_[i] * xi_[i] * std::pow(2.0 * kPi * xi_[i], -0.5 * Q_) * opt.sStep;
}

double HeatEvaluator::psi(double xi) const {
    if (!(xi > 0.0)) throw std::invalid_argument("psi: xi must be positive");
    return psi_direct(t_, xi, opt_.thetaStep);
}

double HeatEvaluator::moment(int k, double rho) const {
    if (rho > rhoMax_ * (1.0 + 1e-12)) throw ConvergenceError("heat: point beyond the tabulated radial range");
    const double c = std::cosh(rho);
    double acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        const double e = c / xi_[i];
        if (e > 745.0) continue;
        acc += w_[i] * std::pow(xi_[i], -k) * std::exp(-e);
    }
    return acc;
}

double HeatEvaluator::rho(const GPoint& x) const {
    double z2 = 0.0;
    for (int i = 0; i < x.z.d; ++i) z2 += x.z[i] * x.z[i];
    const double sh = std::sinh(0.5 * x.u);
    return acosh1p(2.0 * sh * sh + 0.5 * std::exp(-x.u) * z2);
}

double HeatEvaluator::kernel(const GPoint& x) const {
    if (x.z.d != Q_) throw DimensionError("heat: point dimension does not match Q");
    return std::exp(-0.5 * Q_ * x.u) * moment(0, rho(x));
}

HorizontalGradient HeatEvaluator::gradient(const GPoint& x) const {
    if (x.z.d != Q_) throw DimensionError("heat: point dimension does not match Q");
    const double r = rho(x);
    const double A0 = moment(0, r), A1 = moment(1, r);
    double z2 = 0.0;
    for (int i = 0; i < Q_; ++i) z2 += x.z[i] * x.z[i];
    const double sigma = 0.5 * std::exp(-x.u) * z2;
    const double pre = std::exp(-0.5 * Q_ * x.u);
    HorizontalGradient g;
    g.components.resize(1 + Q_);
    g.components[0] = pre * (-0.5 * Q_ * A0 - (std::sinh(x.u) - sigma) * A1);
    for (int i = 0; i < Q_; ++i) g.components[1 + i] = -x.z[i] * pre * A1;
    return g;
}

HeatIntegrals heat_integrals(const HeatEvaluator& h, Exec exec) {
    const int Q = h.Q();
    const double t = h.t();
    const double R = h.rho_max();
    const int panels = static_cast<int>(std::ceil(R / 0.5));
    const GaussRule rr = gauss_legendre(0.0, R, panels);
    const double KQ = unit_ball_volume_n_exact(Q) * Q * std::pow(2.0, 0.5 * Q - 1.0);
    const double lastPanel = R - R / panels;
    const int n = static_cast<int>(rr.x.size());
    // mass, l2^2, grad, oracle mass, oracle diff, tail mass, tail grad
    using Acc = std::array<double, 7>;
    const auto parts = run_shards<Acc>(kShards, exec, [&](int sh) {
        Acc a{};
        for (int i = sh * n / kShards; i < (sh + 1) * n / kShards; ++i) {
            const double rho = rr.x[i];
            const double A0 = h.moment(0, rho), A1 = h.moment(1, rho);
            const double F = Q == 2 ? h3_profile(t, rho) : 0.0;
            const double sq = std::sqrt(rho);
            const GaussRule vr = gauss_legendre(0.0, sq, std::max(1, static_cast<int>(std::ceil(sq / 0.5))));
            const double base = rr.w[i] * KQ * std::sinh(rho);
            double m = 0.0, l2 = 0.0, g = 0.0, om = 0.0, od = 0.0;
            for (std::size_t j = 0; j < vr.x.size(); ++j) {
                const double v = vr.x[j];
                const double sigma = 2.0 * std::sinh(rho - 0.5 * v * v) * std::sinh(0.5 * v * v);
                const double wv = vr.w[j] * 2.0 * v * (Q == 2 ? 1.0 : std::pow(sigma, 0.5 * Q - 1.0));
                for (int sgn : {-1, 1}) {
                    const double u = sgn * (rho - v * v);
                    m += wv * A0;
                    l2 += wv * std::exp(-0.5 * Q * u) * A0 * A0;
                    const double horiz = std::sqrt(2.0 * sigma) * std::exp(0.5 * u) * A1;
                    const double vert = 0.5 * Q * A0 + (std::sinh(u) - sigma) * A1;
                    g += wv * std::hypot(horiz, vert);
                    if (Q == 2) {
                        om += wv * F;
                        od += wv * std::abs(A0 - F);
                    }
                }
            }
            a[0] += base * m;
            a[1] += base * l2;
            a[2] += base * g;
            a[3] += base * om;
            a[4] += base * od;
            if (rho >= lastPanel) {
                a[5] += base * m;
                a[6] += base * g;
            }
        }
        return a;
    });
    Acc s{};
    for (const auto& p : parts)
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += p[k];
    HeatIntegrals out;
    out.mass = s[0];
    out.l2 = std::sqrt(s[1]);
    out.gradL1 = s[2];
    out.oracleMass = s[3];
    out.oracleL1Diff = s[4];
    out.tailEstimate = std::max(std::abs(s[5]) / std::abs(s[0]), std::abs(s[6]) / std::abs(s[2]));
    out.rhoNodes = n;
    return out;
}

GradNormReport grad_l1_norm(const HeatEvaluator& h, Exec exec) {
    const HeatIntegrals I = heat_integrals(h, exec);
    if (I.tailEstimate > h.options().relTol)
        throw ConvergenceError("grad_l1_norm: radial tail estimate exceeds relTol");
    GradNormReport r;
    r.t = h.t();
    r.norm = I.gradL1;
    r.scaled = std::sqrt(h.t()) * I.gradL1;
    r.tail = I.tailEstimate;
    return r;
}

SemigroupReport semigroup_check(const HeatEvaluator& hs, const HeatEvaluator& h2s, Exec exec) {
    if (hs.Q() != 2 || h2s.Q() != 2) throw std::invalid_argument("semigroup_check: implemented for Q = 2");
    const double s = hs.t();
    // G(x) = int_0^x phi_s(d) sinh d dd on a fine grid
    const double A = std::min(hs.rho_max(), 10.0 * std::sqrt(s) + 6.0);
    const double Rm = std::min(h2s.rho_max(), 10.0 * std::sqrt(2.0 * s) + 6.0);
    const double X = std::min(hs.rho_max(), A + Rm);
    const double step = 0.005;
    const int nx = static_cast<int>(std::ceil(X / step));
    std::vector<double> phi(nx + 1), dG(nx + 1), G(nx + 1, 0.0);
    run_shards<int>(kShards, exec, [&](int sh) {
        for (int i = sh * (nx + 1) / kShards; i < (sh + 1) * (nx + 1) / kShards; ++i) {
            phi[i] = hs.moment(0, i * step);
            dG[i] = phi[i] * std::sinh(i * step);
        }
        return 0;
    });
    // trapezoid in d, i.e. G' interpolated linearly; Gat below uses the same interpolant
    for (int i = 1; i <= nx; ++i) G[i] = G[i - 1] + 0.5 * step * (dG[i - 1] + dG[i]);
    auto Gat = [&](double x) {
        if (x >= nx * step) return G[nx];
        const int i = static_cast<int>(x / step);
        const double f = x / step - i;
        return G[i] + step * f * (dG[i] + 0.5 * f * (dG[i + 1] - dG[i]));
    };
    auto phiAt = [&](double x) {
        const int i = std::min(nx - 1, static_cast<int>(x / step));
        const double f = x / step - i;
        return phi[i] + f * (phi[i + 1] - phi[i]);
    };
    const GaussRule ra = gauss_legendre(0.0, A, static_cast<int>(std::ceil(A / 0.5)));
    const GaussRule rr = gauss_legendre(0.0, Rm, static_cast<int>(std::ceil(Rm / 0.5)));
    const double KQ = unit_ball_volume_n_exact(2) * 2.0;
    const int n = static_cast<int>(rr.x.size());
    using Acc = std::array<double, 2>;
    const auto parts = run_shards<Acc>(kShards, exec, [&](int sh) {
        Acc acc{};
        for (int i = sh * n / kShards; i < (sh + 1) * n / kShards; ++i) {
            const double rho = rr.x[i];
            double conv = 0.0;
            for (std::size_t j = 0; j < ra.x.size(); ++j) {
                const double a = ra.x[j];
                conv += ra.w[j] * phiAt(a) * std::sinh(a) * (Gat(rho + a) - Gat(std::abs(rho - a)));
            }
            conv *= 2.0 * kPi / std::sinh(rho);
            const double target = h2s.moment(0, rho);
            const double w = rr.w[i] * KQ * std::sinh(rho) * 2.0 * rho;
            acc[0] += w * std::abs(conv - target);
            acc[1] += w * target;
        }
        return acc;
    });
    SemigroupReport rep;
    for (const auto& p : parts) {
        rep.l1Diff += p[0];
        rep.l1Target += p[1];
    }
    return rep;
}

double quadrature_refinement_change(const GroupModel& model, double t, double rho, const HeatOptions& opt) {
    HeatOptions fine = opt;
    fine.thetaStep *= 0.5;
    fine.sStep *= 0.5;
    const double a = HeatEvaluator(model, t, opt).moment(0, rho);
    const double b = HeatEvaluator(model, t, fine).moment(0, rho);
    return std::abs(a - b) / std::abs(b);
}

GradientFDReport gradient_fd_check(const HeatEvaluator& h, int points, std::uint64_t seed) {
    const int Q = h.Q();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::normal_distribution<double> N01(0.0, 1.0);
    GradientFDReport rep;
    rep.points = points;
    const double d = 1e-4;
    for (int p = 0; p < points; ++p) {
        GPoint x{NPoint(Q), U(rng)};
        for (int i = 0; i < Q; ++i) x.z[i] = std::exp(x.u) * N01(rng);
        const HorizontalGradient g = h.gradient(x);
        std::vector<double> fd(1 + Q);
        GPoint a = x, b = x;
        a.u += d;
        b.u -= d;
        fd[0] = (h.kernel(a) - h.kernel(b)) / (2.0 * d);
        for (int i = 0; i < Q; ++i) {
            a = x;
            b = x;
            a.z[i] += d * std::exp(x.u);
            b.z[i] -= d * std::exp(x.u);
            fd[1 + i] = (h.kernel(a) - h.kernel(b)) / (2.0 * d);
        }
        const double scale = g.norm();
        for (int i = 0; i <= Q; ++i) rep.maxRelErr = std::max(rep.maxRelErr, std::abs(fd[i] - g.components[i]) / scale);

        GPoint o{NPoint(Q), x.u};
        const HorizontalGradient g0 = h.gradient(o);
        for (int i = 1; i <= Q; ++i) rep.maxOddAtZero = std::max(rep.maxOddAtZero, std::abs(g0.components[i]));
    }
    return rep;
}

ModularBoundReport modular_bound_check(const HeatEvaluator& h, int points, std::uint64_t seed) {
    const int Q = h.Q();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    std::normal_distribution<double> N01(0.0, 2.0);
    const double h0 = h.kernel(GPoint{NPoint(Q), 0.0});
    ModularBoundReport rep;
    rep.points = points;
    for (int p = 0; p < points; ++p) {
        GPoint x{NPoint(Q), U(rng)};
        for (int i = 0; i < Q; ++i) x.z[i] = std::exp(x.u) * N01(rng);
        if (h.rho(x) > h.rho_max()) continue;
        const double ratio = h.kernel(x) / (std::exp(-0.5 * Q * x.u) * h0);
        rep.maxRatio = std::max(rep.maxRatio, ratio);
        if (ratio > 1.0 + 1e-12) ++rep.violations;
    }
    return rep;
}

double inner_integral_numeric(double alpha, double theta) {
    const double ct = std::cosh(theta);
    auto outer = [&](double u) {
        const double C = ct + std::cosh(u);
        const double lc = std::log(C);
        // xi = e^s; integrand xi^{-1-a} e^{-C/xi} ds
        const double inner = integrate([&](double s) { return std::exp(-(1.0 + alpha) * s - C * std::exp(-s)); },
                                       lc - 6.0, lc + 60.0 / (1.0 + alpha), 1e-11);
        return std::cosh(alpha * u) * inner;
    };
    return 2.0 * integrate(outer, 0.0, 60.0, 1e-9);
}

double inner_integral_reduced(double alpha, double theta) {
    const double ct = std::cosh(theta);
    return 2.0 * std::tgamma(1.0 + alpha) *
           integrate([&](double u) { return std::cosh(alpha * u) * std::pow(ct + std::cosh(u), -1.0 - alpha); }, 0.0,
                     80.0, 1e-12);
}

double inner_integral_envelope(double alpha, double theta) {
    return alpha > 0.0 ? std::exp(-theta) : std::exp(-theta) * (1.0 + theta);
}

EnvelopeReport gaussian_envelope_check(const HeatEvaluator& h, double rhoTest, double b) {
    EnvelopeReport rep;
    rep.logC = 0.0;
    const double p0 = h.moment(0, 0.0);
    std::vector<double> xs, ys;
    for (int i = 1; i <= 40; ++i) {
        const double r = rhoTest * i / 40.0;
        const double lp = std::log(h.moment(0, r) / p0);
        rep.logC = std::max(rep.logC, lp + b * r);
        xs.push_back(r);
        ys.push_back(-lp);
    }
    rep.fittedRate = fit_slope(xs, ys);
    return rep;
}

}  // namespace nasolv
