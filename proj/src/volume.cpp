#include <cmath>
#include <random>

#include "nasolv/metric.hpp"

namespace nasolv {

namespace {

constexpr int kShards = 64;
constexpr double kPi = 3.14159265358979323846;

// Integral of g over [0, b) in unit panels; stops early on an infinite range once
// three consecutive panels contribute below tol relative to the running total.
double integrate_halfline(const Fn1& g, double b, double tol) {
    double acc = 0.0;
    int quiet = 0;
    for (int k = 0; k < 400; ++k) {
        const double lo = k, hi = std::min<double>(k + 1, b);
        if (lo >= b) return acc;
        const double piece = integrate(g, lo, hi, tol);
        acc += piece;
        if (std::isinf(b)) {
            quiet = std::abs(piece) <= tol * std::abs(acc) ? quiet + 1 : 0;
            if (quiet >= 3) return acc;
        }
    }
    if (std::isinf(b)) throw ConvergenceError("radial integral: tail did not decay within r = 400");
    return acc;
}

// Inner u-integral of (cosh r - cosh u)^e over (-r, r).
double inner_cosh_power(double r, double e) {
    if (e == 0.0) return 2.0 * r;
    const double ch = std::cosh(r);
    return 2.0 * integrate([&](double u) { return std::pow(std::max(0.0, ch - std::cosh(u)), e); }, 0.0, r, 1e-13);
}

MCEstimate finish(std::int64_t hits, std::int64_t n, double boxVolume) {
    MCEstimate e;
    e.samples = n;
    e.hits = hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    e.value = p * boxVolume;
    e.stderr_ = boxVolume * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return e;
}

// Half-widths of a coordinate box containing the CC ball B_N(0, R).
NPoint ball_box(const GroupModel& m, double R) {
    NPoint h(m.d);
    for (int i = 0; i < m.d; ++i) h[i] = m.weights[i] == 1 ? R : R * R / (4.0 * kPi);
    return h;
}

std::int64_t count_hits(int nShards, std::int64_t perShard, std::uint64_t seed, Exec exec,
                        const std::function<bool(std::mt19937_64&)>& trial) {
    const auto parts = run_shards<std::int64_t>(nShards, exec, [&](int s) {
        std::mt19937_64 rng(shard_seed(seed, static_cast<std::uint64_t>(s)));
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < perShard; ++i) hits += trial(rng) ? 1 : 0;
        return hits;
    });
    std::int64_t total = 0;
    for (auto h : parts) total += h;
    return total;
}

}  // namespace

double unit_ball_volume_n_exact(int Q) { return std::pow(kPi, 0.5 * Q) / std::tgamma(0.5 * Q + 1.0); }

MCEstimate mc_unit_ball_volume_n(const GroupModel& m, std::int64_t samples, std::uint64_t seed, Exec exec) {
    const NPoint h = ball_box(m, 1.0);
    double box = 1.0;
    for (int i = 0; i < m.d; ++i) box *= 2.0 * h[i];
    const std::int64_t per = (samples + kShards - 1) / kShards;
    const std::int64_t hits = count_hits(kShards, per, seed, exec, [&](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        NPoint z(m.d);
        for (int i = 0; i < m.d; ++i) z[i] = h[i] * U(rng);
        return cc_norm_n(m, z) < 1.0;
    });
    return finish(hits, per * kShards, box);
}

double radial_constant_cN(int Q, double VN) {
    return VN * std::pow(2.0, Q - 1) * std::exp(2.0 * std::lgamma(0.5 * Q) - std::lgamma(Q));
}

double ball_volume_g(int Q, double VN, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume_g: r must be positive");
    return radial_constant_cN(Q, VN) * Q *
           integrate_halfline([Q](double s) { return std::pow(std::sinh(s), Q); }, r, 1e-13);
}

double radial_integral_g(int Q, double VN, const RadialProfile& prof, ModularPower p, double tol) {
    if (p == ModularPower::Half) {
        const double pre = VN * Q * std::pow(2.0, 0.5 * Q - 1.0);
        const double e = 0.5 * Q - 1.0;
        return pre * integrate_halfline(
                         [&](double r) {
                             const double fr = prof.f(r);
                             return fr == 0.0 ? 0.0 : fr * std::sinh(r) * inner_cosh_power(r, e);
                         },
                         prof.support, tol);
    }
    const double cN = radial_constant_cN(Q, VN);
    return cN * Q * integrate_halfline(
                        [&](double r) {
                            const double fr = prof.f(r);
                            return fr == 0.0 ? 0.0 : fr * std::pow(std::sinh(r), Q);
                        },
                        prof.support, tol);
}

double radial_integral_direct(int Q, double VN, const RadialProfile& prof, ModularPower p, double rCut, double tol) {
    const double wexp = p == ModularPower::Zero ? 0.0 : (p == ModularPower::Half ? -0.5 * Q : -1.0 * Q);
    const double chR = std::cosh(rCut);
    auto inner = [&](double u) {
        const double smax = std::sqrt(std::max(0.0, 2.0 * std::exp(u) * (chR - std::cosh(u))));
        if (smax == 0.0) return 0.0;
        const double cu1 = std::cosh(u) - 1.0;
        const double eu = std::exp(-u);
        const double v = integrate(
            [&](double s) {
                const double rho = acosh1p(cu1 + 0.5 * eu * s * s);
                return prof.f(rho) * VN * Q * std::pow(s, Q - 1);
            },
            0.0, smax, tol);
        return v * std::exp(wexp * u);
    };
    return integrate(inner, -rCut, 0.0, tol) + integrate(inner, 0.0, rCut, tol);
}

InverseWeightReport inverse_weight_ball_integral(int Q, double VN, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("inverse_weight_ball_integral: r must be positive");
    const double chR = std::cosh(r);
    auto g = [&](double u) {
        // log(1 + S^Q) with S^2 = 2 e^u (cosh r - cosh u)
        const double s2 = 2.0 * std::exp(u) * std::max(0.0, chR - std::cosh(u));
        return std::log1p(std::pow(s2, 0.5 * Q));
    };
    InverseWeightReport rep;
    rep.value = VN * (integrate(g, -r, 0.0, 1e-10) + integrate(g, 0.0, r, 1e-10));
    rep.reference = r <= 1.0 ? std::pow(r, Q + 1) : r * r;
    rep.ratio = rep.value / rep.reference;
    return rep;
}

double weighted_radial_constant(int Q, double VN, const std::vector<double>& radii) {
    const double cN = radial_constant_cN(Q, VN);
    double worst = 0.0;
    for (double r : radii) {
        const double lhs = std::pow(2.0, Q - 1) * VN * Q * std::sinh(r) * inner_cosh_power(r, Q - 1.0);
        const double rhs = cN * Q * r * std::pow(std::sinh(r), Q);
        worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

MCEstimate mc_ball_volume_g(const GroupModel& m, double r, std::int64_t samples, std::uint64_t seed, Exec exec) {
    // |z|_N < sinh r on B(0, r)
    const NPoint h = ball_box(m, std::sinh(r));
    double box = 2.0 * r;
    for (int i = 0; i < m.d; ++i) box *= 2.0 * h[i];
    const std::int64_t per = (samples + kShards - 1) / kShards;
    const GPoint o = g_identity(m);
    const std::int64_t hits = count_hits(kShards, per, seed, exec, [&](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        GPoint x{NPoint(m.d), r * U(rng)};
        for (int i = 0; i < m.d; ++i) x.z[i] = h[i] * U(rng);
        return cc_distance_g(m, x, o) < r;
    });
    return finish(hits, per * kShards, box);
}

}  // namespace nasolv
