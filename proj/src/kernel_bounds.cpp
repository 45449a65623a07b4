#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "nasolv/heat.hpp"
#include "nasolv/multiplier.hpp"
#include "nasolv/quadrature.hpp"

namespace nasolv {

namespace {

constexpr double kPi = 3.141592653589793238;

struct BankMember {
    int n;
    double beta;   // share of the band taken by the modulation
    double gamma;  // modulation depth
};

constexpr BankMember kBank[kBandBankSize] = {
    {2, 0.0, 0.0}, {3, 0.0, 0.0}, {4, 0.0, 0.0}, {3, 0.5, 1.0}, {4, 0.3, -0.5},
};

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

MultiplierProfile band_limited_profile(int member, double r) {
    if (member < 0 || member >= kBandBankSize) throw std::invalid_argument("band_limited_profile: member out of range");
    if (!(r > 0.0)) throw std::invalid_argument("band_limited_profile: band limit must be positive");
    const BankMember m = kBank[member];
    const double a = r * (1.0 - m.beta) / (2.0 * m.n);
    const double b = m.beta * r;
    std::ostringstream os;
    os << "band" << member << ":" << r;
    MultiplierProfile p = MultiplierProfile::closed_form(os.str(), [m, a, b](double s) {
        return Complex{std::pow(sinc(a * s), 2 * m.n) * (1.0 + m.gamma * std::cos(b * s))};
    });
    p.evenExtension = true;
    p.bandLimit = r;
    return p;
}

L1L2Report l1_l2_check(const std::vector<double>& radii, int bankSize, Exec exec) {
    if (bankSize < 1 || bankSize > kBandBankSize) throw std::invalid_argument("l1_l2_check: bank size out of range");
    const int nr = static_cast<int>(radii.size());
    L1L2Report rep;
    rep.points = run_shards<L1L2Point>(nr * bankSize, exec, [&](int idx) {
        L1L2Point pt;
        pt.member = idx / nr;
        pt.r = radii[idx % nr];
        const MultiplierProfile P = band_limited_profile(pt.member, pt.r);
        SphericalOptions so;
        so.rMax = 2.0 * pt.r;
        so.tailTol = 1e-14;
        const SphericalSynthesizer syn(P, so);
        auto absPhi = [&](double rho) { return std::abs(syn.phi(rho)); };
        pt.l1 = radial_l1(absPhi, pt.r, 64);
        pt.l2Radial = radial_l2(absPhi, pt.r, 64);
        pt.l2 = kernel_l2_norm(P, 2).exact;
        const double scale = std::min(std::pow(pt.r, 1.5), std::pow(pt.r, 1.5));
        pt.ratio = pt.l1 / (scale * pt.l2);
        double inside = 0.0, outside = 0.0;
        for (int i = 0; i <= 400; ++i) inside = std::max(inside, absPhi(pt.r * i / 400.0));
        for (int i = 0; i <= 200; ++i) outside = std::max(outside, absPhi(pt.r * (1.02 + 0.98 * i / 200.0)));
        pt.supportLeak = outside / inside;
        return pt;
    });
    double lo = 1e300, hi = 0.0;
    for (const auto& p : rep.points) {
        lo = std::min(lo, p.ratio);
        hi = std::max(hi, p.ratio);
        rep.maxLeak = std::max(rep.maxLeak, p.supportLeak);
        rep.maxL2Mismatch = std::max(rep.maxL2Mismatch, std::abs(p.l2Radial / p.l2 - 1.0));
    }
    rep.spread = hi / lo;
    rep.maxRatio = hi;
    // per-member slopes, averaged
    auto regime = [&](bool small) {
        double acc = 0.0;
        int count = 0;
        for (int m = 0; m < bankSize; ++m) {
            std::vector<double> xs, ys;
            for (const auto& p : rep.points)
                if (p.member == m && (small ? p.r <= 1.0 : p.r >= 1.0)) {
                    xs.push_back(std::log(p.r));
                    ys.push_back(std::log(p.l1 / p.l2));
                }
            if (xs.size() >= 2) {
                acc += fit_slope(xs, ys);
                ++count;
            }
        }
        return count ? acc / count : 0.0;
    };
    rep.slopeSmall = regime(true);
    rep.slopeLarge = regime(false);
    return rep;
}

WeightedBoundReport weighted_kernel_bounds(const MultiplierProfile& F, double t, double epsilon,
                                           const WeightedBoundOptions& opt) {
    if (!(t > 0.0)) throw std::invalid_argument("weighted_kernel_bounds: t must be positive");
    for (int i = 1; i <= 256; ++i)
        if (F.F(4.0 + 12.0 * i / 256.0) != Complex{})
            throw std::invalid_argument("weighted_kernel_bounds: multiplier not supported in [0, 4]");
    WeightedBoundReport rep;
    rep.t = t;
    rep.epsilon = epsilon;
    const double rt = std::sqrt(t);

    // a_j = s_j f(s_j) on s_j = -S + j ds, f(s) = F(t s^2) supported in |s| <= 2 / sqrt t
    const int n = opt.n;
    const double ds = 2.0 / rt / opt.samplesPerSupport;
    const double S = 0.5 * n * ds;
    if (S < 2.0 / rt + ds) throw std::invalid_argument("weighted_kernel_bounds: grid shorter than the support");
    std::vector<Complex> a(n);
    for (int j = 0; j < n; ++j) {
        const double s = -S + ds * j;
        if (std::abs(s) <= 2.0 / rt) a[j] = s * F.F(t * s * s);
    }
    detail::dft(a, +1);
    // |int_0^inf f(s) s sin(s rho) ds| = ds |a_k| / 2 at rho_k = 2 pi k / (n ds)
    const double drho = 2.0 * kPi / (n * ds);
    const int half = n / 2;
    const double c = spherical_constant_h3();
    double w1 = 0.0, l1 = 0.0, tail = 0.0;
    for (int k = 0; k < half; ++k) {
        const double rho = drho * k;
        const double g = c * 0.5 * ds * std::abs(a[k]) * rho;
        const double wk = g * std::pow(1.0 + rho / rt, epsilon);
        w1 += wk;
        l1 += g;
        if (k >= 3 * half / 4) tail += wk;
    }
    rep.weightedL1 = 4.0 * kPi * w1 * drho;
    rep.l1 = 4.0 * kPi * l1 * drho;
    rep.tail = w1 > 0.0 ? tail / w1 : 0.0;
    rep.rhoCut = drho * half;

    // sum over the band-limited pieces of f(l) = F(l^2) of the l1-l2 bound
    const HebischDecomposition d = hebisch_decompose([&](double l) { return F.F(l * l); }, opt.hebisch);
    const double h = d.lambda[1] - d.lambda[0];
    const double cDelta = plancherel_constant(2);
    for (std::size_t l = 0; l < d.pieces.size(); ++l) {
        double I = 0.0;
        for (std::size_t j = 0; j < d.lambda.size(); ++j)
            if (d.lambda[j] >= 0.0) I += std::norm(d.pieces[l][j]) * d.lambda[j] * d.lambda[j] * h;
        const double k2 = std::sqrt(cDelta * 2.0 * std::pow(t, -1.5) * I);
        const double r = std::ldexp(1.0, static_cast<int>(l)) * rt;
        rep.decompositionBound += std::pow(1.0 + std::ldexp(1.0, static_cast<int>(l)), epsilon) *
                                  std::min(std::pow(r, 1.5), std::pow(r, 1.5)) * k2;
    }
    return rep;
}

TranslationReport translation_check(const std::vector<double>& ts, double delta, Exec exec) {
    if (!(delta > 0.0)) throw std::invalid_argument("translation_check: delta must be positive");
    TranslationReport rep;
    const GroupModel model = GroupModel::abelian(2);
    rep.points = run_shards<TranslationPoint>(static_cast<int>(ts.size()), exec, [&](int i) {
        TranslationPoint pt;
        pt.t = ts[i];
        const HeatEvaluator h(model, pt.t);
        pt.gradBound = delta * grad_l1_norm(h, Exec::Serial).norm;
        // (sigma, u) coordinates with sigma = cosh rho - cosh u: R_y shifts u by delta and scales sigma by e^{-delta}
        const double rmax = h.rho_max();
        auto A = [&](double c) { return h3_profile(pt.t, std::acosh(std::max(c, 1.0))); };
        const double ed = std::exp(-delta);
        const double panel = 0.2;
        const GaussRule gu = gauss_legendre(-rmax, rmax, static_cast<int>(std::ceil(2.0 * rmax / panel)));
        double acc = 0.0;
        for (std::size_t iu = 0; iu < gu.x.size(); ++iu) {
            const double u = gu.x[iu];
            const double c1 = std::cosh(u + delta);
            const int np = std::max(1, static_cast<int>(std::ceil((rmax - std::abs(u)) / panel)));
            const GaussRule gr = gauss_legendre(std::abs(u), rmax, np);
            double inner = 0.0;
            for (std::size_t ir = 0; ir < gr.x.size(); ++ir) {
                const double rho = gr.x[ir];
                const double sigma = 2.0 * std::sinh(0.5 * (rho + u)) * std::sinh(0.5 * (rho - u));
                const double c0 = std::cosh(rho);
                const double shifted = ed * A(c1 + ed * sigma);
                inner += gr.w[ir] * std::abs(shifted - A(c0)) * std::sinh(rho);
            }
            acc += gu.w[iu] * inner;
        }
        pt.diff = 2.0 * kPi * acc;
        return pt;
    });
    std::vector<double> lt, ld, lg;
    for (const auto& p : rep.points) {
        lt.push_back(std::log(p.t));
        ld.push_back(std::log(p.diff / delta));
        lg.push_back(std::log(p.gradBound / delta));
        rep.maxRatio = std::max(rep.maxRatio, p.diff / p.gradBound);
    }
    if (lt.size() >= 2) {
        rep.slopeDiff = fit_slope(lt, ld);
        rep.slopeGrad = fit_slope(lt, lg);
    }
    return rep;
}

DyadicDemoReport dyadic_multiplier_demo(const MultiplierProfile& F, double s0, double sInf, int jLo, int jHi,
                                        double epsilon, Exec exec) {
    if (jLo > jHi) throw std::invalid_argument("dyadic_multiplier_demo: empty j-range");
    DyadicDemoReport rep;
    rep.mhLow = mh_norm(F, s0, MHRegime::Low, {}, exec).norm;
    rep.mhHigh = mh_norm(F, sInf, MHRegime::High, {}, exec).norm;
    rep.pieces = run_shards<DyadicPiece>(jHi - jLo + 1, exec, [&](int i) {
        DyadicPiece p;
        p.j = jLo + i;
        const MultiplierProfile Fj = dyadic_piece(F, p.j);
        double mx = 0.0;
        for (int k = 0; k <= 512; ++k) mx = std::max(mx, std::abs(Fj.F(0.5 + 1.5 * k / 512.0)));
        if (mx == 0.0) {
            p.zero = true;
            return p;
        }
        p.weightedL1 = weighted_kernel_bounds(Fj, std::ldexp(1.0, -p.j), epsilon).weightedL1;
        p.sobolev = sobolev_norm([&](double l) { return l > 0.0 ? Fj.F(l) : Complex{}; }, p.j <= 0 ? s0 : sInf);
        p.ratio = p.weightedL1 / p.sobolev;
        return p;
    });
    for (const auto& p : rep.pieces) {
        if (p.zero) continue;
        double& sup = p.j <= 0 ? rep.supNonPositive : rep.supPositive;
        sup = std::max(sup, p.ratio);
    }
    return rep;
}

}  // namespace nasolv
