#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"
#include "nasolv/multiplier.hpp"
#include "nasolv/quadrature.hpp"

namespace nasolv {

namespace {

constexpr double kPi = 3.141592653589793238;

double low_pass(double x) { return 1.0 - smooth_step(2.0 * std::abs(x) - 1.0); }

}  // namespace

SphericalSynthesizer::SphericalSynthesizer(const MultiplierProfile& F, const SphericalOptions& opt) {
    const double band = F.bandLimit > 0.0 ? F.bandLimit : (opt.band > 0.0 ? opt.band : 30.0);
    ds_ = opt.ds > 0.0 ? opt.ds : 0.9 * 2.0 * kPi / (band + opt.rMax);
    if (std::isfinite(F.lambda_max())) {
        const int n = static_cast<int>(std::sqrt(F.lambda_max()) / ds_);
        for (int i = 1; i <= n; ++i) {
            const double s = ds_ * i;
            w_.push_back(ds_ * s * F.f(s));
        }
        return;
    }
    // extend in doubling blocks until |f(s) s| over a whole block is below tailTol * peak
    double peak = 0.0;
    int end = 64;
    int i = 1;
    for (;;) {
        double blockMax = 0.0;
        for (; i <= end; ++i) {
            const double s = ds_ * i;
            const Complex v = ds_ * s * F.f(s);
            w_.push_back(v);
            blockMax = std::max(blockMax, std::abs(v));
        }
        peak = std::max(peak, blockMax);
        if (blockMax <= opt.tailTol * peak) break;
        if (2 * end > opt.maxNodes) throw ConvergenceError("spherical synthesis: multiplier " + F.name + " decays too slowly");
        end *= 2;
    }
    while (!w_.empty() && w_.back() == Complex{}) w_.pop_back();
}

Complex SphericalSynthesizer::phi(double r) const {
    const double c = spherical_constant_h3();
    Complex acc{};
    if (r < 1e-8) {
        for (std::size_t i = 0; i < w_.size(); ++i) acc += w_[i] * (ds_ * static_cast<double>(i + 1));
        return c * acc;
    }
    // sin((i + 1) ds r) by rotation, re-anchored every 1024 terms
    const double th = ds_ * r;
    const Complex rot = std::polar(1.0, th);
    Complex e = rot;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if ((i & 1023) == 0) e = std::polar(1.0, th * static_cast<double>(i + 1));
        acc += w_[i] * e.imag();
        e *= rot;
    }
    return c * acc / std::sinh(r);
}

RadialKernel spherical_kernel_h3(const MultiplierProfile& F, const std::vector<double>& rGrid,
                                 const SphericalOptions& opt, Exec exec) {
    SphericalOptions o = opt;
    for (double r : rGrid) {
        if (r < 0.0) throw std::invalid_argument("spherical_kernel_h3: negative radius");
        o.rMax = std::max(o.rMax, r);
    }
    const SphericalSynthesizer syn(F, o);
    RadialKernel k;
    k.r = rGrid;
    k.phi = run_shards<Complex>(static_cast<int>(rGrid.size()), exec, [&](int i) { return syn.phi(rGrid[i]); });
    return k;
}

double radial_l1(const std::function<double(double)>& absPhi, double rMax, int panels,
                 const std::function<double(double)>& weight) {
    const GaussRule g = gauss_legendre(0.0, rMax, panels);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double r = g.x[i];
        const double w = weight ? weight(r) : 1.0;
        acc += g.w[i] * absPhi(r) * w * std::sinh(r) * r;
    }
    return 4.0 * kPi * acc;
}

double radial_l2(const std::function<double(double)>& absPhi, double rMax, int panels) {
    const GaussRule g = gauss_legendre(0.0, rMax, panels);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double v = absPhi(g.x[i]) * std::sinh(g.x[i]);
        acc += g.w[i] * v * v;
    }
    return std::sqrt(4.0 * kPi * acc);
}

HebischDecomposition hebisch_decompose(const CFn1& f, const HebischOptions& opt) {
    const int n = opt.n;
    if (n < 16 || (n & (n - 1)) != 0) throw std::invalid_argument("hebisch_decompose: grid length must be a power of two");
    const double h = 2.0 * opt.halfWidth / n;
    if (std::ldexp(1.0, opt.Lmax) > kPi / h + 1e-9)
        throw std::invalid_argument("hebisch_decompose: grid Nyquist frequency below 2^Lmax");
    HebischDecomposition d;
    d.lambda.resize(n);
    d.f.resize(n);
    double fmax = 0.0;
    for (int j = 0; j < n; ++j) {
        d.lambda[j] = -opt.halfWidth + h * j;
        d.f[j] = f(d.lambda[j]);
        fmax = std::max(fmax, std::abs(d.f[j]));
    }
    for (int j = 1; j < n; ++j) {
        if (std::abs(d.f[j] - d.f[n - j]) > 1e-12 * std::max(1.0, fmax))
            throw std::invalid_argument("hebisch_decompose: profile is not even");
        if (std::abs(d.lambda[j]) > 2.0 + 1e-12 && d.f[j] != Complex{})
            throw std::invalid_argument("hebisch_decompose: profile not supported in [-2, 2]");
    }
    if (d.f[0] != Complex{}) throw std::invalid_argument("hebisch_decompose: profile not supported in [-2, 2]");

    std::vector<Complex> spec = d.f;
    detail::dft(spec, -1);
    double specMax = 0.0;
    for (const auto& v : spec) specMax = std::max(specMax, std::abs(v));

    // at the Nyquist level the top piece takes the whole remainder
    const bool topIsNyquist = std::ldexp(1.0, opt.Lmax) >= kPi / h - 1e-9;
    std::vector<Complex> sum(n);
    for (int l = 0; l <= opt.Lmax; ++l) {
        const double hi = std::ldexp(1.0, l), lo = std::ldexp(1.0, l - 1);
        std::vector<Complex> piece(n);
        for (int k = 0; k < n; ++k) {
            const double w = detail::dft_frequency(k, n, h);
            const double top = l == opt.Lmax && topIsNyquist ? 1.0 : low_pass(w / hi);
            const double m = l == 0 ? top : top - low_pass(w / lo);
            piece[k] = spec[k] * m;
        }
        detail::dft(piece, +1);
        for (auto& v : piece) v /= static_cast<double>(n);

        std::vector<Complex> check = piece;
        detail::dft(check, -1);
        for (int k = 0; k < n; ++k)
            if (std::abs(detail::dft_frequency(k, n, h)) > hi * (1.0 + 1e-12) && specMax > 0.0)
                d.bandLeak = std::max(d.bandLeak, std::abs(check[k]) / specMax);

        double e = 0.0;
        for (int j = 0; j < n; ++j) {
            sum[j] += piece[j];
            const double x = d.lambda[j];
            if (x >= 0.0) e += std::norm(piece[j]) * (std::pow(x, opt.alpha) + std::pow(x, opt.beta)) * h;
        }
        d.energy.push_back(e);
        d.pieces.push_back(std::move(piece));
    }
    for (int j = 0; j < n; ++j) d.reconstructionError = std::max(d.reconstructionError, std::abs(sum[j] - d.f[j]));

    const double emax = *std::max_element(d.energy.begin(), d.energy.end());
    std::vector<double> xs, ys;
    for (int l = std::max(0, opt.fitLo); l <= std::min(opt.Lmax, opt.fitHi); ++l)
        if (d.energy[l] > 1e-30 * emax && d.energy[l] > 0.0) {
            xs.push_back(l);
            ys.push_back(std::log2(d.energy[l]));
        }
    d.tailSlope = xs.size() >= 2 ? fit_slope(xs, ys) : 0.0;
    return d;
}

}  // namespace nasolv
