#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "nasolv/heat.hpp"
#include "nasolv/multiplier.hpp"
#include "nasolv/quadrature.hpp"

namespace nasolv {

namespace {

constexpr double kPi = 3.141592653589793238;

Complex interpolate(const std::vector<Complex>& v, double step, double x) {
    if (v.empty() || x < 0.0) return 0.0;
    const double pos = x / step;
    const double last = static_cast<double>(v.size() - 1);
    if (pos > last) return 0.0;
    if (pos == last) return v.back();
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return (1.0 - f) * v[i] + f * v[i + 1];
}

}  // namespace

Complex MultiplierProfile::F(double lambda) const {
    if (evenExtension) return f(std::sqrt(std::max(lambda, 0.0)));
    if (fn) return fn(lambda);
    return interpolate(samples, gridStep, lambda);
}

Complex MultiplierProfile::f(double s) const {
    if (!evenExtension) return F(s * s);
    if (fn) return fn(std::abs(s));
    return interpolate(samples, gridStep, std::abs(s));
}

double MultiplierProfile::lambda_max() const {
    if (fn || samples.empty()) return fn ? std::numeric_limits<double>::infinity() : 0.0;
    const double end = gridStep * static_cast<double>(samples.size() - 1);
    return evenExtension ? end * end : end;
}

MultiplierProfile MultiplierProfile::closed_form(std::string name, CFn1 F) {
    MultiplierProfile p;
    p.name = std::move(name);
    p.fn = std::move(F);
    return p;
}

MultiplierProfile MultiplierProfile::from_samples(std::string name, std::vector<Complex> values, double step,
                                                  bool evenExtension) {
    if (!(step > 0.0)) throw std::invalid_argument("multiplier samples need a positive grid step");
    MultiplierProfile p;
    p.name = std::move(name);
    p.samples = std::move(values);
    p.gridStep = step;
    p.evenExtension = evenExtension;
    return p;
}

MultiplierProfile MultiplierProfile::zero() {
    return closed_form("zero", [](double) { return Complex{}; });
}

MultiplierProfile MultiplierProfile::one() {
    return closed_form("one", [](double) { return Complex{1.0}; });
}

MultiplierProfile MultiplierProfile::heat(double t) {
    std::ostringstream os;
    os << "exp:" << t;
    return closed_form(os.str(), [t](double l) { return Complex{std::exp(-t * l)}; });
}

MultiplierProfile MultiplierProfile::imag_power(double gamma) {
    std::ostringstream os;
    os << "imagpower:" << gamma;
    return closed_form(os.str(), [gamma](double l) {
        if (l <= 0.0) return Complex{};
        const double a = gamma * std::log(l);
        return Complex{std::cos(a), std::sin(a)};
    });
}

MultiplierProfile MultiplierProfile::log_profile() {
    return closed_form("log", [](double l) { return l > 0.0 ? Complex{std::log(l)} : Complex{}; });
}

MultiplierProfile MultiplierProfile::psi() {
    return closed_form("psi", [](double l) { return Complex{psi_bump(l)}; });
}

MultiplierProfile MultiplierProfile::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&](double fallback) {
        if (arg.empty()) return fallback;
        std::size_t used = 0;
        const double v = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument("bad multiplier parameter: " + spec);
        return v;
    };
    if (head == "exp") return heat(number(1.0));
    if (head == "imagpower") return imag_power(number(1.0));
    if (head == "psi") return psi();
    if (head == "one") return one();
    if (head == "zero") return zero();
    if (head == "log") return log_profile();
    if (head.rfind("band", 0) == 0 && head.size() > 4) return band_limited_profile(std::stoi(head.substr(4)), number(1.0));
    std::ifstream probe(spec);
    if (probe) return from_csv(spec);
    throw std::invalid_argument("unknown multiplier: " + spec);
}

MultiplierProfile MultiplierProfile::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open multiplier file " + path);
    std::vector<double> lam;
    std::vector<Complex> val;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double l = 0, re = 0, im = 0;
        if (!(row >> l >> re)) {
            if (lam.empty()) continue;  // header
            throw std::invalid_argument("bad multiplier row: " + line);
        }
        if (!(row >> im)) im = 0.0;
        lam.push_back(l);
        val.emplace_back(re, im);
    }
    if (lam.size() < 2) throw std::invalid_argument("multiplier file needs at least two rows");
    const double step = lam[1] - lam[0];
    if (std::abs(lam[0]) > 1e-12 || !(step > 0.0)) throw std::invalid_argument("multiplier grid must start at 0 and increase");
    for (std::size_t i = 1; i < lam.size(); ++i)
        if (std::abs(lam[i] - lam[0] - step * static_cast<double>(i)) > 1e-9 * std::max(1.0, lam[i]))
            throw std::invalid_argument("multiplier grid is not uniform");
    return from_samples(path, std::move(val), step);
}

MultiplierProfile dilate(const MultiplierProfile& F, double a) {
    std::ostringstream os;
    os << F.name << "@" << a;
    MultiplierProfile p = MultiplierProfile::closed_form(os.str(), [F, a](double l) { return F.F(a * l); });
    if (F.bandLimit > 0.0) p.bandLimit = F.bandLimit * std::sqrt(a);
    return p;
}

MultiplierProfile dyadic_piece(const MultiplierProfile& F, int j) {
    const double a = std::ldexp(1.0, j);
    std::ostringstream os;
    os << F.name << "[j=" << j << "]";
    return MultiplierProfile::closed_form(os.str(), [F, a](double l) {
        const double w = psi_bump(l);
        return w == 0.0 ? Complex{} : F.F(a * l) * w;
    });
}

MultiplierProfile sampled(const MultiplierProfile& F, double lambdaMax, double step) {
    const int n = static_cast<int>(std::ceil(lambdaMax / step)) + 1;
    std::vector<Complex> v(n);
    for (int i = 0; i < n; ++i) v[i] = F.F(step * i);
    return MultiplierProfile::from_samples(F.name, std::move(v), step);
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double psi_bump(double lambda) {
    if (!(lambda > 0.5 && lambda < 2.0)) return 0.0;
    const double y = std::log2(lambda);
    return y < 0.0 ? smooth_step(y + 1.0) : 1.0 - smooth_step(y);
}

double plancherel_density(int Q, double s) {
    if (Q < 1) throw std::invalid_argument("plancherel_density: Q must be positive");
    const double s2 = s * s;
    double p = 1.0;
    if (Q % 2 == 0) {
        for (int j = 0; j < Q / 2; ++j) p *= s2 + double(j) * j;
    } else {
        p = std::abs(s) * std::tanh(kPi * std::abs(s));
        for (int j = 0; j < Q / 2; ++j) p *= s2 + (j + 0.5) * (j + 0.5);
    }
    return p;
}

double plancherel_constant(int Q) {
    if (Q == 2) return 1.0 / (4.0 * kPi * kPi);
    static std::mutex m;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(m);
    if (auto it = cache.find(Q); it != cache.end()) return it->second;
    const HeatEvaluator h(GroupModel::abelian(Q), 1.0);
    const double l2 = heat_integrals(h, Exec::Serial).l2;
    const double dens = 2.0 * integrate([Q](double s) { return std::exp(-2.0 * s * s) * plancherel_density(Q, s); }, 0.0, 12.0);
    const double c = l2 * l2 / dens;
    cache[Q] = c;
    return c;
}

double spherical_constant_h3() { return 1.0 / (2.0 * kPi * kPi); }

KernelL2Report kernel_l2_norm(const MultiplierProfile& F, int Q, double tol) {
    auto exact = [&](double s) { return std::norm(F.f(s)) * plancherel_density(Q, s); };
    auto comp = [&](double l) { return std::norm(F.f(l)) * (l * l + std::pow(l, Q)); };
    KernelL2Report rep;
    double S = 4.0;
    const double lmax = F.lambda_max();
    if (std::isfinite(lmax)) {
        S = std::sqrt(lmax);
    } else {
        auto sup = [&](double a, double b) {
            double m = 0.0;
            for (int i = 0; i <= 64; ++i) {
                const double s = a + (b - a) * i / 64.0;
                m = std::max(m, exact(s) * s);
            }
            return m;
        };
        const double peak = sup(0.0, S);
        for (;;) {
            rep.tail = peak > 0.0 ? sup(S, 2.0 * S) / peak : 0.0;
            if (rep.tail <= tol) break;
            S *= 2.0;
            if (S > 1e6) throw ConvergenceError("kernel_l2_norm: non-convergent tail in " + F.name);
        }
        S *= 2.0;
    }
    rep.sMax = S;
    const int panels = std::max(8, static_cast<int>(std::min(65536.0, std::ceil(S))));
    double a = 0.0, b = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = S * p / panels, hi = S * (p + 1) / panels;
        double err = 0.0;
        a += integrate_nothrow(exact, lo, hi, 1e-12, &err);
        b += integrate_nothrow(comp, lo, hi, 1e-12, &err);
    }
    rep.exact = std::sqrt(plancherel_constant(Q) * 2.0 * a);
    rep.comparison = std::sqrt(b);
    return rep;
}

double sobolev_norm(const CFn1& g, double s, const SobolevGrid& grid) {
    const int n = grid.n;
    const double h = 2.0 * grid.halfWidth / n;
    std::vector<Complex> a(n);
    for (int j = 0; j < n; ++j) a[j] = g(-grid.halfWidth + h * j);
    detail::dft(a, -1);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = detail::dft_frequency(k, n, h);
        acc += std::pow(1.0 + w * w, s) * std::norm(a[k] * h);
    }
    return std::sqrt(acc / (n * h));
}

MHNormReport mh_norm_range(const MultiplierProfile& F, double s, int kLo, int kHi, const SobolevGrid& grid,
                           Exec exec) {
    if (kLo > kHi) throw std::invalid_argument("mh_norm: empty t-range");
    const double tTop = std::exp2(kHi / 4.0);
    if (F.lambda_max() < 2.0 * tTop) throw std::invalid_argument("mh_norm: multiplier grid does not cover the dilated supports");
    if (grid.halfWidth < 2.0) throw std::invalid_argument("mh_norm: Sobolev grid does not cover supp psi");
    const int n = kHi - kLo + 1;
    MHNormReport rep;
    rep.t.resize(n);
    for (int i = 0; i < n; ++i) rep.t[i] = std::exp2((kLo + i) / 4.0);
    rep.values = run_shards<double>(n, exec, [&](int i) {
        const double t = rep.t[i];
        return sobolev_norm(
            [&](double l) {
                const double w = psi_bump(l);
                return w == 0.0 ? Complex{} : F.F(t * l) * w;
            },
            s, grid);
    });
    for (int i = 0; i < n; ++i)
        if (rep.values[i] > rep.norm) {
            rep.norm = rep.values[i];
            rep.argmaxT = rep.t[i];
        }
    return rep;
}

MHNormReport mh_norm(const MultiplierProfile& F, double s, MHRegime regime, const MHOptions& opt, Exec exec) {
    if (regime == MHRegime::Low) return mh_norm_range(F, s, -opt.quarterSteps, -1, opt.grid, exec);
    return mh_norm_range(F, s, 0, opt.quarterSteps, opt.grid, exec);
}

}  // namespace nasolv
