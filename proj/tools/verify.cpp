#include "verify.hpp"

#include <cmath>
#include <random>

#include "nasolv/czspace.hpp"
#include "nasolv/heat.hpp"
#include "nasolv/metric.hpp"
#include "nasolv/multiplier.hpp"

namespace nasolv::cli {

using nlohmann::json;

int VerifyReport::failures() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass ? 0 : 1;
    return n;
}

json VerifyReport::to_json() const {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"module", c.module}, {"name", c.name}, {"value", c.value}, {"limit", c.limit},
                       {"relation", c.relation}, {"pass", c.pass}});
    return {{"seed", seed}, {"checks", arr}, {"failures", failures()}, {"total", checks.size()}};
}

std::vector<CZSuiteRow> cz_suite(const Config& cfg, int nFunctions, std::uint64_t seed) {
    const AdmissibilityConstants c = cfg.constants();
    const Carrier C = build_carrier(cfg.window(), c);
    std::mt19937_64 rng(seed);
    std::vector<CZSuiteRow> rows;
    for (int i = 0; i < nFunctions; ++i) {
        const DiscretizedFunction f = random_function(C, i, rng);
        const double base = f.l1() / C.windowMeasure;
        for (double a : cfg.czAlphaFactors) {
            CZSuiteRow r;
            r.index = i;
            r.alphaFactor = a;
            r.alpha = a * base;
            try {
                const CZDecomposition d = cz_decompose(f, r.alpha);
                const CZCheck chk = verify_cz(d, c);
                r.parts = static_cast<int>(d.parts.size());
                r.gBound = d.diag.gBound;
                r.sumMeasures = d.diag.sumMeasures;
                r.sumL1 = d.diag.sumL1;
                r.ok = chk.ok();
                r.failure = chk.failure;
            } catch (const std::invalid_argument& e) {
                r.failure = e.what();
            }
            rows.push_back(r);
        }
    }
    return rows;
}

namespace {

class Suite {
public:
    explicit Suite(VerifyReport& r) : rep_(r) {}

    void module(std::string m) { module_ = std::move(m); }
    void le(const std::string& name, double v, double limit) { add(name, v, limit, "<=", v <= limit); }
    void ge(const std::string& name, double v, double limit) { add(name, v, limit, ">=", v >= limit); }
    void eq(const std::string& name, double v, double target) { add(name, v, target, "==", v == target); }

private:
    void add(const std::string& name, double v, double limit, const char* rel, bool pass) {
        rep_.checks.push_back({module_, name, v, limit, rel, pass && std::isfinite(v)});
    }
    VerifyReport& rep_;
    std::string module_;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GPoint random_gpoint(const GroupModel& m, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> U(-scale, scale);
    GPoint x;
    x.z = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) x.z[i] = U(rng);
    x.u = U(rng);
    return x;
}

void group_checks(Suite& s, std::mt19937_64& rng) {
    s.module("group");
    for (const char* spec : {"abelian:2", "abelian:3", "heisenberg1"}) {
        const GroupModel m = GroupModel::parse(spec);
        double assoc = 0.0, inv = 0.0, modular_err = 0.0;
        for (int i = 0; i < 50; ++i) {
            const GPoint x = random_gpoint(m, rng, 2.0), y = random_gpoint(m, rng, 2.0), z = random_gpoint(m, rng, 2.0);
            const GPoint a = g_multiply(m, g_multiply(m, x, y), z), b = g_multiply(m, x, g_multiply(m, y, z));
            const GPoint e = g_multiply(m, x, g_inverse(m, x));
            assoc = std::max(assoc, std::abs(a.u - b.u));
            inv = std::max(inv, std::abs(e.u));
            for (int k = 0; k < m.d; ++k) {
                assoc = std::max(assoc, std::abs(a.z[k] - b.z[k]));
                inv = std::max(inv, std::abs(e.z[k]));
            }
            modular_err = std::max(modular_err, rel(modular(m, g_multiply(m, x, y)), modular(m, x) * modular(m, y)));
        }
        const std::string n = m.name();
        s.le(n + " associativity", assoc, 1e-12);
        s.le(n + " inverse", inv, 1e-12);
        s.le(n + " modular homomorphism", modular_err, 1e-12);
    }
}

void metric_checks(Suite& s, const Config& cfg, std::mt19937_64& rng) {
    s.module("metric");
    const GroupModel m2 = GroupModel::abelian(2);
    GPoint o = g_identity(m2), p = o;
    p.z[0] = 2.0;
    s.le("dist((0,0,0),(2,0,0)) - acosh 3", std::abs(cc_distance_g(m2, o, p) - std::acosh(3.0)), 1e-12);
    for (const char* spec : {"abelian:2", "heisenberg1"}) {
        const GroupModel m = GroupModel::parse(spec);
        double worst = 0.0;
        ShootingOptions so;
        for (int i = 0; i < 5; ++i) {
            const GPoint x = random_gpoint(m, rng, 1.0), y = random_gpoint(m, rng, 1.0);
            so.seed = cfg.seed + i;
            const ShootingResult r = shoot_distance_g(m, x, y, so);
            worst = std::max(worst, r.converged ? std::abs(r.length - cc_distance_g(m, x, y)) : 1.0);
        }
        s.le(std::string(spec) + " distance vs shooting", worst, 1e-4);
    }
    const double VN = unit_ball_volume_n_exact(2);
    const double pi = std::acos(-1.0);
    s.le("ball volume closed form r=1", rel(ball_volume_g(2, VN, 1.0), pi * (std::sinh(2.0) - 2.0)), 1e-12);
    const MCEstimate mc = mc_ball_volume_g(m2, 1.0, 100000, cfg.seed);
    s.le("ball volume vs Monte Carlo r=1", rel(mc.value, ball_volume_g(2, VN, 1.0)), 0.02);
    const double r = 0.05;
    s.le("small ball vs Euclidean r=0.05", rel(ball_volume_g(2, VN, r), 4.0 / 3.0 * pi * r * r * r), 0.01);
}

void cz_checks(Suite& s, const Config& cfg) {
    s.module("czspace");
    const int Q = cfg.model().Q;
    const ConstantsReport cr = validate_constants(cfg.M, cfg.r0, cfg.eta, 2.0, Q);
    double minSlack = 1e300;
    for (const auto& c : cr.checks) minSlack = std::min(minSlack, c.slack);
    s.ge("admissibility constants min slack", minSlack, 0.0);
    if (cfg.model().kind != NKind::Abelian) return;
    const AdmissibilityConstants c = cfg.constants();
    const Window w = cfg.window();

    int fails = 0;
    const auto rows = cz_suite(cfg, 12, cfg.seed);
    for (const auto& r : rows) fails += r.ok ? 0 : 1;
    s.eq("CZ decompositions failing (12 functions)", fails, 0);

    NPoint lo(Q), hi(Q);
    for (int i = 0; i < Q; ++i) hi[i] = 8.0;
    const DyadicSystem E = build_dyadic_euclidean(Q, lo, hi, -2, 2, 4);
    const DyadicReport er = verify_dyadic(E, [](const NPoint& a, const NPoint& b) {
        double acc = 0.0;
        for (int i = 0; i < a.d; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(acc);
    });
    s.le("Euclidean dyadic C_N", er.CN, 4.0);
    s.eq("Euclidean dyadic partition", er.partition, 1);
    s.eq("Euclidean dyadic nested", er.nested, 1);

    const GroupModel H = GroupModel::heisenberg1();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<NPoint> pts;
    while (pts.size() < 200) {
        NPoint z{2.0 * U(rng), 2.0 * U(rng), U(rng)};
        if (cc_norm_n(H, z) < 2.0) pts.push_back(z);
    }
    const NMetric hd = [&](const NPoint& a, const NPoint& b) { return cc_distance_n(H, a, b); };
    const DyadicReport hr = verify_dyadic(build_dyadic_net(pts, hd, 2.0, -3, 1), hd);
    s.eq("Heisenberg net partition", hr.partition, 1);
    s.eq("Heisenberg net nested", hr.nested, 1);

    const CstarReport cs = measure_Cstar(w, c, 40, 2000, cfg.seed);
    s.le("enlargement ratio vs C*", cs.measured, c.Cstar);
    const ConditionCReport cc = check_condition_C(w, c, 100, cfg.seed);
    s.eq("condition (C) failures", cc.nestingFailures + cc.containmentFailures + cc.admissibilityFailures, 0);
    const InclusionReport inc = check_ball_inclusions(c, 100, 20, cfg.seed);
    s.eq("ball/set inclusion failures",
         static_cast<double>(inc.failSmallBox + inc.failBigBox + inc.failOuterBox + inc.failInnerBox + inc.failSetInBall),
         0);
}

void heat_checks(Suite& s) {
    s.module("heat");
    const GroupModel m = GroupModel::abelian(2);
    const HeatEvaluator h1(m, 1.0), h2(m, 2.0);
    const HeatIntegrals I = heat_integrals(h1);
    s.le("t=1 mass - 1", std::abs(I.mass - 1.0), 1e-3);
    s.le("t=1 relative L1 distance to H^3 kernel", I.oracleL1Diff / I.oracleMass, 1e-2);
    double lo = 1e300, hi = 0.0;
    for (double t : {1.0, 4.0, 16.0, 64.0}) {
        const double v = grad_l1_norm(HeatEvaluator(m, t)).scaled;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    s.le("sqrt(t) gradient norm max/min", hi / lo, 2.0);
    s.le("gradient vs central differences", gradient_fd_check(h1, 20, 3).maxRelErr, 1e-6);
    s.eq("modular bound violations", modular_bound_check(h1, 200, 4).violations, 0);
    s.le("semigroup h1*h1 - h2 (L1)", semigroup_check(h1, h2).l1Diff, 1e-4);
    const HeatIntegrals I3 = heat_integrals(HeatEvaluator(GroupModel::abelian(3), 1.0));
    s.le("Q=3 mass - 1", std::abs(I3.mass - 1.0), 1e-3);
}

void multiplier_checks(Suite& s) {
    s.module("multiplier");
    const GroupModel m = GroupModel::abelian(2);
    for (double t : {1.0, 2.0}) {
        const double l2 = heat_integrals(HeatEvaluator(m, t)).l2;
        s.le("Plancherel vs heat L2, t=" + std::to_string(static_cast<int>(t)),
             rel(kernel_l2_norm(MultiplierProfile::heat(t), 2).exact, l2), 1e-2);
    }
    {
        const double t = 1.0;
        SphericalOptions so;
        so.band = 13.0 * std::sqrt(t) + 10.0;
        std::vector<double> rg;
        for (int i = 0; i <= 40; ++i) rg.push_back(0.2 * i);
        const RadialKernel k = spherical_kernel_h3(MultiplierProfile::heat(t), rg, so);
        double worst = 0.0;
        for (std::size_t i = 0; i < rg.size(); ++i)
            worst = std::max(worst, std::abs(k.phi[i].real() - h3_profile(t, rg[i])) / h3_profile(t, 0.0));
        s.le("spherical synthesis vs H^3 heat kernel", worst, 1e-8);
    }
    {
        const L1L2Report r = l1_l2_check({0.5, 1.0, 2.0}, 2);
        s.le("l1/l2 ratio spread", r.spread, 3.0);
        s.le("band-limited kernel leak beyond r", r.maxLeak, 1e-8);
        s.le("radial vs Plancherel L2", r.maxL2Mismatch, 1e-8);
    }
    {
        const HebischDecomposition d = hebisch_decompose([](double l) { return Complex{psi_bump(l * l)}; });
        s.le("decomposition reconstruction", d.reconstructionError, 1e-8);
        s.le("decomposition band leak", d.bandLeak, 1e-12);
        s.le("decomposition tail slope", d.tailSlope, -3.8);
    }
    {
        const MultiplierProfile F = MultiplierProfile::imag_power(1.0);
        const MHNormReport a = mh_norm_range(dilate(F, 2.0), 2.0, -8, 0);
        const MHNormReport b = mh_norm_range(F, 2.0, -4, 4);
        s.le("MH norm dilation by 2", std::abs(a.norm - b.norm), 0.0);
        s.le("MH norm of 1 vs Sobolev norm of psi",
             rel(mh_norm(MultiplierProfile::one(), 2.0, MHRegime::Low).norm,
                 sobolev_norm([](double l) { return Complex{psi_bump(l)}; }, 2.0)),
             1e-12);
    }
    {
        const WeightedBoundReport w = weighted_kernel_bounds(MultiplierProfile::psi(), 1.0, 0.1);
        s.le("weighted L1 vs decomposition bound", w.weightedL1 / w.decompositionBound, 1.0);
        s.le("weighted L1 tail share", w.tail, 1e-8);
    }
}

}  // namespace

VerifyReport verify_all(const Config& cfg, std::uint64_t seed) {
    Config c = cfg;
    c.seed = seed;
    VerifyReport rep;
    rep.seed = seed;
    Suite s(rep);
    std::mt19937_64 rng(seed);
    group_checks(s, rng);
    metric_checks(s, c, rng);
    cz_checks(s, c);
    heat_checks(s);
    multiplier_checks(s);
    return rep;
}

}  // namespace nasolv::cli
