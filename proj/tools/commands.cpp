#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nasolv/czspace.hpp"
#include "nasolv/heat.hpp"
#include "nasolv/metric.hpp"
#include "nasolv/multiplier.hpp"
#include "nasolv/quadrature.hpp"
#include "output.hpp"
#include "verify.hpp"

namespace nasolv::cli {

using nlohmann::json;

GPoint parse_point(const GroupModel& m, const std::string& s) {
    const std::vector<double> v = parse_list(s);
    if (static_cast<int>(v.size()) != m.d + 1)
        throw std::invalid_argument("point '" + s + "' needs " + std::to_string(m.d + 1) + " coordinates (z, u)");
    GPoint x;
    x.z = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) x.z[i] = v[i];
    x.u = v[m.d];
    return x;
}

namespace {

std::string point_str(const GPoint& x) {
    std::string s;
    for (int i = 0; i < x.z.d; ++i) s += num(x.z[i]) + ";";
    return s + num(x.u);
}

json set_json(const AdmissibleSet& R, int Q) {
    json a = json::array();
    for (int i = 0; i < Q; ++i) a.push_back(R.cube.a[i]);
    return {{"k", R.cube.k}, {"a", a}, {"u0", R.u0}, {"r", R.r},
            {"kind", R.kind == SetKind::Small ? "small" : "big"}, {"measure", R.measure(Q)}};
}

std::vector<std::vector<double>> read_rows(const std::string& path, std::size_t width) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> v;
        try {
            v = parse_list(line);
        } catch (const std::invalid_argument&) {
            if (rows.empty()) continue;  // header
            throw;
        }
        if (v.size() != width)
            throw std::invalid_argument(path + ": expected " + std::to_string(width) + " columns in '" + line + "'");
        rows.push_back(std::move(v));
    }
    return rows;
}

struct Context {
    Config cfg;
    std::string configPath;
    std::uint64_t seed = 7;
    std::string out;
    double tol = 0.0;
    bool seedSet = false, outSet = false, tolSet = false;

    void finalize() {
        if (!configPath.empty()) cfg = load_config(configPath);
        if (seedSet) cfg.seed = seed;
        if (outSet) cfg.out = out;
        if (tolSet) cfg.tol = tol;
        validate(cfg);
    }
};

void summary(const Config& cfg, const std::string& line, double seconds) {
    std::ostream& os = cfg.out.empty() ? std::cerr : std::cout;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", seconds);
    os << line << " (" << buf << " s)\n";
}

// ---- geom ----

int geom_dist(const Config& cfg, const std::string& from, const std::string& to) {
    const GroupModel m = cfg.model();
    const GPoint x = parse_point(m, from), y = parse_point(m, to);
    const double v = cc_distance_g(m, x, y);
    ShootingOptions so;
    so.seed = cfg.seed;
    const ShootingResult s = shoot_distance_g(m, x, y, so);
    if (!s.converged) throw ConvergenceError("shooting oracle did not converge");
    Table t({"from", "to", "value", "oracle", "residual"});
    t.add({point_str(x), point_str(y), num(v), num(s.length), num(std::abs(v - s.length))});
    emit(cfg.out, "dist.csv", t.csv());
    return std::abs(v - s.length) <= 1e-4 ? kExitOk : kExitValidation;
}

int geom_geodesic(const Config& cfg, const std::string& from, const std::string& to, int samples) {
    const GroupModel m = cfg.model();
    const GPoint x = parse_point(m, from), y = parse_point(m, to);
    ShootingOptions so;
    so.seed = cfg.seed;
    const ShootingResult s = shoot_distance_g(m, x, y, so);
    if (!s.converged) throw ConvergenceError("geodesic shooting did not converge");
    std::vector<std::string> head = {"s", "arclength"};
    for (int i = 0; i < m.d; ++i) head.push_back("z" + std::to_string(i));
    head.push_back("u");
    head.push_back("hamiltonian");
    Table t(head);
    for (int i = 0; i <= samples; ++i) {
        const double si = static_cast<double>(i) / samples;
        const HJStateG st = i == 0 ? s.initial : hj_flow_g(m, s.initial, si);
        std::vector<std::string> row = {num(si), num(si * s.length)};
        for (int k = 0; k < m.d; ++k) row.push_back(num(st.z[k]));
        row.push_back(num(st.u));
        row.push_back(num(hamiltonian_g(m, st)));
        t.add(row);
    }
    emit(cfg.out, "geodesic.csv", t.csv());
    return kExitOk;
}

int geom_ball_volume(const Config& cfg, const std::vector<double>& radii, std::int64_t samples) {
    const GroupModel m = cfg.model();
    const double VN = m.kind == NKind::Abelian ? unit_ball_volume_n_exact(m.Q)
                                               : mc_unit_ball_volume_n(m, samples, cfg.seed).value;
    Table t({"r", "value", "oracle", "oracle_stderr", "rel_residual"});
    bool ok = true;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double v = ball_volume_g(m.Q, VN, r);
        const MCEstimate mc = mc_ball_volume_g(m, r, samples, cfg.seed + i);
        const double rel = std::abs(v - mc.value) / v;
        ok = ok && rel <= 0.02;
        t.add({num(r), num(v), num(mc.value), num(mc.stderr_), num(rel)});
    }
    emit(cfg.out, "ball_volume.csv", t.csv());
    return ok ? kExitOk : kExitValidation;
}

// ---- cz ----

void require_constants(const Config& cfg) {
    const ConstantsReport rep = validate_constants(cfg.M, cfg.r0, cfg.eta, 2.0, cfg.model().Q);
    if (!rep.allPass) {
        std::string bad;
        for (const auto& c : rep.checks)
            if (!c.pass) bad += " " + c.name;
        throw ValidationFailure("admissibility constants rejected:" + bad);
    }
}

void require_abelian(const Config& cfg, const char* what) {
    if (cfg.model().kind != NKind::Abelian) throw ConfigError(std::string(what) + " needs an abelian group");
}

int cz_dyadic(const Config& cfg) {
    const GroupModel m = cfg.model();
    DyadicSystem sys;
    DyadicReport rep;
    if (m.kind == NKind::Abelian) {
        NPoint lo(m.d), hi(m.d);
        for (int i = 0; i < m.d; ++i) {
            lo[i] = 0.0;
            hi[i] = std::ldexp(1.0, cfg.dyadicKMax + 1);
        }
        sys = build_dyadic_euclidean(m.Q, lo, hi, cfg.dyadicKMin, cfg.dyadicKMax, cfg.dyadicPerSide);
        rep = verify_dyadic(sys, [](const NPoint& a, const NPoint& b) {
            double s = 0.0;
            for (int i = 0; i < a.d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        });
    } else {
        const NMetric d = [&](const NPoint& a, const NPoint& b) { return cc_distance_n(m, a, b); };
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        const double R = std::ldexp(1.0, cfg.dyadicKMax);
        std::vector<NPoint> pts;
        while (pts.size() < 500) {
            NPoint z(m.d);
            for (int i = 0; i < m.d; ++i) z[i] = R * U(rng) * (m.weights[i] == 2 ? R : 1.0);
            if (cc_norm_n(m, z) < R) pts.push_back(z);
        }
        sys = build_dyadic_net(pts, d, cfg.eta, cfg.dyadicKMin, cfg.dyadicKMax);
        rep = verify_dyadic(sys, d);
    }
    json cubes = json::array();
    for (const auto& c : sys.cubes)
        cubes.push_back({{"id", c.id}, {"k", c.k}, {"center", c.center.vec()}, {"parent", c.parent},
                         {"children", c.children}, {"members", c.members.size()}});
    json j = {{"group", m.name()},
              {"kMin", sys.kMin},
              {"kMax", sys.kMax},
              {"eta", sys.eta},
              {"carrierSize", sys.carrier.size()},
              {"report", {{"CN", rep.CN}, {"J", rep.J}, {"partition", rep.partition}, {"nested", rep.nested}}},
              {"cubes", cubes}};
    emit_json(cfg.out, "dyadic.json", j);
    return rep.partition && rep.nested ? kExitOk : kExitValidation;
}

int cz_partition(const Config& cfg, double sigma) {
    require_abelian(cfg, "cz partition");
    require_constants(cfg);
    const AdmissibilityConstants c = cfg.constants();
    const Window w = cfg.window();
    const QuasiPartition P = big_quasi_partition(sigma > 0.0 ? sigma : 4.0 * w.measure() * (1.0 + 1e-3), w, c);
    json sets = json::array();
    for (const auto& R : P.sets) sets.push_back(set_json(R, c.Q));
    json strips = json::array();
    for (const auto& s : P.strips) strips.push_back({{"u0", s.u0}, {"r", s.r}, {"k", s.k}});
    emit_json(cfg.out, "partition.json", {{"coveredFraction", P.coveredFraction}, {"strips", strips}, {"sets", sets}});
    return P.coveredFraction >= 1.0 - 1e-12 ? kExitOk : kExitValidation;
}

int locate_leaf(const Carrier& C, const std::vector<int>& leafPos, const GPoint& x) {
    for (int root : C.roots) {
        if (!C.nodes[root].set.contains(C.Q, x)) continue;
        int id = root;
        for (bool descended = true; descended && !C.nodes[id].children.empty();) {
            descended = false;
            for (int ch : C.nodes[id].children)
                if (C.nodes[ch].set.contains(C.Q, x)) {
                    id = ch;
                    descended = true;
                    break;
                }
        }
        return C.nodes[id].children.empty() ? leafPos[id] : -1;
    }
    return -1;
}

int cz_decompose_cmd(const Config& cfg, double alpha, double alphaFactor, const std::string& input, int kind) {
    require_abelian(cfg, "cz decompose");
    require_constants(cfg);
    const AdmissibilityConstants c = cfg.constants();
    const Carrier C = build_carrier(cfg.window(), c);
    DiscretizedFunction f = zero_function(C);
    if (!input.empty()) {
        const GroupModel m = cfg.model();
        std::vector<int> leafPos(C.nodes.size(), -1);
        for (std::size_t i = 0; i < C.leaves.size(); ++i) leafPos[C.leaves[i]] = static_cast<int>(i);
        std::vector<int> count(C.leaves.size(), 0);
        for (const auto& row : read_rows(input, m.d + 2)) {
            GPoint x;
            x.z = NPoint(m.d);
            for (int i = 0; i < m.d; ++i) x.z[i] = row[i];
            x.u = row[m.d];
            const int p = locate_leaf(C, leafPos, x);
            if (p < 0) throw std::invalid_argument("input point outside the carrier: " + point_str(x));
            f.values[p] += row[m.d + 1];
            ++count[p];
        }
        for (std::size_t i = 0; i < f.values.size(); ++i)
            if (count[i] > 1) f.values[i] /= count[i];
    } else {
        std::mt19937_64 rng(cfg.seed);
        f = random_function(C, kind, rng);
    }
    if (alpha <= 0.0) alpha = alphaFactor * f.l1() / C.windowMeasure;
    const CZDecomposition d = cz_decompose(f, alpha);
    const CZCheck chk = verify_cz(d, c);

    Table g({"leaf", "u", "weight", "f", "g"});
    for (std::size_t i = 0; i < C.leaves.size(); ++i)
        g.add({num(static_cast<std::int64_t>(i)), num(C.points[i].u), num(C.weights[i]), num(f.values[i]),
               num(d.g.values[i])});
    json parts = json::array();
    for (const auto& p : d.parts)
        parts.push_back({{"set", set_json(p.set, c.Q)}, {"l1", p.l1}, {"mean", p.mean}, {"absAvg", p.absAvg},
                         {"integral", p.integral}});
    json j = {{"alpha", d.alpha},
              {"kappa0", c.kappa0},
              {"g", cfg.out.empty() ? "omitted" : "g.csv"},
              {"parts", parts},
              {"diagnostics",
               {{"gBound", d.diag.gBound},
                {"sumMeasures", d.diag.sumMeasures},
                {"sumL1", d.diag.sumL1},
                {"fL1", d.diag.fL1},
                {"maxMeanResidual", d.diag.maxMeanResidual},
                {"reconstruction", d.diag.reconstruction},
                {"nestedOrDisjoint", d.diag.nestedOrDisjoint},
                {"supportsOk", d.diag.supportsOk}}},
              {"checks",
               {{"i", chk.i}, {"ii", chk.ii}, {"iii", chk.iii}, {"iv", chk.iv}, {"stopping", chk.stopping},
                {"sharp", chk.sharp}, {"failure", chk.failure}}}};
    if (!cfg.out.empty()) emit(cfg.out, "g.csv", g.csv());
    emit_json(cfg.out, "decomposition.json", j);
    return chk.ok() ? kExitOk : kExitValidation;
}

int cz_verify(const Config& cfg) {
    require_abelian(cfg, "cz verify");
    const ConstantsReport cr = validate_constants(cfg.M, cfg.r0, cfg.eta, 2.0, cfg.model().Q);
    Table ct({"constraint", "lhs", "rhs", "slack", "pass"});
    for (const auto& c : cr.checks) ct.add({c.name, num(c.lhs), num(c.rhs), num(c.slack), c.pass ? "1" : "0"});
    emit(cfg.out, "constants.csv", ct.csv());
    if (!cr.allPass) return kExitValidation;
    const auto rows = cz_suite(cfg, cfg.czFunctions, cfg.seed);
    Table t({"function", "alpha_factor", "alpha", "parts", "g_bound", "sum_measures", "sum_l1", "ok", "failure"});
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.ok;
        t.add({num(r.index), num(r.alphaFactor), num(r.alpha), num(r.parts), num(r.gBound), num(r.sumMeasures),
               num(r.sumL1), r.ok ? "1" : "0", "\"" + r.failure + "\""});
    }
    emit(cfg.out, "cz_suite.csv", t.csv());
    return ok ? kExitOk : kExitValidation;
}

// ---- heat ----

int heat_eval(const Config& cfg, double t, const std::string& points) {
    require_abelian(cfg, "heat eval");
    const GroupModel m = cfg.model();
    HeatOptions ho;
    ho.relTol = cfg.tol;
    const HeatEvaluator h(m, t, ho);
    std::vector<std::string> head;
    for (int i = 0; i < m.d; ++i) head.push_back("z" + std::to_string(i));
    head.insert(head.end(), {"u", "h", "oracle", "residual"});
    Table tab(head);
    for (const auto& row : read_rows(points, m.d + 1)) {
        GPoint x;
        x.z = NPoint(m.d);
        for (int i = 0; i < m.d; ++i) x.z[i] = row[i];
        x.u = row[m.d];
        const double v = h.kernel(x);
        std::vector<std::string> r;
        for (double c : row) r.push_back(num(c));
        if (m.Q == 2) {
            const double o = std::exp(-x.u) * h3_profile(t, h.rho(x));
            r.insert(r.end(), {num(v), num(o), num(std::abs(v - o))});
        } else {
            r.insert(r.end(), {num(v), "nan", "nan"});
        }
        tab.add(r);
    }
    emit(cfg.out, "heat_eval.csv", tab.csv());
    return kExitOk;
}

int heat_gradnorm(const Config& cfg, const std::vector<double>& ts) {
    require_abelian(cfg, "heat gradnorm");
    const GroupModel m = cfg.model();
    HeatOptions ho;
    ho.relTol = cfg.tol;
    Table tab({"t", "norm", "sqrt_t_norm"});
    for (double t : ts) {
        const GradNormReport g = grad_l1_norm(HeatEvaluator(m, t, ho));
        tab.add({num(t), num(g.norm), num(g.scaled)});
    }
    emit(cfg.out, "gradnorm.csv", tab.csv());
    return kExitOk;
}

// ---- mult ----

int mult_plancherel(const Config& cfg, const std::string& spec) {
    require_abelian(cfg, "mult plancherel");
    const int Q = cfg.model().Q;
    const MultiplierProfile F = MultiplierProfile::parse(spec);
    const KernelL2Report r = kernel_l2_norm(F, Q);
    Table t({"multiplier", "Q", "exact", "comparison", "ratio", "tail"});
    t.add({F.name, num(Q), num(r.exact), num(r.comparison), num(r.comparison > 0 ? r.exact / r.comparison : 0.0),
           num(r.tail)});
    emit(cfg.out, "plancherel.csv", t.csv());
    return kExitOk;
}

int mult_kernel(const Config& cfg, const std::string& spec, double rMax, int n, double band) {
    if (cfg.model().kind != NKind::Abelian || cfg.model().Q != 2) throw ConfigError("mult kernel needs group abelian:2");
    if (n < 2 || !(rMax > 0.0)) throw std::invalid_argument("mult kernel: need n >= 2 and r-max > 0");
    const MultiplierProfile F = MultiplierProfile::parse(spec);
    std::vector<double> rg(n);
    for (int i = 0; i < n; ++i) rg[i] = rMax * i / (n - 1);
    SphericalOptions so;
    so.band = band;
    const RadialKernel k = spherical_kernel_h3(F, rg, so);
    Table t({"r", "phi_re", "phi_im"});
    for (int i = 0; i < n; ++i) t.add({num(k.r[i]), num(k.phi[i].real()), num(k.phi[i].imag())});
    emit(cfg.out, "kernel.csv", t.csv());
    return kExitOk;
}

int mult_mhnorm(const Config& cfg, const std::string& spec, double s) {
    const MultiplierProfile F = MultiplierProfile::parse(spec);
    Table t({"multiplier", "s", "regime", "norm", "argmax_t"});
    const MHNormReport lo = mh_norm(F, s, MHRegime::Low);
    const MHNormReport hi = mh_norm(F, s, MHRegime::High);
    t.add({F.name, num(s), "low", num(lo.norm), num(lo.argmaxT)});
    t.add({F.name, num(s), "high", num(hi.norm), num(hi.argmaxT)});
    emit(cfg.out, "mhnorm.csv", t.csv());
    return kExitOk;
}

int mult_decompose(const Config& cfg, const std::string& spec, int lmax) {
    const MultiplierProfile F = MultiplierProfile::parse(spec);
    HebischOptions ho;
    ho.Lmax = lmax;
    const HebischDecomposition d = hebisch_decompose([&](double l) { return F.F(l * l); }, ho);
    Table t({"l", "energy", "reconstruction", "band_leak", "tail_slope"});
    for (std::size_t l = 0; l < d.energy.size(); ++l)
        t.add({num(static_cast<std::int64_t>(l)), num(d.energy[l]), num(d.reconstructionError), num(d.bandLeak),
               num(d.tailSlope)});
    emit(cfg.out, "decompose.csv", t.csv());
    return d.reconstructionError < 1e-8 ? kExitOk : kExitValidation;
}

int mult_bounds(const Config& cfg, const std::string& spec, const std::vector<double>& ts, double eps, bool l1l2) {
    if (cfg.model().kind != NKind::Abelian || cfg.model().Q != 2) throw ConfigError("mult bounds needs group abelian:2");
    const MultiplierProfile F = MultiplierProfile::parse(spec);
    Table t({"t", "epsilon", "weighted_l1", "l1", "decomposition_bound", "tail"});
    for (double tt : ts) {
        const WeightedBoundReport w = weighted_kernel_bounds(F, tt, eps);
        t.add({num(tt), num(eps), num(w.weightedL1), num(w.l1), num(w.decompositionBound), num(w.tail)});
    }
    emit(cfg.out, "bounds.csv", t.csv());
    if (!l1l2) return kExitOk;
    const L1L2Report r = l1_l2_check({0.5, 1.0, 2.0, 4.0, 8.0});
    Table b({"member", "r", "l1", "l2", "l2_radial", "ratio", "support_leak"});
    for (const auto& p : r.points)
        b.add({num(p.member), num(p.r), num(p.l1), num(p.l2), num(p.l2Radial), num(p.ratio), num(p.supportLeak)});
    emit(cfg.out, "l1l2.csv", b.csv());
    return r.spread <= 3.0 ? kExitOk : kExitValidation;
}

int verify_cmd(const Config& cfg) {
    const VerifyReport rep = verify_all(cfg, cfg.seed);
    emit_json(cfg.out, "verify_report.json", rep.to_json());
    return rep.failures() == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"nasolv: analysis on G = N x R"};
    app.fallthrough();
    app.require_subcommand(1);
    Context ctx;
    app.add_option("--config", ctx.configPath, "JSON config file");
    auto* seedOpt = app.add_option("--seed", ctx.seed, "RNG seed");
    auto* outOpt = app.add_option("--out", ctx.out, "output directory (default: stdout)");
    auto* tolOpt = app.add_option("--tol", ctx.tol, "quadrature tolerance");

    std::function<int(const Config&)> action;
    std::string command;

    auto* geom = app.add_subcommand("geom", "distances, geodesics, ball volumes")->require_subcommand(1);
    std::string from, to;
    int samples = 32;
    std::string radii = "0.5,1,2";
    std::int64_t mc = 0;
    auto* gd = geom->add_subcommand("dist", "distance with shooting oracle");
    gd->add_option("--from", from)->required();
    gd->add_option("--to", to)->required();
    gd->callback([&] { action = [&](const Config& c) { return geom_dist(c, from, to); }; });
    auto* gg = geom->add_subcommand("geodesic", "sampled geodesic");
    gg->add_option("--from", from)->required();
    gg->add_option("--to", to)->required();
    gg->add_option("--samples", samples)->check(CLI::PositiveNumber);
    gg->callback([&] { action = [&](const Config& c) { return geom_geodesic(c, from, to, samples); }; });
    auto* gb = geom->add_subcommand("ball-volume", "ball volume with Monte Carlo oracle");
    gb->add_option("--r", radii);
    gb->add_option("--samples", mc);
    gb->callback([&] {
        action = [&](const Config& c) { return geom_ball_volume(c, parse_list(radii), mc > 0 ? mc : c.mcSamples); };
    });

    auto* cz = app.add_subcommand("cz", "dyadic systems and CZ decompositions")->require_subcommand(1);
    double alpha = 0.0, alphaFactor = 1.0, sigma = 0.0;
    std::string input;
    int kind = 0;
    cz->add_subcommand("dyadic", "dyadic system and its report")->callback([&] {
        action = [](const Config& c) { return cz_dyadic(c); };
    });
    auto* cp = cz->add_subcommand("partition", "big quasi-partition of the window");
    cp->add_option("--sigma", sigma);
    cp->callback([&] { action = [&](const Config& c) { return cz_partition(c, sigma); }; });
    auto* cd = cz->add_subcommand("decompose", "CZ decomposition of a discretised function");
    cd->add_option("--alpha", alpha, "absolute height");
    cd->add_option("--alpha-factor", alphaFactor, "height relative to ||f||_1 / mu(window)");
    cd->add_option("--input", input, "CSV rows z..., u, value");
    cd->add_option("--random", kind, "random function kind when no input is given");
    cd->callback([&] { action = [&](const Config& c) { return cz_decompose_cmd(c, alpha, alphaFactor, input, kind); }; });
    cz->add_subcommand("verify", "constants and the CZ property suite")->callback([&] {
        action = [](const Config& c) { return cz_verify(c); };
    });

    auto* heat = app.add_subcommand("heat", "heat kernel")->require_subcommand(1);
    double t = 1.0;
    std::string points, tlist;
    auto* he = heat->add_subcommand("eval", "kernel values at points");
    he->add_option("--t", t)->check(CLI::PositiveNumber);
    he->add_option("--points", points)->required();
    he->callback([&] { action = [&](const Config& c) { return heat_eval(c, t, points); }; });
    auto* hg = heat->add_subcommand("gradnorm", "L1 norm of the horizontal gradient");
    hg->add_option("--t-list", tlist);
    hg->callback([&] {
        action = [&](const Config& c) { return heat_gradnorm(c, tlist.empty() ? c.tGrid : parse_list(tlist)); };
    });

    auto* mult = app.add_subcommand("mult", "spectral multipliers")->require_subcommand(1);
    std::string spec = "exp";
    double rMax = 10.0, band = 0.0, s = 2.0, eps = 0.1;
    int n = 201, lmax = 12;
    bool l1l2 = false;
    auto* mp = mult->add_subcommand("plancherel", "kernel L2 norm");
    mp->add_option("--F", spec);
    mp->callback([&] { action = [&](const Config& c) { return mult_plancherel(c, spec); }; });
    auto* mk = mult->add_subcommand("kernel", "radial kernel profile on H^3");
    mk->add_option("--F", spec);
    mk->add_option("--r-max", rMax);
    mk->add_option("--n", n);
    mk->add_option("--band", band, "effective band of f = F(s^2)");
    mk->callback([&] { action = [&](const Config& c) { return mult_kernel(c, spec, rMax, n, band); }; });
    auto* mm = mult->add_subcommand("mhnorm", "mixed Mihlin-Hormander norms");
    mm->add_option("--F", spec);
    mm->add_option("--s", s);
    mm->callback([&] { action = [&](const Config& c) { return mult_mhnorm(c, spec, s); }; });
    auto* md = mult->add_subcommand("decompose", "band-limited decomposition of F(l^2)");
    md->add_option("--F", spec);
    md->add_option("--lmax", lmax);
    md->callback([&] { action = [&](const Config& c) { return mult_decompose(c, spec, lmax); }; });
    auto* mb = mult->add_subcommand("bounds", "weighted kernel bounds");
    mb->add_option("--F", spec);
    mb->add_option("--t-list", tlist);
    mb->add_option("--eps", eps);
    mb->add_flag("--l1l2", l1l2, "also run the band-limited l1-l2 scan");
    mb->callback([&] {
        action = [&](const Config& c) {
            return mult_bounds(c, spec, tlist.empty() ? std::vector<double>{1.0, 4.0, 16.0} : parse_list(tlist), eps, l1l2);
        };
    });

    auto* ver = app.add_subcommand("verify", "invariant suites")->require_subcommand(1);
    ver->add_subcommand("all", "every module")->callback([&] { action = [](const Config& c) { return verify_cmd(c); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const auto* sub : app.get_subcommands()) {
        command = sub->get_name();
        for (const auto* sub2 : sub->get_subcommands()) command += " " + sub2->get_name();
    }
    ctx.seedSet = seedOpt->count() > 0;
    ctx.outSet = outOpt->count() > 0;
    ctx.tolSet = tolOpt->count() > 0;

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        ctx.finalize();
        if (!action) {
            std::cerr << "error: no command\n";
            return kExitUsage;
        }
        const int code = action(ctx.cfg);
        summary(ctx.cfg, command + (code == kExitOk ? ": ok" : ": validation failed"), elapsed());
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ValidationFailure& e) {
        std::cerr << command << ": validation failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConvergenceError& e) {
        std::cerr << command << ": no convergence: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace nasolv::cli
