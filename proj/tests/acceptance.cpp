// Acceptance criteria: one PASS/FAIL line each, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "commands.hpp"
#include "config.hpp"
#include "nasolv/czspace.hpp"
#include "nasolv/heat.hpp"
#include "nasolv/metric.hpp"
#include "nasolv/multiplier.hpp"
#include "verify.hpp"

using namespace nasolv;

namespace {

// Tolerances.
constexpr double kDistTol = 1e-4;
constexpr double kDistSeconds = 120.0;
constexpr double kVolumeMCTol = 0.02;
constexpr std::int64_t kVolumeSamples = 1000000;
constexpr double kSmallBallTol = 0.01;
constexpr double kMassTol = 1e-3;
constexpr double kOracleL1Tol = 1e-2;
constexpr double kHeatSeconds = 300.0;
constexpr double kGradIntervalRatio = 2.0;
constexpr double kPlancherelTol = 0.01;
constexpr double kSpreadMax = 3.0;
constexpr double kSlopeTol = 0.15;
constexpr double kReconstructionTol = 1e-8;
constexpr double kBandLeakTol = 1e-12;
constexpr double kSobolevS = 2.0;
constexpr double kSlopeSlack = 0.2;
constexpr double kPropagationFloor = 1e-8;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GPoint random_point(const GroupModel& m, std::mt19937_64& rng, double zScale, double uScale) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    GPoint x;
    x.z = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) x.z[i] = zScale * U(rng);
    x.u = uScale * U(rng);
    return x;
}

void distance_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    int diverged = 0, pairs = 0;
    for (const auto& [spec, n] : {std::pair{"abelian:2", 100}, std::pair{"heisenberg1", 30}}) {
        const GroupModel m = GroupModel::parse(spec);
        for (int i = 0; i < n; ++i, ++pairs) {
            const GPoint x = random_point(m, rng, 2.0, 1.0), y = random_point(m, rng, 2.0, 1.0);
            ShootingOptions so;
            so.seed = 1000 + pairs;
            const ShootingResult r = shoot_distance_g(m, x, y, so);
            if (!r.converged) {
                ++diverged;
                continue;
            }
            worst = std::max(worst, std::abs(r.length - cc_distance_g(m, x, y)));
        }
    }
    const double secs = seconds_since(t0);
    report(1, "distance vs shooting", worst <= kDistTol && diverged == 0 && secs < kDistSeconds,
           fmt("max |d - d_shoot| = %.3e (tol %.0e) over %d pairs, %d unconverged, %.1f s (limit %.0f s)", worst,
               kDistTol, pairs, diverged, secs, kDistSeconds));
}

void ball_volume() {
    const GroupModel m = GroupModel::abelian(2);
    const double VN = unit_ball_volume_n_exact(2);
    const double pi = std::acos(-1.0);
    double worstMC = 0.0, worstClosed = 0.0;
    std::uint64_t seed = 11;
    for (double r : {0.5, 1.0, 2.0}) {
        const double closed = pi * (std::sinh(2.0 * r) - 2.0 * r);
        worstClosed = std::max(worstClosed, std::abs(ball_volume_g(2, VN, r) / closed - 1.0));
        const MCEstimate mc = mc_ball_volume_g(m, r, kVolumeSamples, seed++);
        worstMC = std::max(worstMC, std::abs(mc.value / closed - 1.0));
    }
    const double r = 0.05;
    const double small = std::abs(ball_volume_g(2, VN, r) / (4.0 / 3.0 * pi * r * r * r) - 1.0);
    report(2, "ball volume", worstMC <= kVolumeMCTol && worstClosed <= 1e-12 && small <= kSmallBallTol,
           fmt("MC rel err %.4f (tol %.2f), formula vs pi(sinh 2r - 2r) %.1e, r=0.05 Euclidean ratio err %.2e (tol %.2f)",
               worstMC, kVolumeMCTol, worstClosed, small, kSmallBallTol));
}

void cz_suite_check() {
    cli::Config cfg;
    const auto rows = cli::cz_suite(cfg, 50, 7);
    int fails = 0, parts = 0;
    std::string first;
    for (const auto& r : rows) {
        parts += r.parts;
        if (!r.ok) {
            ++fails;
            if (first.empty()) first = r.failure;
        }
    }
    const AdmissibilityConstants c = cfg.constants();
    report(3, "CZ decompositions", fails == 0 && rows.size() == 200,
           fmt("%zu decompositions, %d stopping sets, %d failures, kappa0 = %.4g, C2 = %.4g%s%s", rows.size(), parts,
               fails, c.kappa0, c.C2, first.empty() ? "" : ": ", first.c_str()));
}

void constants_check() {
    const ConstantsReport rep = validate_constants(3.5, 1.2, 2.0);
    std::string slack;
    for (const auto& c : rep.checks) slack += fmt(" %s=%.4g", c.name.substr(0, c.name.find(':')).c_str(), c.slack);
    report(4, "admissibility constants", rep.allPass && rep.checks.size() == 7, "slack" + slack);
}

void heat_normalisation() {
    const auto t0 = std::chrono::steady_clock::now();
    const GroupModel m = GroupModel::abelian(2);
    double massErr = 0.0, oracle = 0.0;
    for (double t : {1.0, 2.0, 4.0}) {
        const HeatIntegrals I = heat_integrals(HeatEvaluator(m, t));
        massErr = std::max(massErr, std::abs(I.mass - 1.0));
        oracle = std::max(oracle, I.oracleL1Diff / I.oracleMass);
    }
    const double secs = seconds_since(t0);
    report(5, "heat mass and H^3 oracle", massErr <= kMassTol && oracle < kOracleL1Tol && secs < kHeatSeconds,
           fmt("max |mass - 1| = %.2e (tol %.0e), max rel L1 to oracle = %.2e (tol %.0e), %.1f s", massErr, kMassTol,
               oracle, kOracleL1Tol, secs));
}

void gradient_interval() {
    const GroupModel m = GroupModel::abelian(2);
    double lo = 1e300, hi = 0.0;
    std::string vals;
    for (double t : {1.0, 4.0, 16.0, 64.0}) {
        const double v = grad_l1_norm(HeatEvaluator(m, t)).scaled;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        vals += fmt(" %.4f", v);
    }
    report(6, "scaled gradient norm", hi <= kGradIntervalRatio * lo,
           fmt("sqrt(t)||grad h_t||_1 =%s, max/min = %.4f (limit %.1f)", vals.c_str(), hi / lo, kGradIntervalRatio));
}

void plancherel_cross() {
    const GroupModel m = GroupModel::abelian(2);
    double worst = 0.0;
    std::string vals;
    for (double t : {1.0, 2.0}) {
        const double grid = heat_integrals(HeatEvaluator(m, t)).l2;
        const double dens = kernel_l2_norm(MultiplierProfile::heat(t), 2).exact;
        worst = std::max(worst, std::abs(dens / grid - 1.0));
        vals += fmt(" t=%g: %.8f vs %.8f;", t, dens, grid);
    }
    report(7, "Plancherel vs grid L2", worst <= kPlancherelTol,
           fmt("%s max rel err %.2e (tol %.0e)", vals.c_str(), worst, kPlancherelTol));
}

L1L2Report bank;

void l1_l2_scaling() {
    bank = l1_l2_check({0.5, 1.0, 2.0, 4.0, 8.0}, kBandBankSize);
    const double target = 1.5;  // 3/2 = (Q + 1)/2 at Q = 2
    const bool ok = bank.spread <= kSpreadMax && std::abs(bank.slopeSmall - target) <= kSlopeTol &&
                    std::abs(bank.slopeLarge - target) <= kSlopeTol;
    report(8, "l1/l2 kernel scaling", ok,
           fmt("%zu kernels, spread %.3f (limit %.0f), slopes %.4f (r<=1) and %.4f (r>=1), target %.2f +- %.2f",
               bank.points.size(), bank.spread, kSpreadMax, bank.slopeSmall, bank.slopeLarge, target, kSlopeTol));
}

void hebisch() {
    struct Case {
        const char* name;
        CFn1 f;
    };
    const std::vector<Case> cases = {
        {"psi(l^2)", [](double l) { return Complex{psi_bump(l * l)}; }},
        {"(1-l^2/4)_+^2", [](double l) { return Complex{std::pow(std::max(0.0, 1.0 - l * l / 4.0), 2.0)}; }},
        {"(1-l^2/4)_+^1.75", [](double l) { return Complex{std::pow(std::max(0.0, 1.0 - l * l / 4.0), 1.75)}; }},
    };
    const double slopeLimit = -2.0 * kSobolevS + kSlopeSlack;
    double recon = 0.0, leak = 0.0, slope = -1e300;
    std::string slopes;
    for (const auto& c : cases) {
        const HebischDecomposition d = hebisch_decompose(c.f);
        recon = std::max(recon, d.reconstructionError);
        leak = std::max(leak, d.bandLeak);
        slope = std::max(slope, d.tailSlope);
        slopes += fmt(" %s %.3f;", c.name, d.tailSlope);
    }
    report(9, "band-limited decomposition",
           recon < kReconstructionTol && leak <= kBandLeakTol && slope <= slopeLimit,
           fmt("reconstruction %.2e (tol %.0e), band leak %.2e (tol %.0e), slopes%s limit %.2f", recon,
               kReconstructionTol, leak, kBandLeakTol, slopes.c_str(), slopeLimit));
}

void finite_propagation() {
    report(10, "finite propagation", bank.maxLeak <= kPropagationFloor && !bank.points.empty(),
           fmt("max |phi| on [1.02 r, 2 r] / max |phi| on [0, r] = %.2e over %zu kernels (floor %.0e)", bank.maxLeak,
               bank.points.size(), kPropagationFloor));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void determinism() {
    const auto base = std::filesystem::temp_directory_path() / ("nasolv_accept_" + std::to_string(::getpid()));
    std::vector<std::string> reports;
    int codes = 0;
    for (int run = 0; run < 2; ++run) {
        const auto dir = base / std::to_string(run);
        std::filesystem::remove_all(dir);
        codes |= cli::dispatch(std::vector<std::string>{"verify", "all", "--seed", "7", "--out", dir.string()});
        reports.push_back(slurp(dir / "verify_report.json"));
    }
    std::filesystem::remove_all(base);
    const bool same = reports[0] == reports[1] && !reports[0].empty();
    report(11, "verify all determinism", same && codes == 0,
           fmt("two runs of `verify all --seed 7`: %zu bytes each, %s, exit codes %s", reports[0].size(),
               same ? "byte-identical" : "different", codes == 0 ? "0" : "non-zero"));
}

}  // namespace

int main() {
    distance_oracle();
    ball_volume();
    cz_suite_check();
    constants_check();
    heat_normalisation();
    gradient_interval();
    plancherel_cross();
    l1_l2_scaling();
    hebisch();
    finite_propagation();
    determinism();
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
