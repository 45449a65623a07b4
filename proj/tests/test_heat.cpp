#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nasolv/heat.hpp"

using namespace nasolv;

namespace {

const HeatEvaluator& h1() {
    static const HeatEvaluator h(GroupModel::abelian(2), 1.0);
    return h;
}

GPoint pt(double z0, double z1, double u) {
    GPoint x;
    x.z = NPoint{z0, z1};
    x.u = u;
    return x;
}

// (4 pi t)^{-3/2} (rho / sinh rho) e^{-rho^2/4t} e^{-u}
double h3_reference(double t, const GPoint& x) {
    const double c = std::cosh(x.u) + std::exp(-x.u) * (x.z[0] * x.z[0] + x.z[1] * x.z[1]) / 2.0;
    const double rho = std::acosh(c);
    const double ratio = rho < 1e-8 ? 1.0 : rho / std::sinh(rho);
    return std::pow(4.0 * std::numbers::pi * t, -1.5) * ratio * std::exp(-rho * rho / (4.0 * t)) * std::exp(-x.u);
}

}  // namespace

TEST_CASE("subordinated kernel matches the H^3 closed form") {
    for (const GPoint& x : {pt(0, 0, 0), pt(1, 0, 0.5), pt(-0.3, 2.0, -1.0), pt(0.2, 0.2, 2.0)})
        CHECK(h1().kernel(x) == doctest::Approx(h3_reference(1.0, x)).epsilon(1e-7));
    CHECK(h3_profile(1.0, 0.0) == doctest::Approx(std::pow(4.0 * std::numbers::pi, -1.5)));
}

TEST_CASE("tabulated Psi_t agrees with direct evaluation and is non-negative") {
    const auto& s = h1().s_grid();
    const auto& psi = h1().psi_table();
    double peak = 0.0;
    for (double v : psi) peak = std::max(peak, v);
    for (double v : psi) CHECK(v >= -1e-15 * peak);
    for (std::size_t i = s.size() / 4; i < s.size(); i += s.size() / 8)
        CHECK(psi[i] == doctest::Approx(h1().psi(std::exp(s[i]))).epsilon(1e-12));
}

TEST_CASE("heat kernel has unit mass and matches the oracle in L1") {
    for (double t : {0.5, 1.0, 4.0}) {
        const HeatIntegrals I = heat_integrals(HeatEvaluator(GroupModel::abelian(2), t));
        CHECK(I.mass == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(I.oracleL1Diff / I.oracleMass < 1e-6);
    }
    const HeatIntegrals I3 = heat_integrals(HeatEvaluator(GroupModel::abelian(3), 1.0));
    CHECK(I3.mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("L2 norm matches the spectral formula") {
    // ||h_t||_2^2 = (1 / 4 pi^2) int_R e^{-2 t s^2} s^2 ds = (1 / 4 pi^2) sqrt(pi) / (2 (2t)^{3/2})
    for (double t : {1.0, 2.0}) {
        const double ref = std::sqrt(std::sqrt(std::numbers::pi) / (2.0 * std::pow(2.0 * t, 1.5)) /
                                     (4.0 * std::numbers::pi * std::numbers::pi));
        CHECK(heat_integrals(HeatEvaluator(GroupModel::abelian(2), t)).l2 == doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("semigroup property") {
    const HeatEvaluator h2(GroupModel::abelian(2), 2.0);
    const SemigroupReport r = semigroup_check(h1(), h2);
    CHECK(r.l1Target == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.l1Diff < 1e-4);
}

TEST_CASE("gradient agrees with finite differences") {
    const GradientFDReport r = gradient_fd_check(h1(), 10, 3);
    CHECK(r.maxRelErr < 1e-6);
    CHECK(r.maxOddAtZero < 1e-12);
}

TEST_CASE("sqrt(t) times the gradient norm stays in [m, 2m]") {
    double lo = 1e300, hi = 0.0;
    for (double t : {1.0, 4.0, 16.0, 64.0}) {
        const GradNormReport g = grad_l1_norm(HeatEvaluator(GroupModel::abelian(2), t));
        CHECK(g.scaled == doctest::Approx(std::sqrt(t) * g.norm));
        lo = std::min(lo, g.scaled);
        hi = std::max(hi, g.scaled);
    }
    CHECK(hi <= 2.0 * lo);
}

TEST_CASE("h_t(x) <= m(x)^{1/2} h_t(0)") {
    const ModularBoundReport r = modular_bound_check(h1(), 100, 4);
    CHECK(r.violations == 0);
    CHECK(r.maxRatio <= 1.0);
}

TEST_CASE("serial and parallel integrals are bit-identical") {
    const HeatIntegrals a = heat_integrals(h1(), Exec::Serial);
    const HeatIntegrals b = heat_integrals(h1(), Exec::Parallel);
    CHECK(a.mass == b.mass);
    CHECK(a.gradL1 == b.gradL1);
}

TEST_CASE("inner integral: reduced form and envelope constants") {
    const double C[] = {4.0, 5.1, 4.0};
    const double alpha[] = {0.0, 0.5, 1.0};
    for (int a = 0; a < 3; ++a)
        for (double th : {0.0, 1.0, 2.0, 4.0}) {
            const double n = inner_integral_numeric(alpha[a], th);
            CHECK(n == doctest::Approx(inner_integral_reduced(alpha[a], th)).epsilon(1e-8));
            CHECK(n <= C[a] * inner_integral_envelope(alpha[a], th));
        }
    // alpha = 0, theta = 0: int_R Gamma(1) / (1 + cosh u) du = 2
    CHECK(inner_integral_reduced(0.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("radial profile decays at least exponentially") {
    const EnvelopeReport e = gaussian_envelope_check(HeatEvaluator(GroupModel::abelian(2), 0.25), 4.0, 1.0);
    CHECK(std::isfinite(e.logC));
    CHECK(e.fittedRate > 1.0);
}

TEST_CASE("moments beyond the tabulated range throw") {
    CHECK_THROWS_AS(h1().moment(0, 10.0 * h1().rho_max()), ConvergenceError);
}
