#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nasolv/heat.hpp"
#include "nasolv/multiplier.hpp"

using namespace nasolv;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("psi is a dyadic partition of unity supported in [1/2, 2]") {
    CHECK(psi_bump(0.49) == 0.0);
    CHECK(psi_bump(2.01) == 0.0);
    CHECK(psi_bump(1.0) == doctest::Approx(1.0));
    for (double l : {0.03, 0.7, 1.3, 5.0, 123.0}) {
        double s = 0.0;
        for (int j = -12; j <= 12; ++j) s += psi_bump(std::ldexp(l, j));
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("Plancherel density has the expected small and large s behaviour") {
    CHECK(plancherel_density(2, 3.0) == doctest::Approx(9.0));
    CHECK(plancherel_density(4, 20.0) / std::pow(20.0, 4) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(plancherel_density(3, 50.0) / std::pow(50.0, 3) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(plancherel_density(3, 1e-3) / 1e-6 > 0.0);
    CHECK(plancherel_constant(2) == doctest::Approx(1.0 / (4.0 * kPi * kPi)));
}

TEST_CASE("kernel L2 norm of e^{-t Delta} matches the Gaussian moment") {
    for (double t : {0.5, 1.0, 2.0}) {
        const double ref = std::sqrt(std::sqrt(kPi) / (2.0 * std::pow(2.0 * t, 1.5)) / (4.0 * kPi * kPi));
        const KernelL2Report r = kernel_l2_norm(MultiplierProfile::heat(t), 2);
        CHECK(r.exact == doctest::Approx(ref).epsilon(1e-9));
        // Q = 2: the comparison quantity is a fixed multiple of the exact norm
        CHECK(r.exact / r.comparison == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-9));
    }
    CHECK(kernel_l2_norm(MultiplierProfile::zero(), 2).exact == 0.0);
    CHECK_THROWS_AS(kernel_l2_norm(MultiplierProfile::one(), 2), ConvergenceError);
}

TEST_CASE("calibrated Plancherel constant reproduces ||h_1||_2 for Q = 3") {
    const double l2 = heat_integrals(HeatEvaluator(GroupModel::abelian(3), 1.0)).l2;
    CHECK(kernel_l2_norm(MultiplierProfile::heat(1.0), 3).exact == doctest::Approx(l2).epsilon(1e-6));
}

TEST_CASE("spherical synthesis of e^{-t Delta} is the H^3 heat kernel") {
    for (double t : {0.25, 1.0, 4.0}) {
        SphericalOptions so;
        so.band = 13.0 * std::sqrt(t) + 10.0;
        const std::vector<double> rg = {0.0, 0.5, 1.0, 2.0, 4.0, 6.0};
        const RadialKernel k = spherical_kernel_h3(MultiplierProfile::heat(t), rg, so);
        for (std::size_t i = 0; i < rg.size(); ++i)
            CHECK(k.phi[i].real() == doctest::Approx(h3_profile(t, rg[i])).epsilon(1e-8));
    }
}

TEST_CASE("band-limited kernels are supported in the ball of radius r") {
    for (int m = 0; m < kBandBankSize; ++m) {
        const MultiplierProfile P = band_limited_profile(m, 2.0);
        CHECK(P.f(0.0).real() == doctest::Approx(m == 3 ? 2.0 : (m == 4 ? 0.5 : 1.0)));
        const SphericalSynthesizer syn(P, {.rMax = 4.0});
        const double peak = std::abs(syn.phi(0.0));
        for (double r : {2.05, 2.5, 3.0, 3.9}) CHECK(std::abs(syn.phi(r)) < 1e-10 * peak);
    }
    CHECK_THROWS_AS(band_limited_profile(kBandBankSize, 1.0), std::invalid_argument);
}

TEST_CASE("l1/l2 ratio is scale-covariant on the band bank") {
    const L1L2Report r = l1_l2_check({0.5, 1.0, 2.0}, 2);
    CHECK(r.spread <= 3.0);
    CHECK(r.slopeSmall == doctest::Approx(1.5).epsilon(0.1));
    CHECK(r.slopeLarge == doctest::Approx(1.5).epsilon(0.1));
    CHECK(r.maxL2Mismatch < 1e-8);
}

TEST_CASE("Sobolev norm of a Gaussian") {
    // g = e^{-x^2/2}: |g^|^2 = 2 pi e^{-w^2}; s = 0 gives ||g||_2^2 = sqrt(pi)
    auto g = [](double x) { return Complex{std::exp(-0.5 * x * x)}; };
    CHECK(sobolev_norm(g, 0.0) == doctest::Approx(std::sqrt(std::sqrt(kPi))).epsilon(1e-10));
    // s = 1 adds int w^2 e^{-w^2} dw / 2 pi * 2 pi = sqrt(pi) / 2
    CHECK(sobolev_norm(g, 1.0) == doctest::Approx(std::sqrt(1.5 * std::sqrt(kPi))).epsilon(1e-10));
}

TEST_CASE("band-limited decomposition reconstructs and respects the bands") {
    const HebischDecomposition d = hebisch_decompose([](double l) { return Complex{psi_bump(l * l)}; });
    CHECK(d.reconstructionError < 1e-12);
    CHECK(d.bandLeak < 1e-14);
    CHECK(d.tailSlope < -3.8);
    CHECK(d.pieces.size() == 13);
    auto rough = [](double l) { return Complex{std::pow(std::max(0.0, 1.0 - l * l / 4.0), 1.75)}; };
    const HebischDecomposition r = hebisch_decompose(rough);
    CHECK(r.reconstructionError < 1e-12);
    CHECK(r.tailSlope < -3.8);
    HebischOptions below;
    below.Lmax = 10;  // top band under the grid Nyquist frequency: the remainder is reported, not absorbed
    CHECK(hebisch_decompose(rough, below).reconstructionError > 1e-8);
    CHECK_THROWS_AS(hebisch_decompose([](double l) { return Complex{l}; }), std::invalid_argument);
    CHECK_THROWS_AS(hebisch_decompose([](double l) { return Complex{std::exp(-l * l)}; }), std::invalid_argument);
}

TEST_CASE("Mihlin-Hormander norms") {
    const double psiNorm = sobolev_norm([](double l) { return Complex{psi_bump(l)}; }, 2.0);
    CHECK(mh_norm(MultiplierProfile::one(), 2.0, MHRegime::Low).norm == doctest::Approx(psiNorm).epsilon(1e-14));
    CHECK(mh_norm(MultiplierProfile::one(), 2.0, MHRegime::High).norm == doctest::Approx(psiNorm).epsilon(1e-14));
    // dilation by 4 shifts the quarter-step window by 8
    const MultiplierProfile F = MultiplierProfile::imag_power(0.5);
    CHECK(mh_norm_range(dilate(F, 4.0), 2.0, -10, 2).norm == mh_norm_range(F, 2.0, -2, 10).norm);
    // |lambda^{i g}| = 1 but the derivatives grow with g
    CHECK(mh_norm(MultiplierProfile::imag_power(4.0), 2.0, MHRegime::High).norm > psiNorm);
}

TEST_CASE("weighted kernel bounds for psi") {
    const WeightedBoundReport a = weighted_kernel_bounds(MultiplierProfile::psi(), 1.0, 0.1);
    CHECK(a.tail < 1e-10);
    CHECK(a.l1 <= a.weightedL1);
    CHECK(a.weightedL1 <= a.decompositionBound);
    CHECK_THROWS_AS(weighted_kernel_bounds(MultiplierProfile::heat(1.0), 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("dyadic pieces of a homogeneous multiplier have equal ratios") {
    const DyadicDemoReport r = dyadic_multiplier_demo(MultiplierProfile::imag_power(2.0), 2.0, 2.0, -2, 2);
    REQUIRE(r.pieces.size() == 5);
    for (const auto& p : r.pieces) CHECK(p.ratio == doctest::Approx(r.pieces[0].ratio).epsilon(1e-6));
}

TEST_CASE("translation in u is controlled by the gradient") {
    const TranslationReport r = translation_check({1.0, 4.0}, 0.05);
    for (const auto& p : r.points) CHECK(p.diff <= p.gradBound);
}

TEST_CASE("profile parsing") {
    CHECK(MultiplierProfile::parse("exp:2").F(1.0).real() == doctest::Approx(std::exp(-2.0)));
    CHECK(MultiplierProfile::parse("exp").F(1.0).real() == doctest::Approx(std::exp(-1.0)));
    CHECK(std::abs(MultiplierProfile::parse("imagpower:1").F(3.0)) == doctest::Approx(1.0));
    CHECK(MultiplierProfile::parse("band2:3").bandLimit == 3.0);
    CHECK_THROWS_AS(MultiplierProfile::parse("exp:x"), std::invalid_argument);
    CHECK_THROWS_AS(MultiplierProfile::parse("nonesuch"), std::invalid_argument);
    const MultiplierProfile s = sampled(MultiplierProfile::heat(1.0), 4.0, 0.01);
    CHECK(s.F(1.005).real() == doctest::Approx(std::exp(-1.005)).epsilon(1e-4));
    CHECK(s.F(5.0) == Complex{});
}
