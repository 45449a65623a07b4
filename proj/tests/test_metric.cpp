#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nasolv/metric.hpp"

using namespace nasolv;

namespace {

GPoint pt(std::initializer_list<double> z, double u) {
    GPoint x;
    x.z = NPoint(z);
    x.u = u;
    return x;
}

GPoint random_point(const GroupModel& m, std::mt19937_64& rng, double s) {
    std::uniform_real_distribution<double> U(-s, s);
    GPoint x;
    x.z = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) x.z[i] = U(rng);
    x.u = U(rng);
    return x;
}

// Hyperbolic upper half-space distance, written independently of the library.
double half_space_distance(const GPoint& x, const GPoint& y) {
    double dz2 = 0.0;
    for (int i = 0; i < x.z.d; ++i) dz2 += (x.z[i] - y.z[i]) * (x.z[i] - y.z[i]);
    const double a = std::exp(x.u), b = std::exp(y.u);
    return std::acosh(1.0 + (dz2 + (a - b) * (a - b)) / (2.0 * a * b));
}

}  // namespace

TEST_CASE("distance from the origin to (2, 0, 0) is arccosh 3") {
    const GroupModel m = GroupModel::abelian(2);
    CHECK(cc_distance_g(m, pt({0, 0}, 0), pt({2, 0}, 0)) == doctest::Approx(std::acosh(3.0)).epsilon(1e-14));
}

TEST_CASE("abelian distance is the hyperbolic distance") {
    const GroupModel m = GroupModel::abelian(3);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const GPoint x = random_point(m, rng, 4.0), y = random_point(m, rng, 4.0);
        CHECK(cc_distance_g(m, x, y) == doctest::Approx(half_space_distance(x, y)).epsilon(1e-11));
    }
}

TEST_CASE("distance is a left-invariant metric") {
    std::mt19937_64 rng(2);
    for (const char* spec : {"abelian:2", "heisenberg1"}) {
        const GroupModel m = GroupModel::parse(spec);
        for (int i = 0; i < 30; ++i) {
            const GPoint x = random_point(m, rng, 1.5), y = random_point(m, rng, 1.5), g = random_point(m, rng, 1.5);
            const double d = cc_distance_g(m, x, y);
            CHECK(d == doctest::Approx(cc_distance_g(m, y, x)).epsilon(1e-9));
            CHECK(d == doctest::Approx(cc_distance_g(m, g_multiply(m, g, x), g_multiply(m, g, y))).epsilon(1e-8));
            CHECK(d <= cc_distance_g(m, x, g) + cc_distance_g(m, g, y) + 1e-9);
        }
    }
}

TEST_CASE("Heisenberg norm is homogeneous") {
    const GroupModel m = GroupModel::heisenberg1();
    const NPoint z{0.3, -0.4, 0.7};
    CHECK(cc_norm_n(m, n_dilate(m, 2.5, z)) == doctest::Approx(2.5 * cc_norm_n(m, z)).epsilon(1e-10));
    // vertical axis: |(0, 0, t)| = sqrt(4 pi |t|)
    CHECK(cc_norm_n(m, NPoint{0.0, 0.0, 1.0}) == doctest::Approx(std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("shooting oracle reproduces the closed-form distance") {
    std::mt19937_64 rng(4);
    for (const char* spec : {"abelian:2", "heisenberg1"}) {
        const GroupModel m = GroupModel::parse(spec);
        for (int i = 0; i < 4; ++i) {
            const GPoint x = random_point(m, rng, 1.0), y = random_point(m, rng, 1.0);
            ShootingOptions so;
            so.seed = 10 + i;
            const ShootingResult r = shoot_distance_g(m, x, y, so);
            REQUIRE(r.converged);
            CHECK(r.length == doctest::Approx(cc_distance_g(m, x, y)).epsilon(1e-6));
        }
    }
}

TEST_CASE("Hamiltonian is conserved along the cogeodesic flow") {
    const GroupModel m = GroupModel::heisenberg1();
    HJStateG s;
    s.z = NPoint{0.1, 0.2, -0.3};
    s.u = 0.4;
    s.zeta = NPoint{0.5, -0.2, 0.9};
    s.nu = 0.3;
    const double h0 = hamiltonian_g(m, s);
    for (double t : {0.5, 1.0, 2.0}) CHECK(hamiltonian_g(m, hj_flow_g(m, s, t)) == doctest::Approx(h0).epsilon(1e-10));
}

TEST_CASE("acosh1p is accurate near zero") {
    CHECK(acosh1p(1e-20) == doctest::Approx(std::sqrt(2e-20)).epsilon(1e-12));
    CHECK(acosh1p(2.0) == doctest::Approx(std::acosh(3.0)));
}

TEST_CASE("ball volume matches pi (sinh 2r - 2r) and the Euclidean limit") {
    const double VN = unit_ball_volume_n_exact(2);
    CHECK(VN == doctest::Approx(std::numbers::pi));
    for (double r : {0.1, 0.5, 1.0, 3.0})
        CHECK(ball_volume_g(2, VN, r) == doctest::Approx(std::numbers::pi * (std::sinh(2 * r) - 2 * r)).epsilon(1e-12));
    const double r = 1e-3;
    CHECK(ball_volume_g(2, VN, r) == doctest::Approx(4.0 / 3.0 * std::numbers::pi * r * r * r).epsilon(1e-5));
    CHECK(unit_ball_volume_n_exact(3) == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
}

TEST_CASE("Monte Carlo volumes agree with the exact values") {
    const GroupModel m = GroupModel::abelian(2);
    const MCEstimate mc = mc_ball_volume_g(m, 1.0, 200000, 9);
    const double exact = ball_volume_g(2, std::numbers::pi, 1.0);
    CHECK(std::abs(mc.value - exact) < 5.0 * mc.stderr_);
    const MCEstimate vn = mc_unit_ball_volume_n(m, 200000, 9);
    CHECK(std::abs(vn.value - std::numbers::pi) < 5.0 * vn.stderr_);
}

TEST_CASE("Monte Carlo is identical in serial and parallel") {
    const GroupModel m = GroupModel::heisenberg1();
    const MCEstimate a = mc_ball_volume_g(m, 0.8, 50000, 3, Exec::Serial);
    const MCEstimate b = mc_ball_volume_g(m, 0.8, 50000, 3, Exec::Parallel);
    CHECK(a.value == b.value);
    CHECK(a.hits == b.hits);
}

TEST_CASE("radial integral of the indicator is the ball volume") {
    const double VN = std::numbers::pi;
    RadialProfile ind{[](double r) { return r < 1.5 ? 1.0 : 0.0; }, 1.5};
    CHECK(radial_integral_g(2, VN, ind) == doctest::Approx(ball_volume_g(2, VN, 1.5)).epsilon(1e-8));
    RadialProfile gauss{[](double r) { return std::exp(-r * r); }};
    CHECK(radial_integral_g(2, VN, gauss, ModularPower::One) ==
          doctest::Approx(radial_integral_g(2, VN, gauss, ModularPower::Zero)).epsilon(1e-9));
    CHECK(radial_integral_g(2, VN, gauss, ModularPower::Half) ==
          doctest::Approx(radial_integral_direct(2, VN, gauss, ModularPower::Half, 8.0)).epsilon(1e-6));
}
