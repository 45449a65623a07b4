#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nasolv/group.hpp"

using namespace nasolv;

namespace {

GPoint random_point(const GroupModel& m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    GPoint x;
    x.z = NPoint(m.d);
    for (int i = 0; i < m.d; ++i) x.z[i] = U(rng);
    x.u = U(rng);
    return x;
}

double gap(const GPoint& a, const GPoint& b) {
    double e = std::abs(a.u - b.u);
    for (int i = 0; i < a.z.d; ++i) e = std::max(e, std::abs(a.z[i] - b.z[i]));
    return e;
}

}  // namespace

TEST_CASE("parse accepts the supported models") {
    CHECK(GroupModel::parse("abelian:2").Q == 2);
    CHECK(GroupModel::parse("abelian:5").d == 5);
    const GroupModel h = GroupModel::parse("heisenberg1");
    CHECK(h.Q == 4);
    CHECK(h.d == 3);
    CHECK(h.q == 2);
    CHECK(h.name() == "heisenberg1");
    CHECK_THROWS_AS(GroupModel::parse("abelian:"), std::invalid_argument);
    CHECK_THROWS_AS(GroupModel::parse("abelian:2x"), std::invalid_argument);
    CHECK_THROWS_AS(GroupModel::parse("sl2"), std::invalid_argument);
}

TEST_CASE("group laws hold for every model") {
    std::mt19937_64 rng(3);
    for (const char* spec : {"abelian:2", "abelian:4", "heisenberg1"}) {
        const GroupModel m = GroupModel::parse(spec);
        for (int i = 0; i < 40; ++i) {
            const GPoint x = random_point(m, rng), y = random_point(m, rng), z = random_point(m, rng);
            CHECK(gap(g_multiply(m, g_multiply(m, x, y), z), g_multiply(m, x, g_multiply(m, y, z))) < 1e-11);
            CHECK(gap(g_multiply(m, x, g_inverse(m, x)), g_identity(m)) < 1e-13);
            CHECK(gap(g_multiply(m, g_identity(m), x), x) == 0.0);
            CHECK(modular(m, g_multiply(m, x, y)) == doctest::Approx(modular(m, x) * modular(m, y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("modular function is e^{-Qu}") {
    const GroupModel m = GroupModel::abelian(3);
    GPoint x = g_identity(m);
    x.u = 0.7;
    CHECK(modular(m, x) == doctest::Approx(std::exp(-2.1)));
}

TEST_CASE("dilations are automorphisms of N") {
    std::mt19937_64 rng(5);
    const GroupModel m = GroupModel::heisenberg1();
    for (int i = 0; i < 20; ++i) {
        const NPoint a = random_point(m, rng).z, b = random_point(m, rng).z;
        const NPoint lhs = n_dilate(m, 1.7, n_multiply(m, a, b));
        const NPoint rhs = n_multiply(m, n_dilate(m, 1.7, a), n_dilate(m, 1.7, b));
        for (int k = 0; k < m.d; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12));
    }
}

TEST_CASE("Heisenberg product is the BCH formula") {
    const GroupModel m = GroupModel::heisenberg1();
    const NPoint a{1.0, 0.0, 0.0}, b{0.0, 1.0, 0.0};
    const NPoint ab = n_multiply(m, a, b), ba = n_multiply(m, b, a);
    CHECK(ab[2] - ba[2] == doctest::Approx(1.0));
    CHECK(ab[0] == 1.0);
    CHECK(ab[1] == 1.0);
}

TEST_CASE("horizontal frame at the origin is the standard basis") {
    const GroupModel m = GroupModel::heisenberg1();
    const auto X = horizontal_frame(m, n_zero(m));
    REQUIRE(X.size() == 2);
    CHECK(X[0][0] == 1.0);
    CHECK(X[0][2] == 0.0);
    CHECK(X[1][1] == 1.0);
}
