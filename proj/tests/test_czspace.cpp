#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nasolv/czspace.hpp"
#include "nasolv/metric.hpp"

using namespace nasolv;

namespace {

const AdmissibilityConstants& constants() {
    static const AdmissibilityConstants c = make_constants(3.5, 1.2, 2.0, 2);
    return c;
}

Window unit_window() {
    Window w;
    w.lo = NPoint{0.0, 0.0};
    w.hi = NPoint{1.0, 1.0};
    w.uLo = -12.0;
    w.uHi = -10.0;
    return w;
}

const Carrier& carrier() {
    static const Carrier C = build_carrier(unit_window(), constants());
    return C;
}

double euclid(const NPoint& a, const NPoint& b) {
    double s = 0.0;
    for (int i = 0; i < a.d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("default constants satisfy every constraint") {
    const ConstantsReport r = validate_constants(3.5, 1.2, 2.0);
    CHECK(r.allPass);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.slack >= 0.0, c.name);
    CHECK(r.C2 == doctest::Approx(64.0));
}

TEST_CASE("constants outside the admissible region are rejected") {
    CHECK_FALSE(validate_constants(1.0, 1.2, 2.0).allPass);   // M too small
    CHECK_FALSE(validate_constants(3.5, 0.9, 2.0).allPass);   // r0 <= 1
    CHECK_FALSE(validate_constants(3.5, 1.5, 2.0).allPass);   // r0 >= 2 log 2
}

TEST_CASE("kappa0 dominates C1, C2 and C*") {
    const auto& c = constants();
    CHECK(c.kappa0 >= c.C1);
    CHECK(c.kappa0 >= c.C2);
    CHECK(c.kappa0 >= c.Cstar);
    CHECK(c.C1 > 0.0);
}

TEST_CASE("Euclidean dyadic cubes nest and partition") {
    const DyadicSystem sys = build_dyadic_euclidean(2, NPoint{0.0, 0.0}, NPoint{8.0, 8.0}, -2, 2, 4);
    const DyadicReport r = verify_dyadic(sys, euclid);
    CHECK(r.partition);
    CHECK(r.nested);
    CHECK(r.J == 4);
    CHECK(r.CN <= 2.0);
}

TEST_CASE("cube arithmetic") {
    const Cube c = cube_containing(2, 1, NPoint{3.1, -0.5});
    CHECK(c.side() == 2.0);
    CHECK(c.a[0] == 1);
    CHECK(c.a[1] == -1);
    CHECK(cube_children(2, c).size() == 4);
    for (const Cube& ch : cube_children(2, c)) CHECK(cube_parent(2, ch) == c);
    CHECK(cube_subset(2, cube_children(2, c)[3], c));
    CHECK(cube_volume(2, c) == 4.0);
}

TEST_CASE("Heisenberg nets nest and partition") {
    const GroupModel H = GroupModel::heisenberg1();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<NPoint> pts;
    while (pts.size() < 150) {
        NPoint z{2.0 * U(rng), 2.0 * U(rng), U(rng)};
        if (cc_norm_n(H, z) < 2.0) pts.push_back(z);
    }
    const NMetric d = [&](const NPoint& a, const NPoint& b) { return cc_distance_n(H, a, b); };
    const DyadicReport r = verify_dyadic(build_dyadic_net(pts, d, 2.0, -3, 1), d);
    CHECK(r.partition);
    CHECK(r.nested);
    CHECK(std::isfinite(r.CN));
}

TEST_CASE("children of an admissible set tile it") {
    const auto& c = constants();
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
        const AdmissibleSet R = random_admissible_set(unit_window(), c, rng);
        REQUIRE(is_admissible(R, c));
        const auto ch = children(R, c);
        REQUIRE(ch.size() >= 2);
        double total = 0.0;
        for (std::size_t a = 0; a < ch.size(); ++a) {
            CHECK(set_subset(2, ch[a], R));
            CHECK(is_admissible(ch[a], c));
            total += ch[a].measure(2);
            for (std::size_t b = a + 1; b < ch.size(); ++b) CHECK(sets_disjoint(2, ch[a], ch[b]));
        }
        CHECK(total == doctest::Approx(R.measure(2)).epsilon(1e-12));
    }
}

TEST_CASE("big quasi-partition covers the window") {
    const QuasiPartition P = big_quasi_partition(10.0, unit_window(), constants());
    CHECK(P.coveredFraction == doctest::Approx(1.0));
    for (const auto& R : P.sets) {
        CHECK(R.kind == SetKind::Big);
        CHECK(R.measure(2) > 10.0);
    }
}

TEST_CASE("ball inclusions, enlargement and condition C") {
    const auto& c = constants();
    const InclusionReport inc = check_ball_inclusions(c, 40, 10, 3);
    CHECK(inc.failSmallBox + inc.failBigBox + inc.failOuterBox + inc.failInnerBox + inc.failSetInBall == 0);
    const CstarReport cs = measure_Cstar(unit_window(), c, 20, 1000, 5);
    CHECK(cs.exceed == 0);
    const ConditionCReport cc = check_condition_C(unit_window(), c, 50, 9);
    CHECK(cc.nestingFailures == 0);
    CHECK(cc.containmentFailures == 0);
    CHECK(cc.admissibilityFailures == 0);
}

TEST_CASE("CZ decomposition of random functions") {
    const Carrier& C = carrier();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 8; ++i) {
        const DiscretizedFunction f = random_function(C, i, rng);
        const double base = f.l1() / C.windowMeasure;
        for (double a : {0.5, 2.0}) {
            const CZDecomposition d = cz_decompose(f, a * base);
            const CZCheck chk = verify_cz(d, constants());
            CHECK_MESSAGE(chk.ok(), chk.failure);
            CHECK(d.diag.reconstruction < 1e-10);
            CHECK(d.diag.gBound <= constants().C2 * d.alpha);
            CHECK(d.diag.sumL1 <= 2.0 * f.l1() * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("a single spike becomes one bad part with zero mean") {
    const Carrier& C = carrier();
    DiscretizedFunction f = zero_function(C);
    std::size_t leaf = 0;
    while (!C.inWindow[leaf]) ++leaf;
    f.values[leaf] = 1.0 / C.weights[leaf];
    const CZDecomposition d = cz_decompose(f, 2.0 / C.windowMeasure);
    REQUIRE(!d.parts.empty());
    for (const auto& p : d.parts) CHECK(std::abs(p.integral) < 1e-12);
    CHECK(verify_cz(d, constants()).ok());
}

TEST_CASE("height below the mean on a partition set is rejected") {
    const Carrier& C = carrier();
    std::mt19937_64 rng(1);
    const DiscretizedFunction f = random_function(C, 0, rng);
    CHECK_THROWS_AS(cz_decompose(f, 1e-6 * f.l1() / C.windowMeasure), std::invalid_argument);
}

TEST_CASE("maximal function dominates |f|") {
    const Carrier& C = carrier();
    std::mt19937_64 rng(11);
    const DiscretizedFunction f = random_function(C, 3, rng);
    const auto Mf = maximal_operator(f);
    for (std::size_t i = 0; i < Mf.size(); ++i) CHECK(Mf[i] >= std::abs(f.values[i]) * (1.0 - 1e-12));
}
