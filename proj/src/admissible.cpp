#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <stdexcept>

#include "nasolv/czspace.hpp"
#include "nasolv/metric.hpp"

namespace nasolv {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kAdmTol = 1e-12;

ConstraintCheck lt(const std::string& name, double lhs, double rhs, bool strict) {
    ConstraintCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.pass = strict ? lhs < rhs : lhs <= rhs;
    return c;
}

// log(e^a + e^b)
double logaddexp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - kLog2;
}

// distance from the origin of G to (z, u) with |z| = s and u = -r (the far corner of the box)
double corner_distance(double r, double logS) {
    // cosh(rho) = cosh r + e^{r} s^2 / 2
    const double lx = logaddexp(log_cosh(r), r + 2.0 * logS - kLog2);
    if (lx > 30.0) return lx + kLog2;
    return acosh1p(std::expm1(lx));
}

}  // namespace

double AdmissibilityConstants::log_eta() const { return std::log(eta); }

ConstantsReport validate_constants(double M, double r0, double eta, double CN, int Q) {
    ConstantsReport rep;
    const double le = std::log(eta);
    rep.checks.push_back(lt("c1a: 1 < r0", 1.0, r0, true));
    rep.checks.push_back(lt("c1b: r0 < 2 log 2", r0, 2.0 * kLog2, true));
    rep.checks.push_back(lt("c2: M > 1", 1.0, M, true));
    // log form of e^{r0} e^{2M} r0 <= e^{2M r0}
    rep.checks.push_back(lt("c3: r0 + 2M + log r0 <= 2M r0", r0 + 2.0 * M + std::log(r0), 2.0 * M * r0, false));
    rep.checks.push_back(lt("c4: log eta - log 2 + r0/2 < 6M", le - kLog2 + 0.5 * r0, 6.0 * M, true));
    // inf of r e^{-r/2} over (r0, 2 r0]: the function is unimodal with peak at r = 2
    const double inf = std::min(r0 * std::exp(-0.5 * r0), 2.0 * r0 * std::exp(-r0));
    rep.checks.push_back(lt("c5: log eta + 4M r0 < log 2 + 8M + log min r e^{-r/2}", le + 4.0 * M * r0,
                            kLog2 + 8.0 * M + std::log(inf), true));
    rep.checks.push_back(lt("c6: log eta < log 4 + (4M - 1) r0", le, 2.0 * kLog2 + (4.0 * M - 1.0) * r0, true));
    rep.C2 = std::max(2.0, std::pow(CN * CN * eta, Q));
    rep.allPass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const ConstraintCheck& c) { return c.pass; });
    return rep;
}

C1Report measure_C1(const AdmissibilityConstants& c) {
    C1Report rep;
    const double logK = std::log(4.0 * c.CN) + 8.0 * c.M;
    for (int i = 0; i <= 2400; ++i) {
        const double r = std::pow(10.0, -20.0 + i * 0.01);
        rep.fromSmall = std::max(rep.fromSmall, corner_distance(r, logK + std::log(r)) / r);
        if (r > c.r0)
            rep.fromBig = std::max(rep.fromBig, corner_distance(r, std::log(4.0 * c.CN) + 8.0 * c.M * r) / r);
        // sup of |z| over B(0, r) is sinh r
        if (r <= c.r0) rep.fromInner = std::max(rep.fromInner, std::sinh(r) / r);
    }
    rep.fromInner = std::max(rep.fromInner, std::sinh(c.r0) / c.r0);
    rep.C1 = (1.0 + 1e-9) * std::max({rep.fromSmall, rep.fromBig, rep.fromInner});
    return rep;
}

AdmissibilityConstants make_constants(double M, double r0, double eta, int Q, double Cstar) {
    if (eta != 2.0) throw std::invalid_argument("make_constants: the Euclidean dyadic system needs eta = 2");
    AdmissibilityConstants c;
    c.M = M;
    c.r0 = r0;
    c.eta = eta;
    c.Q = Q;
    c.CN = std::max(2.0, std::sqrt(static_cast<double>(Q)));
    c.J = 1 << Q;
    c.C2 = validate_constants(M, r0, eta, c.CN, Q).C2;
    c.C1 = measure_C1(c).C1;
    c.Cstar = Cstar;
    c.kappa0 = std::max({c.C1, c.C2, c.Cstar});
    return c;
}

double AdmissibleSet::measure(int Q) const { return cube_volume(Q, cube) * 2.0 * r; }

bool AdmissibleSet::contains(int Q, const GPoint& x) const {
    return x.u >= u0 - r && x.u < u0 + r && cube_contains(Q, cube, x.z);
}

AdmissibleSet make_set(const Cube& cube, double u0, double r, const AdmissibilityConstants& c) {
    return AdmissibleSet{cube, u0, r, r <= c.r0 ? SetKind::Small : SetKind::Big};
}

namespace {

bool admissible_at(int k, double u0, double r, const AdmissibilityConstants& c) {
    const double klog = k * c.log_eta();
    double lo, hi;
    if (r <= c.r0) {
        lo = std::log(r) + 2.0 * c.M + u0;
        hi = std::log(4.0) + std::log(r) + 8.0 * c.M + u0;
    } else {
        lo = 2.0 * c.M * r + u0;
        hi = std::log(4.0) + 8.0 * c.M * r + u0;
    }
    return lo <= klog + kAdmTol * std::max(1.0, std::abs(klog)) && klog < hi;
}

}  // namespace

bool is_admissible(const AdmissibleSet& R, const AdmissibilityConstants& c) {
    if (!(R.r > 0.0)) return false;
    if ((R.kind == SetKind::Small) != (R.r <= c.r0)) return false;
    return admissible_at(R.cube.k, R.u0, R.r, c);
}

bool is_strongly_admissible(const AdmissibleSet& R, const AdmissibilityConstants& c) {
    return is_admissible(R, c) && admissible_at(R.cube.k - 1, R.u0, R.r, c);
}

std::vector<AdmissibleSet> children(const AdmissibleSet& R, const AdmissibilityConstants& c) {
    if (!is_admissible(R, c)) throw std::invalid_argument("children: set is not admissible");
    std::vector<AdmissibleSet> out;
    if (is_strongly_admissible(R, c)) {
        for (const Cube& q : cube_children(c.Q, R.cube)) out.push_back(AdmissibleSet{q, R.u0, R.r, R.kind});
    } else {
        const double h = 0.5 * R.r;
        out.push_back(make_set(R.cube, R.u0 - h, h, c));
        out.push_back(make_set(R.cube, R.u0 + h, h, c));
    }
    return out;
}

bool set_subset(int Q, const AdmissibleSet& a, const AdmissibleSet& b) {
    const double eps = 1e-12 * std::max(1.0, std::abs(b.u0) + b.r);
    return cube_subset(Q, a.cube, b.cube) && a.u0 - a.r >= b.u0 - b.r - eps && a.u0 + a.r <= b.u0 + b.r + eps;
}

bool sets_disjoint(int Q, const AdmissibleSet& a, const AdmissibleSet& b) {
    const double eps = 1e-12 * std::max(1.0, std::abs(b.u0) + b.r);
    if (a.u0 + a.r <= b.u0 - b.r + eps || b.u0 + b.r <= a.u0 - a.r + eps) return true;
    return !cube_subset(Q, a.cube, b.cube) && !cube_subset(Q, b.cube, a.cube);
}

QuasiPartition big_quasi_partition(double sigma, const Window& w, const AdmissibilityConstants& c, double stripR) {
    if (!(sigma > 0.0)) throw std::invalid_argument("big_quasi_partition: sigma must be positive");
    if (!(stripR > c.r0)) throw std::invalid_argument("big_quasi_partition: strip half-width must exceed r0");
    const int Q = c.Q;
    QuasiPartition P;
    double covered = 0.0;
    for (double start = w.uLo; start < w.uHi; start += 2.0 * stripR) {
        PartitionStrip s;
        s.r = stripR;
        s.u0 = start + stripR;
        s.k = static_cast<int>(std::ceil((2.0 * c.M * s.r + s.u0) / c.log_eta() - kAdmTol));
        while (std::ldexp(1.0, s.k * Q) * 2.0 * s.r <= sigma) ++s.k;
        if (!admissible_at(s.k, s.u0, s.r, c))
            throw std::runtime_error("big_quasi_partition: no admissible level gives measure above sigma");
        P.strips.push_back(s);
        const Cube c0 = cube_containing(Q, s.k, w.lo);
        NPoint top(Q);
        for (int i = 0; i < Q; ++i) top[i] = std::nextafter(w.hi[i], -INFINITY);
        const Cube c1 = cube_containing(Q, s.k, top);
        std::array<std::int64_t, kMaxDim> idx = c0.a;
        const double uOver = std::min(s.u0 + s.r, w.uHi) - std::max(s.u0 - s.r, w.uLo);
        while (true) {
            Cube q;
            q.k = s.k;
            q.a = idx;
            P.sets.push_back(AdmissibleSet{q, s.u0, s.r, SetKind::Big});
            double over = uOver;
            for (int i = 0; i < Q; ++i) over *= std::max(0.0, std::min(q.hi(i), w.hi[i]) - std::max(q.lo(i), w.lo[i]));
            covered += over;
            int i = 0;
            for (; i < Q; ++i) {
                if (idx[i] < c1.a[i]) {
                    ++idx[i];
                    break;
                }
                idx[i] = c0.a[i];
            }
            if (i == Q) break;
        }
    }
    P.coveredFraction = covered / w.measure();
    return P;
}

AdmissibleSet random_admissible_set(const Window& w, const AdmissibilityConstants& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GPoint x{NPoint(c.Q), w.uLo + (w.uHi - w.uLo) * U(rng)};
    for (int i = 0; i < c.Q; ++i) x.z[i] = w.lo[i] + (w.hi[i] - w.lo[i]) * U(rng);
    const bool small = U(rng) < 0.5;
    const double r = small ? c.r0 * std::pow(1e-2, U(rng)) : c.r0 + (3.0 - c.r0) * (1.0 - U(rng));
    const double le = c.log_eta();
    const double lo = small ? std::log(r) + 2.0 * c.M + x.u : 2.0 * c.M * r + x.u;
    const double hi = std::log(4.0) + (small ? std::log(r) + 8.0 * c.M : 8.0 * c.M * r) + x.u;
    const int kLo = static_cast<int>(std::ceil(lo / le));
    int kHi = static_cast<int>(std::ceil(hi / le)) - 1;
    kHi = std::max(kLo, kHi);
    const int k = kLo + static_cast<int>(std::floor(U(rng) * (kHi - kLo + 1)));
    return make_set(cube_containing(c.Q, std::min(k, kHi), x.z), x.u, r, c);
}

namespace {

// Uniform point of the Euclidean ball of radius R in R^Q.
NPoint sample_ball(int Q, double R, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    NPoint z(Q);
    double n2 = 0.0;
    for (int i = 0; i < Q; ++i) {
        z[i] = g(rng);
        n2 += z[i] * z[i];
    }
    const double s = R * std::pow(U(rng), 1.0 / Q) / std::sqrt(n2);
    for (int i = 0; i < Q; ++i) z[i] *= s;
    return z;
}

double znorm(int Q, const NPoint& z) {
    double s = 0.0;
    for (int i = 0; i < Q; ++i) s += z[i] * z[i];
    return std::sqrt(s);
}

// Origin distance via the closed form with |z| = s, stable for huge s.
double origin_distance(double s, double u) {
    if (s == 0.0) return std::abs(u);
    const double lx = logaddexp(log_cosh(u), -u + 2.0 * std::log(s) - kLog2);
    if (lx > 30.0) return lx + kLog2;
    return acosh1p(2.0 * std::pow(std::sinh(0.5 * u), 2) + 0.5 * std::exp(-u) * s * s);
}

}  // namespace

InclusionReport check_ball_inclusions(const AdmissibilityConstants& c, int trials, int perTrial, std::uint64_t seed) {
    const int Q = c.Q;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    InclusionReport rep;
    const GroupModel m = GroupModel::abelian(Q);
    Window win{NPoint(Q), NPoint(Q), -12.0, -10.0};
    for (int i = 0; i < Q; ++i) win.hi[i] = 1.0;
    for (int t = 0; t < trials; ++t) {
        const double rAll = std::pow(10.0, -3.0 + 3.7 * U(rng));
        const double rBig = c.r0 + (4.0 - c.r0) * U(rng);
        const double rSmall = c.r0 * std::pow(1e-3, U(rng));
        for (int p = 0; p < perTrial; ++p) {
            ++rep.samples;
            // (i)
            {
                const double s = znorm(Q, sample_ball(Q, 4.0 * c.CN * std::exp(8.0 * c.M) * rAll, rng));
                const double u = rAll * (2.0 * U(rng) - 1.0);
                if (!(origin_distance(s, u) < c.C1 * rAll)) ++rep.failSmallBox;
            }
            // (ii)
            {
                const double s = znorm(Q, sample_ball(Q, 4.0 * c.CN * std::exp(8.0 * c.M * rBig), rng));
                const double u = rBig * (2.0 * U(rng) - 1.0);
                if (!(origin_distance(s, u) < c.C1 * rBig)) ++rep.failBigBox;
            }
            // (iii) and (iv): rejection sample of B(0, r) inside its bounding box
            for (double r : {rAll, rSmall}) {
                for (int tries = 0; tries < 64; ++tries) {
                    NPoint z(Q);
                    for (int i = 0; i < Q; ++i) z[i] = std::sinh(r) * (2.0 * U(rng) - 1.0);
                    const double u = r * (2.0 * U(rng) - 1.0);
                    const double s = znorm(Q, z);
                    if (!(origin_distance(s, u) < r)) continue;
                    if (!(s < std::exp(r) && std::abs(u) < r)) ++rep.failOuterBox;
                    if (r <= c.r0 && !(s < c.C1 * r)) ++rep.failInnerBox;
                    break;
                }
            }
            // admissible set inside B((n, u0), C1 r)
            {
                const AdmissibleSet R = random_admissible_set(win, c, rng);
                GPoint x{NPoint(Q), R.u0 + R.r * (2.0 * U(rng) - 1.0)};
                for (int i = 0; i < Q; ++i) x.z[i] = R.cube.lo(i) + R.cube.side() * U(rng);
                const GPoint center{cube_center(Q, R.cube), R.u0};
                const GPoint rel = g_multiply(m, g_inverse(m, center), x);
                if (!(origin_distance(znorm(Q, rel.z), rel.u) < c.C1 * R.r)) ++rep.failSetInBall;
            }
        }
    }
    return rep;
}

double distance_to_set(int Q, const GPoint& x, const AdmissibleSet& R) {
    double d2 = 0.0;
    for (int i = 0; i < Q; ++i) {
        const double lo = R.cube.lo(i), hi = R.cube.hi(i);
        const double e = x.z[i] < lo ? lo - x.z[i] : (x.z[i] > hi ? x.z[i] - hi : 0.0);
        d2 += e * e;
    }
    // cosh rho(u') - 1 = 2 sinh^2((u - u')/2) + e^{-(u + u')} d^2 / 2, convex in u'
    auto F = [&](double up) {
        const double s = std::sinh(0.5 * (x.u - up));
        return 2.0 * s * s + 0.5 * std::exp(-(x.u + up)) * d2;
    };
    const auto best = boost::math::tools::brent_find_minima(F, R.u0 - R.r, R.u0 + R.r, 52);
    return acosh1p(std::min(best.second, std::min(F(R.u0 - R.r), F(R.u0 + R.r))));
}

EnlargementEstimate enlargement_ratio(const AdmissibleSet& R, const AdmissibilityConstants& c, std::int64_t samples,
                                      std::uint64_t seed) {
    const int Q = c.Q;
    // R* lies in the cube grown by e^{u0 + r} sinh r times (u0 - 2r, u0 + 2r)
    const double grow = std::exp(R.u0 + R.r) * std::sinh(R.r);
    const double side = R.cube.side() + 2.0 * grow;
    const double box = std::pow(side, Q) * 4.0 * R.r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        GPoint x{NPoint(Q), R.u0 + 2.0 * R.r * (2.0 * U(rng) - 1.0)};
        for (int i = 0; i < Q; ++i) x.z[i] = R.cube.lo(i) - grow + side * U(rng);
        if (R.contains(Q, x) || distance_to_set(Q, x, R) < R.r) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    EnlargementEstimate e;
    e.bound = box / R.measure(Q);
    e.ratio = p * e.bound;
    e.stderr_ = e.bound * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return e;
}

CstarReport measure_Cstar(const Window& w, const AdmissibilityConstants& c, int nSets, std::int64_t samplesPerSet,
                          std::uint64_t seed, Exec exec) {
    std::mt19937_64 rng(seed);
    std::vector<AdmissibleSet> sets;
    for (int i = 0; i < nSets; ++i) sets.push_back(random_admissible_set(w, c, rng));
    const auto est = run_shards<EnlargementEstimate>(nSets, exec, [&](int i) {
        return enlargement_ratio(sets[i], c, samplesPerSet, shard_seed(seed, static_cast<std::uint64_t>(i)));
    });
    CstarReport rep;
    rep.sets = nSets;
    for (const auto& e : est) {
        rep.measured = std::max(rep.measured, e.ratio);
        rep.maxBound = std::max(rep.maxBound, e.bound);
        if (e.ratio > c.Cstar) ++rep.exceed;
    }
    return rep;
}

ConditionCReport check_condition_C(const Window& w, const AdmissibilityConstants& c, int nSets, std::uint64_t seed) {
    const int Q = c.Q;
    ConditionCReport rep;
    auto rk = [&](int k) { return k * c.log_eta() / (2.0 * c.M); };
    rep.k0 = 1;
    while (!(rk(rep.k0) > c.r0)) ++rep.k0;
    auto member = [&](int k, const NPoint& z) { return AdmissibleSet{cube_containing(Q, k, z), 0.0, rk(k), SetKind::Big}; };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < nSets; ++i) {
        // two members through nearby points at levels k > l
        NPoint z(Q), z2(Q);
        for (int d = 0; d < Q; ++d) {
            z[d] = w.lo[d] + (w.hi[d] - w.lo[d]) * U(rng);
            z2[d] = z[d] + std::ldexp(1.0, rep.k0) * (U(rng) - 0.5);
        }
        const int l = rep.k0 + static_cast<int>(U(rng) * 12);
        const int k = l + 1 + static_cast<int>(U(rng) * 12);
        const AdmissibleSet A = member(k, z), B = member(l, z2);
        if (!is_admissible(A, c) || !is_admissible(B, c)) ++rep.admissibilityFailures;
        ++rep.pairsChecked;
        if (!sets_disjoint(Q, A, B) && !set_subset(Q, B, A)) ++rep.nestingFailures;

        // every admissible set lies in some member
        const AdmissibleSet R = random_admissible_set(w, c, rng);
        ++rep.setsChecked;
        int kk = std::max(R.cube.k, rep.k0);
        while (rk(kk) < std::abs(R.u0) + R.r) ++kk;
        const AdmissibleSet H{cube_ancestor(Q, R.cube, kk), 0.0, rk(kk), SetKind::Big};
        if (!set_subset(Q, R, H)) ++rep.containmentFailures;
        if (!is_admissible(H, c)) ++rep.admissibilityFailures;
    }
    return rep;
}

}  // namespace nasolv
