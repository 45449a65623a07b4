#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nasolv/group.hpp"
#include "nasolv/parallel.hpp"

namespace nasolv {

// ---- admissibility constants ----

struct ConstraintCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs, in the units of the inequality as checked
    bool pass = false;
};

struct ConstantsReport {
    std::vector<ConstraintCheck> checks;
    double C2 = 0.0;
    bool allPass = false;
};

// The six conditions on (M, r0, eta); C2 = max{2, (CN^2 eta)^Q}.
ConstantsReport validate_constants(double M, double r0, double eta, double CN = 2.0, int Q = 2);

struct AdmissibilityConstants {
    double M = 3.5;
    double r0 = 1.2;
    double eta = 2.0;
    double CN = 2.0;
    int J = 4;
    int Q = 2;
    double C1 = 0.0;
    double C2 = 0.0;
    double Cstar = 2.5;
    double kappa0 = 0.0;

    double log_eta() const;
};

// Fills CN, J, C2, C1 (see measure_C1) and kappa0 = max{C1, C2, Cstar} for the
// Euclidean dyadic system on R^Q.
AdmissibilityConstants make_constants(double M, double r0, double eta, int Q, double Cstar = 2.5);

// Smallest C1 making the four ball/box inclusions hold, by scanning r on a log grid.
struct C1Report {
    double C1 = 0.0;
    double fromSmall = 0.0;  // B_N(0, 4 CN e^{8M} r) x (-r, r) in B(0, C1 r), all r
    double fromBig = 0.0;    // B_N(0, 4 CN e^{8Mr}) x (-r, r) in B(0, C1 r), r > r0
    double fromInner = 0.0;  // B(0, r) in B_N(0, C1 r) x (-r, r), r <= r0
};
C1Report measure_C1(const AdmissibilityConstants& c);

// ---- dyadic cubes ----

// Half-open Euclidean dyadic cube prod [a_i eta^k, (a_i + 1) eta^k) with eta = 2.
struct Cube {
    int k = 0;
    std::array<std::int64_t, kMaxDim> a{};

    double side() const;
    double lo(int i) const { return static_cast<double>(a[i]) * side(); }
    double hi(int i) const { return static_cast<double>(a[i] + 1) * side(); }
    bool operator==(const Cube& o) const;
};

Cube cube_containing(int Q, int k, const NPoint& z);
Cube cube_parent(int Q, const Cube& c);
Cube cube_ancestor(int Q, const Cube& c, int k);
std::vector<Cube> cube_children(int Q, const Cube& c);
bool cube_contains(int Q, const Cube& c, const NPoint& z);
bool cube_subset(int Q, const Cube& inner, const Cube& outer);
NPoint cube_center(int Q, const Cube& c);
double cube_volume(int Q, const Cube& c);

struct Window {
    NPoint lo, hi;  // z-box [lo, hi)
    double uLo = 0.0, uHi = 0.0;

    bool contains(const GPoint& x) const;
    double measure() const;
};

// Christ-type system realised on a finite carrier of N.
struct NetCube {
    int id = 0;
    int k = 0;
    NPoint center;   // n_alpha^k
    int parent = -1;
    std::vector<int> children;
    std::vector<int> members;  // carrier indices
};

struct DyadicSystem {
    int kMin = 0, kMax = 0;
    double eta = 2.0;
    std::vector<NPoint> carrier;
    std::vector<NetCube> cubes;
    std::vector<std::vector<int>> levels;  // levels[k - kMin] = cube ids

    const std::vector<int>& level(int k) const { return levels[k - kMin]; }
};

using NMetric = std::function<double(const NPoint&, const NPoint&)>;

// Euclidean dyadic cubes restricted to a cell-centred grid on [lo, hi) with `perSide`
// points per unit length; centers are the cube midpoints.
DyadicSystem build_dyadic_euclidean(int Q, const NPoint& lo, const NPoint& hi, int kMin, int kMax, int perSide);

// Hierarchical maximal eta^k-nets with closest-parent assignment.
DyadicSystem build_dyadic_net(const std::vector<NPoint>& carrier, const NMetric& dist, double eta, int kMin, int kMax);

struct DyadicReport {
    double CN = 0.0;          // smallest constant giving the inner/outer ball sandwich on the carrier
    int J = 0;                // max number of children
    bool partition = false;   // each level partitions the carrier
    bool nested = false;      // each cube is contained in its parent, parents unique
    std::int64_t cubes = 0;
};

DyadicReport verify_dyadic(const DyadicSystem& sys, const NMetric& dist);

// ---- admissible sets ----

enum class SetKind { Small, Big };

struct AdmissibleSet {
    Cube cube;
    double u0 = 0.0;
    double r = 0.0;
    SetKind kind = SetKind::Small;

    double measure(int Q) const;
    bool contains(int Q, const GPoint& x) const;
};

AdmissibleSet make_set(const Cube& cube, double u0, double r, const AdmissibilityConstants& c);
bool is_admissible(const AdmissibleSet& R, const AdmissibilityConstants& c);
bool is_strongly_admissible(const AdmissibleSet& R, const AdmissibilityConstants& c);
// Throws std::invalid_argument when R is not admissible.
std::vector<AdmissibleSet> children(const AdmissibleSet& R, const AdmissibilityConstants& c);
bool set_subset(int Q, const AdmissibleSet& a, const AdmissibleSet& b);
bool sets_disjoint(int Q, const AdmissibleSet& a, const AdmissibleSet& b);

struct PartitionStrip {
    double u0 = 0.0, r = 0.0;
    int k = 0;
};

struct QuasiPartition {
    std::vector<AdmissibleSet> sets;
    std::vector<PartitionStrip> strips;
    double coveredFraction = 0.0;  // |window covered| / |window|
};

// Big admissible sets of measure > sigma covering the window, strip by strip from uLo upward.
QuasiPartition big_quasi_partition(double sigma, const Window& w, const AdmissibilityConstants& c, double stripR = 1.25);

// Random admissible set whose center lies in the window.
AdmissibleSet random_admissible_set(const Window& w, const AdmissibilityConstants& c, std::mt19937_64& rng);

// Sampled inclusion checks; return the number of sample points violating each inclusion.
struct InclusionReport {
    std::int64_t samples = 0;
    std::int64_t failSmallBox = 0;  // (i)
    std::int64_t failBigBox = 0;    // (ii)
    std::int64_t failOuterBox = 0;  // (iii)
    std::int64_t failInnerBox = 0;  // (iv)
    std::int64_t failSetInBall = 0; // admissible set within B((n, u0), C1 r)
};
InclusionReport check_ball_inclusions(const AdmissibilityConstants& c, int trials, int perTrial, std::uint64_t seed);

// Monte Carlo of mu(R*) / mu(R) with R* the r-enlargement of R.
struct EnlargementEstimate {
    double ratio = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;  // analytic box bound for this R
};
double distance_to_set(int Q, const GPoint& x, const AdmissibleSet& R);
EnlargementEstimate enlargement_ratio(const AdmissibleSet& R, const AdmissibilityConstants& c, std::int64_t samples,
                                      std::uint64_t seed);
struct CstarReport {
    double measured = 0.0;  // max ratio over the sets
    double maxBound = 0.0;
    int sets = 0;
    int exceed = 0;         // sets with ratio > configured Cstar
};
CstarReport measure_Cstar(const Window& w, const AdmissibilityConstants& c, int nSets, std::int64_t samplesPerSet,
                          std::uint64_t seed, Exec exec = Exec::Parallel);

// Nested family R^k = Q^k x (-r_k, r_k), r_k = k log(eta) / 2M, k >= k0.
struct ConditionCReport {
    int k0 = 0;
    int pairsChecked = 0;
    int nestingFailures = 0;
    int setsChecked = 0;
    int containmentFailures = 0;
    int admissibilityFailures = 0;
};
ConditionCReport check_condition_C(const Window& w, const AdmissibilityConstants& c, int nSets, std::uint64_t seed);

// ---- discretized functions and the CZ decomposition ----

struct DescNode {
    AdmissibleSet set;
    double measure = 0.0;
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    int leafBegin = 0, leafEnd = 0;  // range in Carrier::leaves
};

// Leaves of the descendant tree of a quasi-partition, refined inside the window.
struct Carrier {
    int Q = 2;
    AdmissibilityConstants constants;
    Window window;
    QuasiPartition partition;
    std::vector<DescNode> nodes;
    std::vector<int> roots;
    std::vector<int> leaves;        // node ids, depth-first order
    std::vector<GPoint> points;     // leaf centers
    std::vector<double> weights;    // leaf measures
    std::vector<char> inWindow;     // leaf center inside the window
    double windowMeasure = 0.0;     // sum of in-window leaf weights
    double minChildRatio = 1.0;     // min child/parent measure ratio over all splits
};

struct CarrierOptions {
    double sigma = 0.0;        // partition sets have measure > sigma (default 4 mu(W) (1 + 1e-3))
    double stripR = 1.25;
    double leafMeasure = 0.0;  // default mu(W) / 2^12
    int maxDepth = 40;
};

Carrier build_carrier(const Window& w, const AdmissibilityConstants& c, const CarrierOptions& opt = {});

struct DiscretizedFunction {
    const Carrier* carrier = nullptr;
    std::vector<double> values;  // per leaf

    double l1() const;
};

DiscretizedFunction zero_function(const Carrier& c);
// Random test function supported in the window; `kind` cycles through noise, spikes, bumps, signed.
DiscretizedFunction random_function(const Carrier& c, int kind, std::mt19937_64& rng);

// Integral of |f| (or f) over a descendant node, from prefix sums.
struct NodeSums {
    std::vector<double> absPrefix, sgnPrefix;
    explicit NodeSums(const DiscretizedFunction& f);
    double abs_integral(const DescNode& n) const { return absPrefix[n.leafEnd] - absPrefix[n.leafBegin]; }
    double integral(const DescNode& n) const { return sgnPrefix[n.leafEnd] - sgnPrefix[n.leafBegin]; }
};

// Sup over descendants containing each leaf of the average of |f|.
std::vector<double> maximal_operator(const DiscretizedFunction& f);

struct BadPart {
    int node = 0;
    AdmissibleSet set;
    double measure = 0.0;
    double mean = 0.0;     // average of f on the set
    double absAvg = 0.0;   // average of |f|
    double l1 = 0.0;       // ||b||_1
    double integral = 0.0; // integral of b
};

struct CZDiagnostics {
    double gBound = 0.0;       // max |g|
    double sumMeasures = 0.0;
    double sumL1 = 0.0;
    double fL1 = 0.0;
    double maxMeanResidual = 0.0;  // max |int b_i| / max(1, ||b_i||_1)
    double reconstruction = 0.0;   // max |f - g - sum b_i|
    bool nestedOrDisjoint = true;
    bool supportsOk = true;
};

struct CZDecomposition {
    double alpha = 0.0;
    DiscretizedFunction g;
    std::vector<BadPart> parts;
    std::vector<std::vector<double>> b;  // per part, leaf values over its node range
    CZDiagnostics diag;
};

// Stopping-time decomposition; throws std::invalid_argument if some partition set has average >= alpha.
CZDecomposition cz_decompose(const DiscretizedFunction& f, double alpha);

struct CZCheck {
    bool i = false, ii = false, iii = false, iv = false;
    bool stopping = false;  // alpha <= avg < C2 alpha on every stopping set
    bool sharp = false;     // |g| <= C2 alpha, sum mu <= ||f||/alpha, sum ||b|| <= 2 ||f||
    std::string failure;
    bool ok() const { return i && ii && iii && iv && stopping && sharp; }
};

CZCheck verify_cz(const CZDecomposition& d, const AdmissibilityConstants& c);

// Atom support, size and cancellation on the carrier.
bool atom_check(const DiscretizedFunction& a, int node, double tol = 1e-12);
double bmo_oscillation(const DiscretizedFunction& f, int node);

}  // namespace nasolv
