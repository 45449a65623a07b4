#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "nasolv/czspace.hpp"

namespace nasolv {

namespace {

bool intersects_window(int Q, const AdmissibleSet& R, const Window& w) {
    if (!(R.u0 - R.r < w.uHi && R.u0 + R.r > w.uLo)) return false;
    for (int i = 0; i < Q; ++i)
        if (!(R.cube.lo(i) < w.hi[i] && R.cube.hi(i) > w.lo[i])) return false;
    return true;
}

void grow(Carrier& C, int id, double leafMeasure, int maxDepth) {
    const int Q = C.Q;
    C.nodes[id].leafBegin = static_cast<int>(C.leaves.size());
    const bool refine = C.nodes[id].depth < maxDepth && C.nodes[id].measure > leafMeasure &&
                        intersects_window(Q, C.nodes[id].set, C.window);
    if (!refine) {
        const AdmissibleSet& R = C.nodes[id].set;
        const GPoint x{cube_center(Q, R.cube), R.u0};
        C.leaves.push_back(id);
        C.points.push_back(x);
        C.weights.push_back(C.nodes[id].measure);
        C.inWindow.push_back(C.window.contains(x) ? 1 : 0);
    } else {
        const auto kids = children(C.nodes[id].set, C.constants);
        for (const auto& k : kids) {
            DescNode n;
            n.set = k;
            n.measure = k.measure(Q);
            n.parent = id;
            n.depth = C.nodes[id].depth + 1;
            C.minChildRatio = std::min(C.minChildRatio, n.measure / C.nodes[id].measure);
            const int cid = static_cast<int>(C.nodes.size());
            C.nodes.push_back(n);
            C.nodes[id].children.push_back(cid);
            grow(C, cid, leafMeasure, maxDepth);
        }
    }
    C.nodes[id].leafEnd = static_cast<int>(C.leaves.size());
}

}  // namespace

Carrier build_carrier(const Window& w, const AdmissibilityConstants& c, const CarrierOptions& opt) {
    Carrier C;
    C.Q = c.Q;
    C.constants = c;
    C.window = w;
    const double mw = w.measure();
    const double sigma = opt.sigma > 0.0 ? opt.sigma : 4.0 * mw * (1.0 + 1e-3);
    const double leaf = opt.leafMeasure > 0.0 ? opt.leafMeasure : mw / 4096.0;
    C.partition = big_quasi_partition(sigma, w, c, opt.stripR);
    for (const auto& R : C.partition.sets) {
        DescNode n;
        n.set = R;
        n.measure = R.measure(c.Q);
        const int id = static_cast<int>(C.nodes.size());
        C.nodes.push_back(n);
        C.roots.push_back(id);
        grow(C, id, leaf, opt.maxDepth);
    }
    for (std::size_t i = 0; i < C.leaves.size(); ++i)
        if (C.inWindow[i]) C.windowMeasure += C.weights[i];
    return C;
}

double DiscretizedFunction::l1() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += carrier->weights[i] * std::abs(values[i]);
    return s;
}

DiscretizedFunction zero_function(const Carrier& c) { return DiscretizedFunction{&c, std::vector<double>(c.leaves.size(), 0.0)}; }

DiscretizedFunction random_function(const Carrier& c, int kind, std::mt19937_64& rng) {
    DiscretizedFunction f = zero_function(c);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::normal_distribution<double> G(0.0, 1.0);
    std::exponential_distribution<double> E(1.0);
    const Window& w = c.window;
    const int Q = c.Q;
    std::vector<int> inside;
    for (std::size_t i = 0; i < c.leaves.size(); ++i)
        if (c.inWindow[i]) inside.push_back(static_cast<int>(i));

    // scaled coordinates of a leaf in [0, 1)^{Q+1}
    auto coords = [&](int i, int d) {
        return d < Q ? (c.points[i].z[d] - w.lo[d]) / (w.hi[d] - w.lo[d]) : (c.points[i].u - w.uLo) / (w.uHi - w.uLo);
    };
    auto bump = [&](double sign) {
        std::array<double, kMaxDim + 1> ctr{};
        for (int d = 0; d <= Q; ++d) ctr[d] = U(rng);
        const double width = 0.02 + 0.3 * U(rng);
        const double height = sign * (0.5 + 20.0 * U(rng));
        for (int i : inside) {
            double r2 = 0.0;
            for (int d = 0; d <= Q; ++d) r2 += std::pow(coords(i, d) - ctr[d], 2);
            f.values[i] += height * std::exp(-r2 / (2.0 * width * width));
        }
    };

    switch (((kind % 4) + 4) % 4) {
        case 0:
            for (int i : inside) f.values[i] = E(rng);
            break;
        case 1: {
            const int n = 1 + static_cast<int>(U(rng) * 5);
            for (int s = 0; s < n; ++s) f.values[inside[static_cast<std::size_t>(U(rng) * inside.size())]] += 10.0 + 1000.0 * U(rng);
            for (int i : inside) f.values[i] += 0.01 * E(rng);
            break;
        }
        case 2: {
            const int n = 1 + static_cast<int>(U(rng) * 3);
            for (int s = 0; s < n; ++s) bump(1.0);
            break;
        }
        default:
            for (int i : inside) f.values[i] = G(rng);
            bump(U(rng) < 0.5 ? -1.0 : 1.0);
            break;
    }
    return f;
}

NodeSums::NodeSums(const DiscretizedFunction& f) {
    const auto& w = f.carrier->weights;
    absPrefix.assign(w.size() + 1, 0.0);
    sgnPrefix.assign(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        absPrefix[i + 1] = absPrefix[i] + w[i] * std::abs(f.values[i]);
        sgnPrefix[i + 1] = sgnPrefix[i] + w[i] * f.values[i];
    }
}

std::vector<double> maximal_operator(const DiscretizedFunction& f) {
    const Carrier& C = *f.carrier;
    const NodeSums S(f);
    std::vector<double> best(C.nodes.size(), 0.0);
    std::vector<double> out(C.leaves.size(), 0.0);
    // parents precede children in node order
    for (std::size_t id = 0; id < C.nodes.size(); ++id) {
        const DescNode& n = C.nodes[id];
        const double avg = S.abs_integral(n) / n.measure;
        best[id] = n.parent >= 0 ? std::max(best[n.parent], avg) : avg;
        if (n.children.empty()) out[n.leafBegin] = best[id];
    }
    return out;
}

CZDecomposition cz_decompose(const DiscretizedFunction& f, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("cz_decompose: alpha must be positive");
    const Carrier& C = *f.carrier;
    const int Q = C.Q;
    const NodeSums S(f);
    for (int r : C.roots) {
        if (S.abs_integral(C.nodes[r]) / C.nodes[r].measure >= alpha) {
            std::ostringstream os;
            os << "cz_decompose: partition set average reaches alpha = " << alpha
               << "; the quasi-partition sets are too small for this height";
            throw std::invalid_argument(os.str());
        }
    }
    CZDecomposition d;
    d.alpha = alpha;
    d.g = f;
    std::deque<int> queue(C.roots.begin(), C.roots.end());
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const DescNode& n = C.nodes[id];
        const double absAvg = S.abs_integral(n) / n.measure;
        if (n.parent >= 0 && absAvg >= alpha) {
            BadPart p;
            p.node = id;
            p.set = n.set;
            p.measure = n.measure;
            p.mean = S.integral(n) / n.measure;
            p.absAvg = absAvg;
            std::vector<double> b(n.leafEnd - n.leafBegin);
            double l1 = 0.0, integral = 0.0;
            for (int i = n.leafBegin; i < n.leafEnd; ++i) {
                const double v = f.values[i] - p.mean;
                b[i - n.leafBegin] = v;
                l1 += C.weights[i] * std::abs(v);
                integral += C.weights[i] * v;
                d.g.values[i] = p.mean;
            }
            p.l1 = l1;
            p.integral = integral;
            d.parts.push_back(p);
            d.b.push_back(std::move(b));
            continue;
        }
        for (int ch : n.children) queue.push_back(ch);
    }

    CZDiagnostics& g = d.diag;
    g.fL1 = f.l1();
    for (double v : d.g.values) g.gBound = std::max(g.gBound, std::abs(v));
    std::vector<double> rest(f.values.size(), 0.0);
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = f.values[i] - d.g.values[i];
    for (std::size_t k = 0; k < d.parts.size(); ++k) {
        const BadPart& p = d.parts[k];
        const DescNode& n = C.nodes[p.node];
        g.sumMeasures += p.measure;
        g.sumL1 += p.l1;
        const double scale = std::max(S.abs_integral(n), 1e-300);
        g.maxMeanResidual = std::max(g.maxMeanResidual, std::abs(p.integral) / scale);
        for (int i = n.leafBegin; i < n.leafEnd; ++i) {
            rest[i] -= d.b[k][i - n.leafBegin];
            if (!p.set.contains(Q, C.points[i])) g.supportsOk = false;
        }
    }
    for (double v : rest) g.reconstruction = std::max(g.reconstruction, std::abs(v));

    std::vector<const BadPart*> order;
    for (const auto& p : d.parts) order.push_back(&p);
    std::sort(order.begin(), order.end(),
              [&](const BadPart* a, const BadPart* b) { return C.nodes[a->node].leafBegin < C.nodes[b->node].leafBegin; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        const DescNode& a = C.nodes[order[k - 1]->node];
        const DescNode& b = C.nodes[order[k]->node];
        if (a.leafEnd > b.leafBegin || !sets_disjoint(Q, a.set, b.set)) g.nestedOrDisjoint = false;
    }
    return d;
}

CZCheck verify_cz(const CZDecomposition& d, const AdmissibilityConstants& c) {
    CZCheck r;
    const CZDiagnostics& g = d.diag;
    const double a = d.alpha;
    const double k0 = c.kappa0;
    const double rel = 1.0 + 1e-12;
    std::ostringstream why;
    r.i = g.gBound <= k0 * a;
    if (!r.i) why << "(i) |g| = " << g.gBound << " > kappa0 alpha; ";
    r.ii = g.supportsOk && g.nestedOrDisjoint && g.maxMeanResidual <= 1e-10 &&
           g.reconstruction <= 1e-12 * std::max(1.0, g.gBound + g.fL1);
    if (!r.ii) why << "(ii) support/mean: residual " << g.maxMeanResidual << ", reconstruction " << g.reconstruction << "; ";
    r.iii = g.sumMeasures <= k0 * g.fL1 / a * rel;
    if (!r.iii) why << "(iii) sum mu = " << g.sumMeasures << "; ";
    r.iv = g.sumL1 <= k0 * g.fL1 * rel;
    if (!r.iv) why << "(iv) sum ||b|| = " << g.sumL1 << "; ";
    r.stopping = true;
    for (const auto& p : d.parts) {
        if (!(p.absAvg >= a && p.absAvg < c.C2 * a) || !is_admissible(p.set, c)) {
            r.stopping = false;
            why << "stopping set average " << p.absAvg << " outside [alpha, C2 alpha); ";
            break;
        }
    }
    r.sharp = g.gBound <= c.C2 * a && g.sumMeasures <= g.fL1 / a * rel && g.sumL1 <= 2.0 * g.fL1 * rel;
    if (!r.sharp) why << "sharp bounds violated; ";
    r.failure = why.str();
    return r;
}

bool atom_check(const DiscretizedFunction& a, int node, double tol) {
    const Carrier& C = *a.carrier;
    const DescNode& n = C.nodes[node];
    double l2 = 0.0, integral = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const int ii = static_cast<int>(i);
        const bool inside = ii >= n.leafBegin && ii < n.leafEnd;
        if (!inside && a.values[i] != 0.0) return false;
        l2 += C.weights[i] * a.values[i] * a.values[i];
        l1 += C.weights[i] * std::abs(a.values[i]);
        integral += C.weights[i] * a.values[i];
    }
    return std::sqrt(l2) <= (1.0 + tol) / std::sqrt(n.measure) && std::abs(integral) <= tol * std::max(l1, 1e-300);
}

double bmo_oscillation(const DiscretizedFunction& f, int node) {
    const Carrier& C = *f.carrier;
    const DescNode& n = C.nodes[node];
    double mean = 0.0;
    for (int i = n.leafBegin; i < n.leafEnd; ++i) mean += C.weights[i] * f.values[i];
    mean /= n.measure;
    double s = 0.0;
    for (int i = n.leafBegin; i < n.leafEnd; ++i) s += C.weights[i] * std::pow(f.values[i] - mean, 2);
    return std::sqrt(s / n.measure);
}

}  // namespace nasolv
