#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "nasolv/czspace.hpp"

namespace nasolv {

double Cube::side() const { return std::ldexp(1.0, k); }

bool Cube::operator==(const Cube& o) const { return k == o.k && a == o.a; }

Cube cube_containing(int Q, int k, const NPoint& z) {
    Cube c;
    c.k = k;
    const double s = std::ldexp(1.0, k);
    for (int i = 0; i < Q; ++i) c.a[i] = static_cast<std::int64_t>(std::floor(z[i] / s));
    return c;
}

namespace {

std::int64_t floor_div2(std::int64_t v, int shift) {
    if (shift >= 63) return v < 0 ? -1 : 0;
    // arithmetic shift floors towards -inf for negative v
    return v >> shift;
}

}  // namespace

Cube cube_ancestor(int Q, const Cube& c, int k) {
    if (k < c.k) throw std::invalid_argument("cube_ancestor: target level below cube level");
    Cube p;
    p.k = k;
    for (int i = 0; i < Q; ++i) p.a[i] = floor_div2(c.a[i], k - c.k);
    return p;
}

Cube cube_parent(int Q, const Cube& c) { return cube_ancestor(Q, c, c.k + 1); }

std::vector<Cube> cube_children(int Q, const Cube& c) {
    std::vector<Cube> out;
    out.reserve(std::size_t{1} << Q);
    for (int mask = 0; mask < (1 << Q); ++mask) {
        Cube ch;
        ch.k = c.k - 1;
        for (int i = 0; i < Q; ++i) ch.a[i] = 2 * c.a[i] + ((mask >> i) & 1);
        out.push_back(ch);
    }
    return out;
}

bool cube_contains(int Q, const Cube& c, const NPoint& z) {
    for (int i = 0; i < Q; ++i)
        if (!(z[i] >= c.lo(i) && z[i] < c.hi(i))) return false;
    return true;
}

bool cube_subset(int Q, const Cube& inner, const Cube& outer) {
    if (inner.k > outer.k) return false;
    return cube_ancestor(Q, inner, outer.k) == outer;
}

NPoint cube_center(int Q, const Cube& c) {
    NPoint z(Q);
    for (int i = 0; i < Q; ++i) z[i] = c.lo(i) + 0.5 * c.side();
    return z;
}

double cube_volume(int Q, const Cube& c) { return std::ldexp(1.0, c.k * Q); }

bool Window::contains(const GPoint& x) const {
    if (!(x.u >= uLo && x.u < uHi)) return false;
    for (int i = 0; i < lo.d; ++i)
        if (!(x.z[i] >= lo[i] && x.z[i] < hi[i])) return false;
    return true;
}

double Window::measure() const {
    double v = uHi - uLo;
    for (int i = 0; i < lo.d; ++i) v *= hi[i] - lo[i];
    return v;
}

namespace {

void link_levels(DyadicSystem& sys) {
    sys.levels.assign(sys.kMax - sys.kMin + 1, {});
    for (const auto& c : sys.cubes) sys.levels[c.k - sys.kMin].push_back(c.id);
    for (auto& c : sys.cubes)
        if (c.parent >= 0) sys.cubes[c.parent].children.push_back(c.id);
}

}  // namespace

DyadicSystem build_dyadic_euclidean(int Q, const NPoint& lo, const NPoint& hi, int kMin, int kMax, int perSide) {
    if (kMin > kMax) throw std::invalid_argument("build_dyadic_euclidean: kMin > kMax");
    if (perSide < 1) throw std::invalid_argument("build_dyadic_euclidean: perSide must be >= 1");
    const double top = std::ldexp(1.0, kMax);
    std::array<int, kMaxDim> n{};
    std::int64_t total = 1;
    for (int i = 0; i < Q; ++i) {
        if (hi[i] - lo[i] < top) throw std::invalid_argument("build_dyadic_euclidean: window too small for kMax");
        n[i] = static_cast<int>(std::llround((hi[i] - lo[i]) * perSide));
        total *= n[i];
    }
    DyadicSystem sys;
    sys.kMin = kMin;
    sys.kMax = kMax;
    sys.eta = 2.0;
    sys.carrier.reserve(total);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        NPoint z(Q);
        std::int64_t rest = idx;
        for (int i = 0; i < Q; ++i) {
            z[i] = lo[i] + (static_cast<double>(rest % n[i]) + 0.5) / perSide;
            rest /= n[i];
        }
        sys.carrier.push_back(z);
    }
    // cube key -> id, per level, built from the top so parents exist first
    std::map<std::pair<int, std::array<std::int64_t, kMaxDim>>, int> ids;
    for (int k = kMax; k >= kMin; --k) {
        for (std::size_t p = 0; p < sys.carrier.size(); ++p) {
            const Cube c = cube_containing(Q, k, sys.carrier[p]);
            auto key = std::make_pair(k, c.a);
            auto it = ids.find(key);
            if (it == ids.end()) {
                NetCube nc;
                nc.id = static_cast<int>(sys.cubes.size());
                nc.k = k;
                nc.center = cube_center(Q, c);
                if (k < kMax) nc.parent = ids.at(std::make_pair(k + 1, cube_parent(Q, c).a));
                it = ids.emplace(key, nc.id).first;
                sys.cubes.push_back(nc);
            }
            sys.cubes[it->second].members.push_back(static_cast<int>(p));
        }
    }
    link_levels(sys);
    return sys;
}

DyadicSystem build_dyadic_net(const std::vector<NPoint>& carrier, const NMetric& dist, double eta, int kMin, int kMax) {
    if (kMin > kMax) throw std::invalid_argument("build_dyadic_net: kMin > kMax");
    if (!(eta > 1.0)) throw std::invalid_argument("build_dyadic_net: eta must exceed 1");
    const int n = static_cast<int>(carrier.size());
    if (n == 0) throw std::invalid_argument("build_dyadic_net: empty carrier");
    if (n > 8192) throw std::invalid_argument("build_dyadic_net: carrier larger than 8192 points");
    std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
    auto d = [&](int i, int j) { return D[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = dist(carrier[i], carrier[j]);
            if (v == 0.0) throw std::invalid_argument("build_dyadic_net: duplicate carrier points");
            D[static_cast<std::size_t>(i) * n + j] = D[static_cast<std::size_t>(j) * n + i] = v;
        }

    DyadicSystem sys;
    sys.kMin = kMin;
    sys.kMax = kMax;
    sys.eta = eta;
    sys.carrier = carrier;

    // centers[k - kMin]: carrier indices of the maximal eta^k-net, nested downwards
    const int L = kMax - kMin + 1;
    std::vector<std::vector<int>> centers(L);
    std::vector<int> current;
    for (int k = kMax; k >= kMin; --k) {
        const double sep = std::pow(eta, k);
        for (int p = 0; p < n; ++p) {
            bool far = true;
            for (int c : current)
                if (c == p || d(p, c) < sep) {
                    far = false;
                    break;
                }
            if (far) current.push_back(p);
        }
        centers[k - kMin] = current;
    }

    auto closest = [&](int p, const std::vector<int>& among) {
        int best = among.front();
        for (int c : among)
            if (d(p, c) < d(p, best)) best = c;
        return best;
    };

    // closest-parent links between consecutive levels
    std::vector<std::map<int, int>> cubeOf(L);  // net point -> cube id
    std::vector<int> anchor;                    // net point of each cube
    for (int k = kMax; k >= kMin; --k) {
        for (int c : centers[k - kMin]) {
            NetCube nc;
            nc.id = static_cast<int>(sys.cubes.size());
            nc.k = k;
            nc.center = carrier[c];
            if (k < kMax) nc.parent = cubeOf[k + 1 - kMin].at(closest(c, centers[k + 1 - kMin]));
            cubeOf[k - kMin][c] = nc.id;
            anchor.push_back(c);
            sys.cubes.push_back(nc);
        }
    }

    // members: each point joins the closest bottom-level net point, then every ancestor
    for (int p = 0; p < n; ++p)
        for (int id = cubeOf[0].at(closest(p, centers[0])); id >= 0; id = sys.cubes[id].parent)
            sys.cubes[id].members.push_back(p);

    // re-center each cube on the member with the tightest ball sandwich
    std::vector<char> in(n, 0);
    for (auto& c : sys.cubes) {
        const double scale = std::pow(eta, c.k);
        for (int p : c.members) in[p] = 1;
        auto score = [&](int m) {
            double outer = 0.0, inner = std::numeric_limits<double>::infinity();
            for (int q = 0; q < n; ++q) {
                if (in[q]) outer = std::max(outer, d(m, q));
                else inner = std::min(inner, d(m, q));
            }
            return std::max(outer / scale, std::isfinite(inner) ? scale / inner : 0.0);
        };
        int best = anchor[c.id];
        double bestScore = score(best);
        for (int m : c.members) {
            const double s = score(m);
            if (s < bestScore) {
                bestScore = s;
                best = m;
            }
        }
        c.center = carrier[best];
        for (int p : c.members) in[p] = 0;
    }
    link_levels(sys);
    return sys;
}

DyadicReport verify_dyadic(const DyadicSystem& sys, const NMetric& dist) {
    DyadicReport rep;
    rep.cubes = static_cast<std::int64_t>(sys.cubes.size());
    const int n = static_cast<int>(sys.carrier.size());
    rep.partition = true;
    rep.nested = true;
    for (int k = sys.kMin; k <= sys.kMax; ++k) {
        std::vector<int> owner(n, -1);
        for (int id : sys.level(k))
            for (int p : sys.cubes[id].members) {
                if (owner[p] >= 0) rep.partition = false;
                owner[p] = id;
            }
        if (std::find(owner.begin(), owner.end(), -1) != owner.end()) rep.partition = false;

        const double scale = std::pow(sys.eta, k);
        for (int id : sys.level(k)) {
            const NetCube& c = sys.cubes[id];
            rep.J = std::max(rep.J, static_cast<int>(c.children.size()));
            if (c.parent >= 0) {
                const auto& pm = sys.cubes[c.parent].members;
                for (int p : c.members)
                    if (!std::binary_search(pm.begin(), pm.end(), p)) rep.nested = false;
            } else if (k != sys.kMax) {
                rep.nested = false;
            }
            double outer = 0.0;
            for (int p : c.members) outer = std::max(outer, dist(c.center, sys.carrier[p]));
            double inner = std::numeric_limits<double>::infinity();
            std::vector<char> in(n, 0);
            for (int p : c.members) in[p] = 1;
            for (int p = 0; p < n; ++p)
                if (!in[p]) inner = std::min(inner, dist(c.center, sys.carrier[p]));
            rep.CN = std::max(rep.CN, outer / scale);
            if (std::isfinite(inner)) rep.CN = std::max(rep.CN, scale / inner);
        }
    }
    return rep;
}

}  // namespace nasolv
