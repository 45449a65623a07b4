#include "nasolv/group.hpp"

#include <cmath>

namespace nasolv {

NPoint::NPoint(std::initializer_list<double> v) : d(static_cast<int>(v.size())) {
    if (d > kMaxDim) throw DimensionError("NPoint: dimension exceeds kMaxDim");
    int i = 0;
    for (double x : v) c[i++] = x;
}

NPoint NPoint::from(const std::vector<double>& v) {
    if (static_cast<int>(v.size()) > kMaxDim) throw DimensionError("NPoint: dimension exceeds kMaxDim");
    NPoint p(static_cast<int>(v.size()));
    for (int i = 0; i < p.d; ++i) p.c[i] = v[i];
    return p;
}

GroupModel GroupModel::abelian(int Q) {
    if (Q < 2 || Q > kMaxDim) throw std::invalid_argument("abelian model needs 2 <= Q <= " + std::to_string(kMaxDim));
    GroupModel m;
    m.kind = NKind::Abelian;
    m.d = Q;
    m.Q = Q;
    m.step = 1;
    m.q = Q;
    m.weights.assign(Q, 1);
    m.bracket.assign(Q, std::vector<NPoint>(Q, NPoint(Q)));
    return m;
}

GroupModel GroupModel::heisenberg1() {
    GroupModel m;
    m.kind = NKind::Heisenberg1;
    m.d = 3;
    m.Q = 4;
    m.step = 2;
    m.q = 2;
    m.weights = {1, 1, 2};
    m.bracket.assign(2, std::vector<NPoint>(2, NPoint(3)));
    m.bracket[0][1][2] = 1.0;
    m.bracket[1][0][2] = -1.0;
    return m;
}

GroupModel GroupModel::parse(const std::string& spec) {
    if (spec == "heisenberg1") return heisenberg1();
    const std::string prefix = "abelian:";
    if (spec.rfind(prefix, 0) == 0) {
        std::size_t pos = 0;
        int Q = 0;
        try {
            Q = std::stoi(spec.substr(prefix.size()), &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad group spec: " + spec);
        }
        if (pos != spec.size() - prefix.size()) throw std::invalid_argument("bad group spec: " + spec);
        return abelian(Q);
    }
    throw std::invalid_argument("unknown group spec: " + spec);
}

std::string GroupModel::name() const {
    return kind == NKind::Heisenberg1 ? "heisenberg1" : "abelian:" + std::to_string(Q);
}

static void check_dim(const GroupModel& m, const NPoint& a) {
    if (a.d != m.d) throw DimensionError("point dimension " + std::to_string(a.d) + " != model dimension " + std::to_string(m.d));
}

NPoint n_zero(const GroupModel& m) { return NPoint(m.d); }

NPoint n_bracket(const GroupModel& m, const NPoint& a, const NPoint& b) {
    check_dim(m, a);
    check_dim(m, b);
    NPoint r(m.d);
    if (m.step == 1) return r;
    for (int i = 0; i < m.q; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; j < m.q; ++j) {
            const double ab = a[i] * b[j];
            if (ab == 0.0) continue;
            const NPoint& br = m.bracket[i][j];
            for (int k = 0; k < m.d; ++k) r[k] += ab * br[k];
        }
    }
    return r;
}

NPoint n_multiply(const GroupModel& m, const NPoint& a, const NPoint& b) {
    check_dim(m, a);
    check_dim(m, b);
    NPoint r(m.d);
    for (int k = 0; k < m.d; ++k) r[k] = a[k] + b[k];
    if (m.step >= 2) {
        const NPoint br = n_bracket(m, a, b);
        for (int k = 0; k < m.d; ++k) r[k] += 0.5 * br[k];
    }
    return r;
}

NPoint n_inverse(const GroupModel& m, const NPoint& a) {
    check_dim(m, a);
    NPoint r(m.d);
    for (int k = 0; k < m.d; ++k) r[k] = -a[k];
    return r;
}

NPoint n_dilate(const GroupModel& m, double t, const NPoint& a) {
    check_dim(m, a);
    if (!(t > 0.0)) throw std::invalid_argument("dilation parameter must be positive");
    NPoint r(m.d);
    for (int k = 0; k < m.d; ++k) r[k] = std::pow(t, m.weights[k]) * a[k];
    return r;
}

GPoint g_identity(const GroupModel& m) { return {n_zero(m), 0.0}; }

// e^{uD} acts coordinatewise by e^{u w_k}; computed without pow(e^u, w) to keep precision for large |u|.
static NPoint exp_uD(const GroupModel& m, double u, const NPoint& a) {
    NPoint r(m.d);
    for (int k = 0; k < m.d; ++k) r[k] = std::exp(u * m.weights[k]) * a[k];
    return r;
}

GPoint g_multiply(const GroupModel& m, const GPoint& x, const GPoint& y) {
    return {n_multiply(m, x.z, exp_uD(m, x.u, y.z)), x.u + y.u};
}

GPoint g_inverse(const GroupModel& m, const GPoint& x) {
    return {exp_uD(m, -x.u, n_inverse(m, x.z)), -x.u};
}

double modular(const GroupModel& m, const GPoint& x) { return std::exp(-m.Q * x.u); }

std::vector<NPoint> horizontal_frame(const GroupModel& m, const NPoint& z) {
    check_dim(m, z);
    std::vector<NPoint> X(m.q, NPoint(m.d));
    for (int j = 0; j < m.q; ++j) {
        X[j][j] = 1.0;
        if (m.step >= 2) {
            NPoint e(m.d);
            e[j] = 1.0;
            const NPoint br = n_bracket(m, z, e);
            for (int k = 0; k < m.d; ++k) X[j][k] += 0.5 * br[k];
        }
    }
    return X;
}

}  // namespace nasolv
