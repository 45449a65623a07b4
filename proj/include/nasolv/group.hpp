#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace nasolv {

inline constexpr int kMaxDim = 8;

enum class NKind { Abelian, Heisenberg1 };

// Point of N in exponential coordinates; fixed capacity to keep hot loops allocation-free.
struct NPoint {
    int d = 0;
    std::array<double, kMaxDim> c{};

    NPoint() = default;
    explicit NPoint(int dim) : d(dim) {}
    NPoint(std::initializer_list<double> v);
    static NPoint from(const std::vector<double>& v);

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }
    std::vector<double> vec() const { return {c.begin(), c.begin() + d}; }
};

struct GPoint {
    NPoint z;
    double u = 0.0;
};

struct GroupModel {
    NKind kind = NKind::Abelian;
    int d = 2;
    int Q = 2;
    int step = 1;
    int q = 2;                      // dimension of the first layer
    std::vector<int> weights;       // dilation weight of each coordinate
    // bracket[i][j] = [e_i, e_j] for first-layer basis vectors, as a d-vector
    std::vector<std::vector<NPoint>> bracket;

    static GroupModel abelian(int Q);
    static GroupModel heisenberg1();
    // "abelian:Q" or "heisenberg1"
    static GroupModel parse(const std::string& spec);
    std::string name() const;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

NPoint n_zero(const GroupModel& m);
NPoint n_bracket(const GroupModel& m, const NPoint& a, const NPoint& b);
NPoint n_multiply(const GroupModel& m, const NPoint& a, const NPoint& b);
NPoint n_inverse(const GroupModel& m, const NPoint& a);
NPoint n_dilate(const GroupModel& m, double t, const NPoint& a);

GPoint g_identity(const GroupModel& m);
GPoint g_multiply(const GroupModel& m, const GPoint& x, const GPoint& y);
GPoint g_inverse(const GroupModel& m, const GPoint& x);
double modular(const GroupModel& m, const GPoint& x);

// Left-invariant horizontal frame of N at z: X_j(z) = e_j + ½[z, e_j], j < q.
std::vector<NPoint> horizontal_frame(const GroupModel& m, const NPoint& z);

}  // namespace nasolv
