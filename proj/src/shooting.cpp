#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nasolv/metric.hpp"

namespace nasolv {

namespace {

struct Shooter {
    const GroupModel& m;
    GPoint target;
    int steps;

    int dim() const { return m.d + 1; }

    HJStateG state(const Eigen::VectorXd& p) const {
        HJStateG s{NPoint(m.d), 0.0, NPoint(m.d), p[m.d]};
        for (int k = 0; k < m.d; ++k) s.zeta[k] = p[k];
        return s;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& p) const {
        const HJStateG e = hj_flow_g(m, state(p), 1.0, steps);
        Eigen::VectorXd r(dim());
        for (int k = 0; k < m.d; ++k) r[k] = e.z[k] - target.z[k];
        r[m.d] = e.u - target.u;
        return r;
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& p, const Eigen::VectorXd& r0) const {
        Eigen::MatrixXd J(dim(), dim());
        for (int j = 0; j < dim(); ++j) {
            const double h = 1e-7 * (1.0 + std::abs(p[j]));
            Eigen::VectorXd q = p;
            q[j] += h;
            J.col(j) = (residual(q) - r0) / h;
        }
        return J;
    }

    // Damped Newton from p; returns final residual norm.
    double solve(Eigen::VectorXd& p, int maxIter, double tol) const {
        Eigen::VectorXd r = residual(p);
        double nr = r.norm();
        for (int it = 0; it < maxIter && nr > tol; ++it) {
            if (!std::isfinite(nr)) return nr;
            const Eigen::MatrixXd J = jacobian(p, r);
            const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
            if (!step.allFinite()) return std::numeric_limits<double>::infinity();
            double lambda = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 20; ++ls) {
                const Eigen::VectorXd q = p + lambda * step;
                const Eigen::VectorXd rq = residual(q);
                const double nq = rq.norm();
                if (std::isfinite(nq) && nq < (1.0 - 1e-4 * lambda) * nr) {
                    p = q;
                    r = rq;
                    nr = nq;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) break;
        }
        return nr;
    }
};

}  // namespace

ShootingResult shoot_distance_g(const GroupModel& m, const GPoint& x, const GPoint& y, const ShootingOptions& opt) {
    const GPoint w = g_multiply(m, g_inverse(m, x), y);
    Shooter sh{m, w, opt.steps};
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double scale = std::abs(w.u);
    for (int k = 0; k < m.d; ++k) scale = std::max(scale, std::abs(w.z[k]));
    scale = 1.0 + scale;

    ShootingResult best;
    for (int s = 0; s < opt.maxStarts && best.convergedStarts < opt.wantConverged; ++s) {
        Eigen::VectorXd p(sh.dim());
        if (s == 0) {
            for (int k = 0; k < m.d; ++k) p[k] = w.z[k];
            p[m.d] = w.u;
        } else {
            const double amp = scale * (0.3 + 0.1 * s);
            for (int k = 0; k < sh.dim(); ++k) p[k] = amp * gauss(rng);
        }
        best.startsUsed = s + 1;
        const double res = sh.solve(p, opt.maxNewton, opt.tol);
        if (!(res <= opt.tol * scale)) continue;
        const HJStateG st = sh.state(p);
        const double len = std::sqrt(2.0 * hamiltonian_g(m, st));
        ++best.convergedStarts;
        if (!best.converged || len < best.length) {
            best.converged = true;
            best.length = len;
            best.residual = res;
            best.initial = st;
        }
    }
    return best;
}

}  // namespace nasolv
