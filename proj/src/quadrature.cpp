#include "nasolv/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

namespace nasolv {

double integrate_nothrow(const Fn1& f, double a, double b, double tol, double* errEst) {
    double err = 0.0;
    double L1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err, &L1);
    if (errEst) *errEst = err;
    return v;
}

double integrate(const Fn1& f, double a, double b, double tol, double* errEst) {
    double err = 0.0;
    const double v = integrate_nothrow(f, a, b, tol, &err);
    if (errEst) *errEst = err;
    if (!std::isfinite(v) || err > 100.0 * tol * std::max(1.0, std::abs(v))) {
        std::ostringstream os;
        os << "quadrature on [" << a << "," << b << "] did not converge: value " << v << ", error estimate " << err;
        throw ConvergenceError(os.str());
    }
    return v;
}

GaussRule gauss_legendre(double a, double b, int panels) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    GaussRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            if (ab[i] == 0.0) {
                r.x.push_back(c);
                r.w.push_back(half * wt[i]);
            } else {
                r.x.push_back(c - half * ab[i]);
                r.w.push_back(half * wt[i]);
                r.x.push_back(c + half * ab[i]);
                r.w.push_back(half * wt[i]);
            }
        }
    }
    return r;
}

std::vector<double> uniform_grid(double a, double h, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + h * i;
    return g;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nasolv
