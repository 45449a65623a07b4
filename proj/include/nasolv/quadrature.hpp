#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace nasolv {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Fn1 = std::function<double(double)>;

// Adaptive Gauss-Kronrod (61-point) on [a,b]; throws ConvergenceError when the
// error estimate stays above tol * max(1, |I|).
double integrate(const Fn1& f, double a, double b, double tol = 1e-12, double* errEst = nullptr);

// Same, but reports instead of throwing.
double integrate_nothrow(const Fn1& f, double a, double b, double tol, double* errEst);

// Composite Gauss-Legendre rule with `panels` panels of 20 nodes each on [a,b].
struct GaussRule {
    std::vector<double> x, w;
};
GaussRule gauss_legendre(double a, double b, int panels);

// Uniform grid helper: n points from a with step h.
std::vector<double> uniform_grid(double a, double h, int n);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nasolv
