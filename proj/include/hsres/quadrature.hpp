#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace hsres::quad {

using cplx = std::complex<double>;

// Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached per n; safe to call from several threads.
const Rule& gauss_legendre(int n);

struct Result {
    cplx value{};
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Stops when the summed
// error estimate is below max(abs_tol, rel_tol * |value|).
Result adaptive(const std::function<cplx(double)>& f, double a, double b,
                double abs_tol, double rel_tol, int initial_panels = 1,
                int max_panels = 200000);

// Fixed n-point Gauss-Legendre on [a, b] split into `panels` equal pieces.
cplx fixed(const std::function<cplx(double)>& f, double a, double b, int n,
           int panels = 1);

}  // namespace hsres::quad
