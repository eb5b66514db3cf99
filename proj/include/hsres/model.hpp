#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsres {

using cplx = std::complex<double>;
using Point = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Boundary { Dirichlet, Neumann };

std::string to_string(Boundary bc);
Boundary parse_boundary(const std::string& s);

// +1 for Dirichlet, -1 for Neumann: sign in front of the exponential term.
inline double bc_sign(Boundary bc) { return bc == Boundary::Dirichlet ? 1.0 : -1.0; }

struct ModelError : std::domain_error {
    using std::domain_error::domain_error;
};
struct CoincidentPointsError : ModelError {
    using ModelError::ModelError;
};
struct PoleError : ModelError {
    using ModelError::ModelError;
};
struct OverflowError : ModelError {
    using ModelError::ModelError;
};

struct ModelParams {
    Boundary bc = Boundary::Dirichlet;
    double alpha = 0.0;
    Point y{0.0, 0.0, 1.0};

    double y3() const { return y[2]; }

    // Interaction point (0, 0, y3). Throws std::invalid_argument unless y3 > 0.
    static ModelParams make(Boundary bc, double alpha, double y3);
    void validate() const;
};

// Critical couplings at which z = 0 is a zero of Gamma.
inline double critical_alpha(Boundary bc, double y3) {
    return -bc_sign(bc) / (8.0 * kPi * y3);
}

// Characteristic function alpha - iz/(4 pi) +- e^{2 i y3 z}/(8 pi y3).
cplx gamma(const ModelParams& p, cplx z);
cplx gamma_derivative(const ModelParams& p, cplx z);

// Magnitude scale |alpha| + |z|/(4 pi) + |e^{2 i y3 z}|/(8 pi y3), overflow-safe
// (returned in log form by gamma_log_scale when huge).
double gamma_scale(const ModelParams& p, cplx z);

// |Gamma(z)| / gamma_scale(z), never overflows.
double gamma_relative(const ModelParams& p, cplx z);

// Gamma'(z)/Gamma(z), never overflows.
cplx gamma_log_derivative(const ModelParams& p, cplx z);

cplx green_free(cplx z, const Point& x, const Point& xp);
cplx green_halfspace(const ModelParams& p, cplx z, const Point& x, const Point& xp);
// G^{bc}_{z,y}(x): the half-space Green's function with source at y.
cplx green_at_source(const ModelParams& p, cplx z, const Point& x);

// Kernel of the full resolvent; PoleError when |Gamma| < pole_floor * scale,
// with scale |alpha| + |z|/(4 pi) + 1/(8 pi y3).
cplx resolvent_kernel(const ModelParams& p, cplx z, const Point& x, const Point& xp,
                      double pole_floor = 1e-13);

struct LaurentExpansion {
    int order = 0;
    // Coefficients of z^{-order}, ..., z^{0}.
    std::vector<cplx> coefficients;

    cplx evaluate(cplx z) const;
};

LaurentExpansion laurent_at_zero(const ModelParams& p);

double distance(const Point& a, const Point& b);
Point reflect(const Point& a);

}  // namespace hsres
