#include "hsres/model.hpp"

#include <algorithm>
#include <cmath>

namespace hsres {

namespace {

constexpr double kMaxExponent = 700.0;

// e^{2 i y3 z}, with an explicit guard instead of silent overflow.
cplx boundary_exp(double y3, cplx z) {
    const double growth = -2.0 * y3 * z.imag();
    if (growth > kMaxExponent)
        throw OverflowError("exponential term overflows for Im z = " + std::to_string(z.imag()));
    return std::exp(cplx(0.0, 2.0 * y3) * z);
}

cplx linear_part(const ModelParams& p, cplx z) { return p.alpha - cplx(0.0, 1.0) * z / (4.0 * kPi); }

}  // namespace

std::string to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

Boundary parse_boundary(const std::string& s) {
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "dirichlet" || t == "d") return Boundary::Dirichlet;
    if (t == "neumann" || t == "n") return Boundary::Neumann;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

ModelParams ModelParams::make(Boundary bc, double alpha, double y3) {
    ModelParams p;
    p.bc = bc;
    p.alpha = alpha;
    p.y = {0.0, 0.0, y3};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (!(y[2] > 0.0) || !std::isfinite(y[2]))
        throw std::invalid_argument("interaction height y3 must be positive and finite");
    if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
}

cplx gamma(const ModelParams& p, cplx z) {
    const double y3 = p.y3();
    return linear_part(p, z) + bc_sign(p.bc) * boundary_exp(y3, z) / (8.0 * kPi * y3);
}

cplx gamma_derivative(const ModelParams& p, cplx z) {
    const cplx i(0.0, 1.0);
    return -i / (4.0 * kPi) + bc_sign(p.bc) * i / (4.0 * kPi) * boundary_exp(p.y3(), z);
}

double gamma_scale(const ModelParams& p, cplx z) {
    const double y3 = p.y3();
    const double e = std::exp(std::min(-2.0 * y3 * z.imag(), kMaxExponent));
    return std::abs(p.alpha) + std::abs(z) / (4.0 * kPi) + e / (8.0 * kPi * y3);
}

double gamma_relative(const ModelParams& p, cplx z) {
    const double y3 = p.y3();
    const cplx a = linear_part(p, z);
    const double lin = std::abs(p.alpha) + std::abs(z) / (4.0 * kPi);
    const double growth = -2.0 * y3 * z.imag();
    if (growth < 300.0) {
        const cplx e = bc_sign(p.bc) * std::exp(cplx(0.0, 2.0 * y3) * z) / (8.0 * kPi * y3);
        return std::abs(a + e) / (lin + std::abs(e));
    }
    // Divide through by the dominant exponential term.
    const cplx inv_e = bc_sign(p.bc) * 8.0 * kPi * y3 * std::exp(cplx(0.0, -2.0 * y3) * z);
    return std::abs(a * inv_e + 1.0) / (lin * std::abs(inv_e) + 1.0);
}

cplx gamma_log_derivative(const ModelParams& p, cplx z) {
    const double y3 = p.y3();
    const cplx i(0.0, 1.0);
    const cplx a = linear_part(p, z);
    const double growth = -2.0 * y3 * z.imag();
    if (growth < 300.0) {
        const cplx e = bc_sign(p.bc) * std::exp(2.0 * i * y3 * z) / (8.0 * kPi * y3);
        return (-i / (4.0 * kPi) + 2.0 * i * y3 * e) / (a + e);
    }
    const cplx inv_e = bc_sign(p.bc) * 8.0 * kPi * y3 * std::exp(-2.0 * i * y3 * z);
    return (-i / (4.0 * kPi) * inv_e + 2.0 * i * y3) / (a * inv_e + 1.0);
}

double distance(const Point& a, const Point& b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

Point reflect(const Point& a) { return {a[0], a[1], -a[2]}; }

cplx green_free(cplx z, const Point& x, const Point& xp) {
    const double r = distance(x, xp);
    if (r == 0.0) throw CoincidentPointsError("green_free: coincident points");
    return std::exp(cplx(0.0, 1.0) * z * r) / (4.0 * kPi * r);
}

cplx green_halfspace(const ModelParams& p, cplx z, const Point& x, const Point& xp) {
    // |x - reflect(xp)| written so that swapping x and xp gives identical rounding.
    const double d0 = x[0] - xp[0], d1 = x[1] - xp[1], s2 = x[2] + xp[2];
    const double rim = std::sqrt(d0 * d0 + d1 * d1 + s2 * s2);
    if (rim == 0.0) throw CoincidentPointsError("green_halfspace: point coincides with image");
    const cplx image = std::exp(cplx(0.0, 1.0) * z * rim) / (4.0 * kPi * rim);
    return green_free(z, x, xp) - bc_sign(p.bc) * image;
}

cplx green_at_source(const ModelParams& p, cplx z, const Point& x) {
    return green_halfspace(p, z, x, p.y);
}

cplx resolvent_kernel(const ModelParams& p, cplx z, const Point& x, const Point& xp,
                      double pole_floor) {
    const cplx g = gamma(p, z);
    const double floor_scale =
        std::abs(p.alpha) + std::abs(z) / (4.0 * kPi) + 1.0 / (8.0 * kPi * p.y3());
    if (std::abs(g) < pole_floor * floor_scale)
        throw PoleError("resolvent_kernel: z is (numerically) a zero of Gamma");
    return green_halfspace(p, z, x, xp) + green_at_source(p, z, x) * green_at_source(p, z, xp) / g;
}

cplx LaurentExpansion::evaluate(cplx z) const {
    cplx s{};
    for (std::size_t j = 0; j < coefficients.size(); ++j)
        s += coefficients[j] * std::pow(z, static_cast<double>(j) - order);
    return s;
}

LaurentExpansion laurent_at_zero(const ModelParams& p) {
    const double y3 = p.y3();
    const double g0 = p.alpha + bc_sign(p.bc) / (8.0 * kPi * y3);
    const double tol = 1e-13 * (std::abs(p.alpha) + 1.0 / (8.0 * kPi * y3));
    LaurentExpansion e;
    const cplx i(0.0, 1.0);
    if (std::abs(g0) > tol) {
        e.order = 0;
        e.coefficients = {1.0 / g0};
    } else if (p.bc == Boundary::Dirichlet) {
        e.order = 2;
        e.coefficients = {-4.0 * kPi / y3, 8.0 / 3.0 * kPi * i, 4.0 * kPi * y3 / 9.0};
    } else {
        e.order = 1;
        e.coefficients = {2.0 * kPi * i, kPi * y3};
    }
    return e;
}

}  // namespace hsres
