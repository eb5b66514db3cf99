#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "hsres/model.hpp"

namespace hsres {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Rectangle {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    void validate() const;
};

// A closed (or open) path made of straight segments and circular arcs.
struct ContourPiece {
    enum class Kind { Line, Arc } kind = Kind::Line;
    cplx a{}, b{};           // line endpoints
    cplx center{};           // arc data
    double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

    cplx point(double s) const;    // s in [0, 1]
    cplx tangent(double s) const;  // d point / ds
    double length() const;
};

struct Contour {
    std::vector<ContourPiece> pieces;

    static Contour rectangle(const Rectangle& r);  // counter-clockwise
    static Contour circle(cplx center, double radius);
    static Contour polyline(const std::vector<cplx>& vertices, bool closed);
    // Boundary of {|z| < R, Im z < eta}, counter-clockwise.
    static Contour lower_half_disk(double R, double eta);

    void append(const Contour& other);
    double length() const;
    std::vector<cplx> samples(int n) const;  // roughly uniform in arclength
};

struct IntegralResult {
    cplx value{};
    double error = 0.0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod panels along the contour.
IntegralResult contour_integral(const std::function<cplx(cplx)>& f, const Contour& c,
                                double rel_tol = 1e-11, double abs_tol = 1e-13,
                                int min_panels_per_piece = 16);

struct WindingResult {
    int count = 0;
    cplx raw{};
    bool certified = false;
    int nudges = 0;
    Rectangle rect{};     // rectangle actually used (after nudging)
    double radius = 0.0;  // region_count only: radius actually used
};

// Zeros of Gamma inside the rectangle, with multiplicity.
WindingResult winding_count(const ModelParams& p, const Rectangle& rect);

// Winding of Gamma along an arbitrary closed contour (no nudging).
WindingResult winding_count(const ModelParams& p, const Contour& c);

// Zeros of Gamma in {|z| < R, Im z < 0} together with z = 0, by the argument
// principle on a half-disk whose flat side sits just above the real axis.
WindingResult region_count(const ModelParams& p, double R);

// Bisection to absolute tolerance 1e-14 * max(1, |root|).
double bisect(const std::function<double(double)>& f, double lo, double hi);

}  // namespace hsres
