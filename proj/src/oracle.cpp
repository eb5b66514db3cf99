#include "hsres/oracle.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>

#include "hsres/quadrature.hpp"

namespace hsres {

namespace {

constexpr double kNudge = 1e-5;
constexpr int kMaxNudges = 5;
constexpr double kBoundaryFloor = 1e-8;

double min_relative_on(const ModelParams& p, const Contour& c, int n) {
    double m = INFINITY;
    for (cplx z : c.samples(n)) m = std::min(m, gamma_relative(p, z));
    return m;
}

int boundary_samples(const ModelParams& p, const Contour& c) {
    return std::max(1024, static_cast<int>(8.0 * c.length() * p.y3()));
}

}  // namespace

void Rectangle::validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
        throw std::invalid_argument("rectangle must satisfy re_min < re_max and im_min < im_max");
}

cplx ContourPiece::point(double s) const {
    if (kind == Kind::Line) return a + s * (b - a);
    const double t = theta0 + s * (theta1 - theta0);
    return center + radius * cplx(std::cos(t), std::sin(t));
}

cplx ContourPiece::tangent(double s) const {
    if (kind == Kind::Line) return b - a;
    const double t = theta0 + s * (theta1 - theta0);
    return radius * (theta1 - theta0) * cplx(-std::sin(t), std::cos(t));
}

double ContourPiece::length() const {
    if (kind == Kind::Line) return std::abs(b - a);
    return radius * std::abs(theta1 - theta0);
}

Contour Contour::rectangle(const Rectangle& r) {
    r.validate();
    return polyline({{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                     {r.re_min, r.im_max}},
                    true);
}

Contour Contour::circle(cplx center, double radius) {
    ContourPiece arc;
    arc.kind = ContourPiece::Kind::Arc;
    arc.center = center;
    arc.radius = radius;
    arc.theta0 = 0.0;
    arc.theta1 = 2.0 * kPi;
    return Contour{{arc}};
}

Contour Contour::polyline(const std::vector<cplx>& v, bool closed) {
    Contour c;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i + 1 < n + (closed ? 1 : 0); ++i) {
        ContourPiece seg;
        seg.a = v[i];
        seg.b = v[(i + 1) % n];
        c.pieces.push_back(seg);
    }
    return c;
}

Contour Contour::lower_half_disk(double R, double eta) {
    if (!(R > std::abs(eta))) throw std::invalid_argument("half disk radius too small");
    const double phi = std::asin(eta / R);
    const double x = R * std::cos(phi);
    Contour c;
    ContourPiece top;
    top.a = {x, eta};
    top.b = {-x, eta};
    ContourPiece arc;
    arc.kind = ContourPiece::Kind::Arc;
    arc.radius = R;
    arc.theta0 = kPi - phi;
    arc.theta1 = 2.0 * kPi + phi;
    c.pieces = {top, arc};
    return c;
}

void Contour::append(const Contour& other) {
    pieces.insert(pieces.end(), other.pieces.begin(), other.pieces.end());
}

double Contour::length() const {
    double s = 0.0;
    for (const auto& p : pieces) s += p.length();
    return s;
}

std::vector<cplx> Contour::samples(int n) const {
    std::vector<cplx> out;
    const double total = length();
    for (const auto& p : pieces) {
        const int m = std::max(2, static_cast<int>(std::ceil(n * p.length() / total)));
        for (int j = 0; j < m; ++j) out.push_back(p.point((j + 0.5) / m));
    }
    return out;
}

IntegralResult contour_integral(const std::function<cplx(cplx)>& f, const Contour& c,
                                double rel_tol, double abs_tol, int min_panels_per_piece) {
    IntegralResult res;
    res.converged = true;
    for (const auto& piece : c.pieces) {
        auto g = [&](double s) { return f(piece.point(s)) * piece.tangent(s); };
        const auto q = quad::adaptive(g, 0.0, 1.0, std::max(abs_tol, rel_tol), rel_tol,
                                      min_panels_per_piece);
        res.value += q.value;
        res.error += q.error;
        res.converged = res.converged && q.converged;
    }
    res.converged = res.converged && res.error <= std::max(abs_tol, rel_tol * (1.0 + std::abs(res.value)));
    return res;
}

WindingResult winding_count(const ModelParams& p, const Contour& c) {
    p.validate();
    const double total_len = c.length();
    const double budget = 2.0 * kPi * 1e-4;  // 1e-3 of the 0.1 certification margin
    cplx integral{};
    for (const auto& piece : c.pieces) {
        const double len = piece.length();
        const int n0 = std::max(64, static_cast<int>(std::ceil(4.0 * len * p.y3() / kPi)));
        auto g = [&](double s) { return gamma_log_derivative(p, piece.point(s)) * piece.tangent(s); };
        const auto q = quad::adaptive(g, 0.0, 1.0, budget * len / total_len, 0.0, n0);
        integral += q.value;
    }
    WindingResult w;
    w.raw = integral / cplx(0.0, 2.0 * kPi);
    w.count = static_cast<int>(std::lround(w.raw.real()));
    w.certified = std::abs(w.raw - cplx(w.count, 0.0)) < 0.1;
    return w;
}

WindingResult winding_count(const ModelParams& p, const Rectangle& rect) {
    rect.validate();
    Rectangle r = rect;
    for (int nudge = 0; nudge <= kMaxNudges; ++nudge) {
        const Contour c = Contour::rectangle(r);
        if (min_relative_on(p, c, boundary_samples(p, c)) >= kBoundaryFloor) {
            WindingResult w = winding_count(p, c);
            if (w.certified) {
                w.nudges = nudge;
                w.rect = r;
                return w;
            }
        }
        r.re_min -= kNudge;
        r.re_max += kNudge;
        r.im_min -= kNudge;
        r.im_max -= kNudge;
    }
    throw OracleError("winding_count: zero on or near the boundary persists after nudging");
}

WindingResult region_count(const ModelParams& p, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("region_count: R must be positive");
    const double eta = std::min(1e-3 / p.y3(), 0.5 * R);
    double r = R;
    for (int nudge = 0; nudge <= kMaxNudges; ++nudge) {
        const Contour c = Contour::lower_half_disk(r, eta);
        if (min_relative_on(p, c, boundary_samples(p, c)) >= kBoundaryFloor) {
            WindingResult w = winding_count(p, c);
            if (w.certified) {
                w.nudges = nudge;
                w.radius = r;
                return w;
            }
        }
        r -= kNudge;
    }
    throw OracleError("region_count: zero on or near the boundary persists after nudging");
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw OracleError("bisect: no sign change on the bracket");
    auto tol = [](double a, double b) {
        return std::abs(b - a) <= 1e-14 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    boost::uintmax_t iters = 400;
    const auto r = boost::math::tools::bisect(f, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace hsres
