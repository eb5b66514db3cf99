#include "hsres/expansion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "hsres/oracle.hpp"
#include "hsres/quadrature.hpp"

namespace hsres {

namespace {

const cplx I(0.0, 1.0);

void require_point(const ModelParams& p, const Point& x, const char* what) {
    if (!(x[2] > 0.0)) throw ExpansionError(std::string(what) + " must lie in x3 > 0");
    if (distance(x, p.y) == 0.0) throw CoincidentPointsError(std::string(what) + " coincides with y");
}

// n^3 tensor Gauss-Legendre over the box.
template <class F>
cplx tensor_gl(const Box& b, int n, F&& f) {
    const auto& r = quad::gauss_legendre(n);
    std::array<double, 3> mid{}, half{};
    for (int d = 0; d < 3; ++d) {
        mid[d] = 0.5 * (b.lo[d] + b.hi[d]);
        half[d] = 0.5 * (b.hi[d] - b.lo[d]);
    }
    cplx sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx row = 0.0;
            for (int k = 0; k < n; ++k) {
                const Point q{mid[0] + half[0] * r.nodes[i], mid[1] + half[1] * r.nodes[j],
                              mid[2] + half[2] * r.nodes[k]};
                row += r.weights[k] * f(q);
            }
            sum += r.weights[i] * r.weights[j] * row;
        }
    return sum * (half[0] * half[1] * half[2]);
}

bool is_critical(const ModelParams& p) {
    const double c = critical_alpha(p.bc, p.y3());
    return std::abs(p.alpha - c) <= 1e-14 * std::abs(c);
}

// kappa > 0 with Gamma(i kappa) = 0, if any.
std::optional<double> eigenvalue_kappa(const ModelParams& p) {
    const double s = bc_sign(p.bc), y3 = p.y3();
    auto f = [&](double k) { return p.alpha + k / (4.0 * kPi) + s * std::exp(-2.0 * y3 * k) / (8.0 * kPi * y3); };
    if (!(f(0.0) < 0.0)) return std::nullopt;
    const double hi = 4.0 * kPi * (std::abs(p.alpha) + 1.0 / (8.0 * kPi * y3)) + 1.0;
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

cplx bound_state_term(const ModelParams& p, double t, const Point& x, const Point& xp) {
    const auto kappa = eigenvalue_kappa(p);
    if (!kappa) return 0.0;
    const cplx z(0.0, *kappa);
    const cplx proj = -2.0 * z * residue_gamma_inv(p, z) * green_at_source(p, z, x) * green_at_source(p, z, xp);
    return std::exp(I * t * (*kappa) * (*kappa)) * proj;
}

cplx unperturbed(const ModelParams& p, double t, const Point& x, const Point& xp, cplx* image) {
    const cplx f = free_propagator(t, distance(x, xp));
    *image = -bc_sign(p.bc) * free_propagator(t, distance(reflect(x), xp));
    return f;
}

}  // namespace

double Box::diagonal() const { return distance(lo, hi); }

double Box::distance_to(const Point& q) const {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) {
        const double e = std::max({lo[d] - q[d], 0.0, q[d] - hi[d]});
        s += e * e;
    }
    return std::sqrt(s);
}

void TestFunction::validate(const ModelParams& p) const {
    for (int d = 0; d < 3; ++d)
        if (!(support.hi[d] > support.lo[d])) throw ExpansionError("support box is empty");
    if (!(support.lo[2] > 0.0)) throw ExpansionError("support box must lie in x3 > 0");
    if (!(width > 0.0)) throw ExpansionError("bump width must be positive");
    if (support.distance_to(p.y) < r_excl()) throw ExpansionError("support box comes within r_excl of y");
}

double TestFunction::operator()(const Point& x) const {
    if (support.distance_to(x) > 0.0) return 0.0;
    double r2 = 0.0;
    for (int d = 0; d < 3; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
    return amplitude * std::exp(-r2 / (2.0 * width * width));
}

TestFunction TestFunction::zero(const Box& support) {
    TestFunction w;
    w.support = support;
    w.center = {0.5 * (support.lo[0] + support.hi[0]), 0.5 * (support.lo[1] + support.hi[1]),
                0.5 * (support.lo[2] + support.hi[2])};
    w.amplitude = 0.0;
    return w;
}

cplx residue_gamma_inv(const ModelParams& p, cplx z_n) {
    p.validate();
    if (gamma_relative(p, z_n) > 1e-8) throw ExpansionError("residue_gamma_inv: z_n is not a zero of Gamma");
    const cplx e = std::exp(2.0 * I * p.y3() * z_n);
    const cplx d = gamma_derivative(p, z_n);
    if (std::abs(d) < 1e-10 * (1.0 + std::abs(e)) / (4.0 * kPi))
        throw ExpansionError("residue_gamma_inv: zero is not simple");
    return 1.0 / d;
}

cplx residue_closed_form(const ModelParams& p, cplx z_n) {
    if (p.bc != Boundary::Dirichlet) throw ExpansionError("closed-form residue is stated for Dirichlet");
    return 4.0 * kPi * I / (1.0 - std::exp(2.0 * I * p.y3() * z_n));
}

cplx residue_by_contour(const ModelParams& p, cplx z_n, double radius) {
    const auto c = Contour::circle(z_n, radius);
    const auto r = contour_integral([&](cplx z) { return 1.0 / gamma(p, z); }, c, 1e-12, 1e-14);
    return r.value / (2.0 * kPi * I);
}

double residue_radius(cplx z_n, const std::vector<Resonance>& zeros) {
    double r = 0.1;
    for (const auto& q : zeros) {
        const double d = std::abs(q.z - z_n);
        if (d > 1e-12 * std::max(1.0, std::abs(z_n))) r = std::min(r, 0.5 * d);
        // Mirrors are zeros too.
        const double dm = std::abs(-std::conj(q.z) - z_n);
        if (dm > 1e-12 * std::max(1.0, std::abs(z_n))) r = std::min(r, 0.5 * dm);
    }
    return r;
}

InnerProduct green_inner_product(const ModelParams& p, cplx z, const TestFunction& w, int n) {
    w.validate(p);
    if (w.amplitude == 0.0) return {};
    auto f = [&](const Point& q) { return green_at_source(p, z, q) * w(q); };
    InnerProduct ip;
    ip.value = tensor_gl(w.support, n, f);
    ip.error = std::abs(ip.value - tensor_gl(w.support, n / 2, f));
    return ip;
}

WaveCoefficient wave_coefficient_fj(const ModelParams& p, cplx z_j, const TestFunction& w0,
                                    const TestFunction& w1, const std::vector<Point>& grid, double tol) {
    const cplx res = residue_gamma_inv(p, z_j);
    const auto a1 = green_inner_product(p, z_j, w1);
    const auto a0 = green_inner_product(p, z_j, w0);
    const double err = a1.error + std::abs(z_j) * a0.error;
    const cplx coef = -res * (I * a1.value + z_j * a0.value);
    const double mag = std::abs(a1.value) + std::abs(z_j) * std::abs(a0.value);
    if (err > tol * mag) throw ExpansionError("wave_coefficient_fj: inner product quadrature did not converge");
    WaveCoefficient out;
    out.quadrature_error = err * std::abs(res);
    out.values.reserve(grid.size());
    for (const auto& x : grid) {
        require_point(p, x, "grid point");
        out.values.push_back(coef * green_at_source(p, z_j, x));
    }
    return out;
}

cplx wave_coefficient_by_contour(const ModelParams& p, cplx z_j, const TestFunction& w0,
                                 const TestFunction& w1, const Point& x, double radius, int n,
                                 int circle_nodes) {
    w0.validate(p);
    w1.validate(p);
    if (w0.support.distance_to(x) == 0.0 || w1.support.distance_to(x) == 0.0)
        throw ExpansionError("evaluation point must lie outside the supports");
    auto apply = [&](cplx z, const TestFunction& w) -> cplx {
        if (w.amplitude == 0.0) return 0.0;
        return tensor_gl(w.support, n, [&](const Point& q) { return resolvent_kernel(p, z, x, q) * w(q); });
    };
    // Trapezoid rule on the circle: geometric convergence for periodic analytic integrands.
    cplx sum = 0.0;
    for (int m = 0; m < circle_nodes; ++m) {
        const cplx e = std::polar(1.0, 2.0 * kPi * m / circle_nodes);
        const cplx z = z_j + radius * e;
        sum += (I * apply(z, w1) + z * apply(z, w0)) * radius * e;
    }
    return -sum / static_cast<double>(circle_nodes);
}

cplx resolvent_correction(const ModelParams& p, cplx z, const Point& x, const Point& xp) {
    return green_at_source(p, z, x) * green_at_source(p, z, xp) / gamma(p, z);
}

cplx free_propagator(double t, double r) {
    return std::pow(cplx(0.0, 4.0 * kPi * t), -1.5) * std::exp(I * r * r / (4.0 * t));
}

RayIntegral ray_integral(const std::function<cplx(cplx)>& kernel, double t, double phi, double u_start) {
    if (!(t > 0.0)) throw ExpansionError("t must be positive");
    if (!(phi < 0.0 && phi > -kPi / 2.0)) throw ExpansionError("ray angle must lie in (-pi/2, 0)");
    const cplx dir = std::polar(1.0, phi);
    auto F = [&](double u) -> cplx {
        const cplx z = dir * u;
        return std::exp(-I * t * z * z) * (kernel(z) - kernel(-z)) * 2.0 * z * dir / (2.0 * kPi * I);
    };
    // Gaussian decay e^{t u^2 sin 2 phi}; walk out until the integrand is negligible.
    const double step = 0.25 / std::sqrt(t * std::abs(std::sin(2.0 * phi)));
    double peak = 0.0, u = u_start;
    int quiet = 0;
    for (int i = 0; i < 100000 && quiet < 4; ++i) {
        u += step;
        const double m = std::abs(F(u));
        peak = std::max(peak, m);
        quiet = (m <= 1e-17 * peak) ? quiet + 1 : 0;
    }
    RayIntegral out;
    out.cutoff = u;
    const int panels = std::max(8, static_cast<int>((u - u_start) / step));
    const auto r = quad::adaptive(F, u_start, u, 1e-14 * std::max(1.0, peak), 1e-13, panels);
    out.value = r.value;
    out.error = r.error;
    return out;
}

RayIntegral background_integral(const ModelParams& p, double t, const Point& x, const Point& xp, double phi) {
    p.validate();
    if (is_critical(p)) throw ExpansionError("background integral needs a non-critical coupling");
    require_point(p, x, "x");
    require_point(p, xp, "xp");
    auto r = ray_integral([&](cplx z) { return resolvent_correction(p, z, x, xp); }, t, phi);
    if (r.error > 1e-10 * (1.0 + std::abs(r.value))) throw ExpansionError("background quadrature did not converge");
    return r;
}

namespace {

std::vector<Resonance> up_to_branch(const ModelParams& p, long n_max) {
    const long k = p.bc == Boundary::Dirichlet ? std::max(1L, n_max) : std::max(0L, n_max);
    return find_all(p, std::abs(find_branch(p, k).first.z) * (1.0 + 1e-9));
}

std::vector<Resonance> in_sector(const std::vector<Resonance>& all, double phi) {
    std::vector<Resonance> out;
    for (const auto& r : all) {
        const double a = std::arg(r.z);
        if (r.z.real() > 0.0 && a < 0.0 && a > phi) out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) {
        const double ma = std::abs(a.z), mb = std::abs(b.z);
        if (ma != mb) return ma < mb;
        return a.z.real() > b.z.real();
    });
    return out;
}

}  // namespace

std::vector<Resonance> sector_resonances(const ModelParams& p, long n_max, double phi) {
    return in_sector(up_to_branch(p, n_max), phi);
}

double minimal_time(const ModelParams& p, const Point& x, const Point& xp, const std::vector<Resonance>& sector) {
    if (sector.empty()) return 0.0;
    double rmin = INFINITY;
    for (const auto& r : sector) rmin = std::min(rmin, std::abs(r.z));
    return std::sqrt(2.0) / 2.0 * (distance(x, p.y) + distance(xp, p.y)) / rmin;
}

KernelExpansion schrodinger_kernel(const ModelParams& p, double t, const Point& x, const Point& xp,
                                   long n_max, double phi) {
    p.validate();
    if (is_critical(p)) throw ExpansionError("expansion needs a non-critical coupling");
    if (!(t > 0.0)) throw ExpansionError("t must be positive");
    require_point(p, x, "x");
    require_point(p, xp, "xp");
    const auto all = up_to_branch(p, n_max);
    for (int attempt = 0;; ++attempt) {
        bool near = false;
        for (const auto& r : all) near = near || std::abs(std::arg(r.z) - phi) < 1e-9;
        if (!near) break;
        if (attempt == 2) throw ExpansionError("a resonance sits on the background ray");
        phi -= 1e-6;
    }
    const auto sector = in_sector(all, phi);
    KernelExpansion k;
    k.ray_angle = phi;
    k.t_min = minimal_time(p, x, xp, sector);
    if (!(t > k.t_min)) throw ExpansionError("t must exceed the minimal time for convergence");
    k.free_term = unperturbed(p, t, x, xp, &k.image_term);
    k.bound_term = bound_state_term(p, t, x, xp);
    for (const auto& r : sector) {
        const cplx z = r.z;
        k.residue_sum -= 2.0 * z * std::exp(-I * t * z * z) * residue_gamma_inv(p, z) *
                         green_at_source(p, z, x) * green_at_source(p, z, xp);
    }
    k.terms = static_cast<int>(sector.size());
    const auto bg = background_integral(p, t, x, xp, phi);
    k.background = bg.value;
    k.background_error = bg.error;
    k.total = k.free_term + k.image_term + k.bound_term + k.residue_sum + k.background;
    return k;
}

DirectKernel propagator_by_contour(const std::function<cplx(cplx)>& kernel, double t, double X) {
    if (!(t > 0.0 && X > 0.0)) throw ExpansionError("t and X must be positive");
    auto G = [&](cplx z) { return std::exp(-I * t * z * z) * (kernel(z) - kernel(-z)) * 2.0 * z / (2.0 * kPi * I); };
    // Real segment: about t X^2 / (2 pi) oscillations.
    const int panels = std::max(16, static_cast<int>(t * X * X));
    const auto seg = quad::adaptive([&](double u) { return G(cplx(u, 0.0)); }, 0.0, X, 1e-14, 1e-13, panels);
    const auto arc = quad::adaptive(
        [&](double th) {
            const cplx z = std::polar(X, th);
            return G(z) * I * z;
        },
        0.0, -kPi / 4.0, 1e-14, 1e-13, panels / 4 + 8);
    const auto ray = ray_integral(kernel, t, -kPi / 4.0, X);
    DirectKernel out;
    out.value = seg.value + arc.value + ray.value;
    out.error = seg.error + arc.error + ray.error;
    out.X = X;
    return out;
}

DirectKernel schrodinger_kernel_direct(const ModelParams& p, double t, const Point& x, const Point& xp, double X) {
    p.validate();
    if (is_critical(p)) throw ExpansionError("kernel needs a non-critical coupling");
    require_point(p, x, "x");
    require_point(p, xp, "xp");
    // Keep the arc away from zeros of Gamma; zeros beyond X contribute below
    // e^{-2 t Re z |Im z|} and are dropped.
    for (int i = 0; i < 50; ++i) {
        double worst = INFINITY;
        for (int m = 0; m <= 512; ++m) worst = std::min(worst, gamma_relative(p, std::polar(X, -kPi / 4.0 * m / 512.0)));
        if (worst > 1e-3) break;
        X += 0.37;
    }
    cplx image;
    const cplx base = unperturbed(p, t, x, xp, &image) + image + bound_state_term(p, t, x, xp);
    auto d = propagator_by_contour([&](cplx z) { return resolvent_correction(p, z, x, xp); }, t, X);
    d.value += base;
    return d;
}

DecayReport truncated_resolvent_decay(const ModelParams& p, const Box& box, const std::vector<cplx>& z_samples,
                                      int j, double A, double delta) {
    p.validate();
    DecayReport rep;
    rep.j = j;
    rep.delta = delta;
    rep.delta_valid = delta > 0.0 && delta < 1.0 / (2.0 * p.y3());
    const Point ybar = reflect(p.y);
    for (int c = 0; c < 8; ++c) {
        const Point q{c & 1 ? box.hi[0] : box.lo[0], c & 2 ? box.hi[1] : box.lo[1], c & 4 ? box.hi[2] : box.lo[2]};
        rep.T = std::max(rep.T, 2.0 * distance(q, ybar));
    }
    std::vector<Point> pts;
    const int n = 5;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Point q;
                const int idx[3] = {a, b, c};
                for (int d = 0; d < 3; ++d) q[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * idx[d] / (n - 1.0);
                if (distance(q, p.y) > 1e-9) pts.push_back(q);
            }
    double zmax = 0.0;
    for (cplx z : z_samples) zmax = std::max(zmax, std::abs(z));
    const auto zeros = find_all(p, zmax + 1.0);

    // Least squares for log v = c + e log(1 + |z|) + T' (Im z)_-.
    std::vector<std::array<double, 3>> rows;
    std::vector<double> rhs;
    rep.polynomial_only = true;
    for (cplx z : z_samples) {
        if (z.imag() < -A - delta * std::log1p(std::abs(z))) continue;  // outside the growth region
        bool close = false;
        for (const auto& r : zeros) close = close || std::abs(r.z - z) < 1e-3 || std::abs(-std::conj(r.z) - z) < 1e-3;
        if (close) continue;
        double g = 0.0;
        for (const auto& q : pts) g = std::max(g, std::abs(green_at_source(p, z, q)));
        const double v = g * g / std::abs(gamma(p, z));
        const double neg = std::max(0.0, -z.imag());
        if (neg > 0.0) rep.polynomial_only = false;
        rows.push_back({1.0, std::log1p(std::abs(z)), neg});
        rhs.push_back(std::log(v));
    }
    rep.samples_used = static_cast<int>(rows.size());
    const int m = rep.polynomial_only ? 2 : 3;
    if (static_cast<int>(rows.size()) < m + 1) throw ExpansionError("not enough usable samples for the fit");
    double N[3][3] = {}, bvec[3] = {};
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int a = 0; a < m; ++a) {
            bvec[a] += rows[r][a] * rhs[r];
            for (int b = 0; b < m; ++b) N[a][b] += rows[r][a] * rows[r][b];
        }
    // Gaussian elimination with partial pivoting.
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(N[r][c]) > std::abs(N[piv][c])) piv = r;
        std::swap(N[c], N[piv]);
        std::swap(bvec[c], bvec[piv]);
        for (int r = c + 1; r < m; ++r) {
            const double f = N[r][c] / N[c][c];
            for (int b = c; b < m; ++b) N[r][b] -= f * N[c][b];
            bvec[r] -= f * bvec[c];
        }
    }
    double sol[3] = {};
    for (int c = m - 1; c >= 0; --c) {
        double s = bvec[c];
        for (int b = c + 1; b < m; ++b) s -= N[c][b] * sol[b];
        sol[c] = s / N[c][c];
    }
    rep.exponent = sol[1];
    rep.rate = m == 3 ? sol[2] : 0.0;
    rep.exponent_ok = rep.exponent <= j - 1 + 0.2;
    rep.rate_ok = rep.rate <= rep.T + 0.1;

    for (double R : {50.0, 100.0, 200.0, 400.0}) {
        int cnt = 0;
        for (const auto& r : find_all(p, R))
            if (r.z.imag() >= -A - delta * std::log1p(std::abs(r.z))) cnt += r.multiplicity;
        rep.radii.push_back(R);
        rep.region_counts.push_back(cnt);
    }
    const auto& c = rep.region_counts;
    rep.finitely_many = c[c.size() - 1] == c[c.size() - 2];
    return rep;
}

}  // namespace hsres
