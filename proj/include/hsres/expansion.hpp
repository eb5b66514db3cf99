#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "hsres/model.hpp"
#include "hsres/solver.hpp"

namespace hsres {

struct ExpansionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Box {
    Point lo{}, hi{};
    double diagonal() const;
    // Euclidean distance from q to the closed box (0 inside).
    double distance_to(const Point& q) const;
};

// exp(-|x - center|^2 / (2 width^2)) on the support box, zero outside.
struct TestFunction {
    enum class Kind { GaussianBump };
    Kind kind = Kind::GaussianBump;
    Point center{};
    double width = 0.25;
    Box support{};
    double amplitude = 1.0;

    // Exclusion radius around y: 10% of the box diagonal.
    double r_excl() const { return 0.1 * support.diagonal(); }
    // Throws ExpansionError unless the box lies in x3 > 0 and keeps r_excl away from y.
    void validate(const ModelParams& p) const;
    double operator()(const Point& x) const;
    static TestFunction zero(const Box& support);
};

// 1/Gamma'(z_n). ExpansionError unless z_n is a simple zero.
cplx residue_gamma_inv(const ModelParams& p, cplx z_n);
// 4 pi i / (1 - e^{2 i y3 z_n}) (Dirichlet only).
cplx residue_closed_form(const ModelParams& p, cplx z_n);
// (1/2 pi i) * contour integral of 1/Gamma on |z - z_n| = radius.
cplx residue_by_contour(const ModelParams& p, cplx z_n, double radius);
// min(0.1, half the distance from z_n to the nearest other listed zero).
double residue_radius(cplx z_n, const std::vector<Resonance>& zeros);

struct InnerProduct {
    cplx value{};
    double error = 0.0;  // |Q(n) - Q(n/2)|
};
// Integral of G_{z,y}(x') w(x') over the support box, n^3 Gauss-Legendre nodes.
InnerProduct green_inner_product(const ModelParams& p, cplx z, const TestFunction& w, int n = 32);

struct WaveCoefficient {
    std::vector<cplx> values;
    double quadrature_error = 0.0;
};
// f_j(x) = -Res(1/Gamma) [i <G, w1> + z_j <G, w0>] G_{z_j,y}(x) on the grid.
WaveCoefficient wave_coefficient_fj(const ModelParams& p, cplx z_j, const TestFunction& w0,
                                    const TestFunction& w1, const std::vector<Point>& grid,
                                    double tol = 1e-8);
// -(1/2 pi i) times the contour integral of (i R(z) w1 + z R(z) w0)(x) around z_j,
// with R(z) w evaluated by direct n^3 quadrature of the full resolvent kernel.
cplx wave_coefficient_by_contour(const ModelParams& p, cplx z_j, const TestFunction& w0,
                                 const TestFunction& w1, const Point& x, double radius,
                                 int n = 24, int circle_nodes = 64);

// Rank-one part of the resolvent kernel, Gamma^{-1}(z) G_{z,y}(x) G_{z,y}(xp).
cplx resolvent_correction(const ModelParams& p, cplx z, const Point& x, const Point& xp);

// (4 pi i t)^{-3/2} exp(i r^2 / (4 t)): kernel of exp(-i t H0), H0 = -Laplacian.
cplx free_propagator(double t, double r);

struct KernelExpansion {
    cplx free_term{};
    cplx image_term{};   // -+ free propagator at the reflected point
    cplx bound_term{};   // eigenvalue with Im z > 0, when present
    cplx residue_sum{};
    cplx background{};
    cplx total{};
    double background_error = 0.0;
    double ray_angle = 0.0;
    double t_min = 0.0;
    int terms = 0;
};

// (1/2 pi i) integral over z = e^{i phi} u, u > 0, of e^{-i t z^2} (K(z) - K(-z)) 2 z dz.
struct RayIntegral {
    cplx value{};
    double error = 0.0;
    double cutoff = 0.0;  // u beyond which the integrand is below 1e-16 relative
};
RayIntegral ray_integral(const std::function<cplx(cplx)>& kernel, double t, double phi,
                         double u_start = 0.0);

// Background term on the ray arg z = phi (default -pi/4).
RayIntegral background_integral(const ModelParams& p, double t, const Point& x, const Point& xp,
                                double phi = -kPi / 4.0);

// Sector resonances with branch index <= n_max, sorted by |z| then sign of Re z.
std::vector<Resonance> sector_resonances(const ModelParams& p, long n_max, double phi = -kPi / 4.0);

// t_0 = (sqrt 2 / 2) (|x - y| + |xp - y|) / r_min.
double minimal_time(const ModelParams& p, const Point& x, const Point& xp,
                    const std::vector<Resonance>& sector);

// Kernel of exp(-i t H) as free + image + bound + residue sum + background.
KernelExpansion schrodinger_kernel(const ModelParams& p, double t, const Point& x, const Point& xp,
                                   long n_max = 40, double phi = -kPi / 4.0);

// Independent evaluation of the same kernel: real segment [0, X], arc |z| = X
// down to arg -pi/4, then the ray; no residues. X is moved off resonance moduli.
struct DirectKernel {
    cplx value{};
    double error = 0.0;
    double X = 0.0;
};
DirectKernel propagator_by_contour(const std::function<cplx(cplx)>& kernel, double t, double X);
DirectKernel schrodinger_kernel_direct(const ModelParams& p, double t, const Point& x, const Point& xp,
                                       double X = 10.0);

struct DecayReport {
    int j = 0;
    double delta = 0.0;
    bool delta_valid = false;     // delta < 1/(2 y3)
    double exponent = 0.0;        // fitted p in (1 + |z|)^p
    double rate = 0.0;            // fitted T' in e^{T' (Im z)_-}
    double T = 0.0;               // 2 * max distance from the reflected source over the box
    bool exponent_ok = false;     // p <= j - 1 + 0.2
    bool rate_ok = false;         // T' <= T + 0.1
    bool polynomial_only = false; // every sample has Im z >= 0
    int samples_used = 0;         // inside the region and away from zeros
    std::vector<int> region_counts;  // resonances in the region for growing R
    std::vector<double> radii;
    bool finitely_many = false;
};

// Fits log(|Gamma^{-1}| max |G G|) over (x, xp) samples in the box, using the
// z samples with Im z >= -A - delta ln(1 + |z|).
DecayReport truncated_resolvent_decay(const ModelParams& p, const Box& box,
                                      const std::vector<cplx>& z_samples, int j = 0,
                                      double A = 1.0, double delta = 0.25);

}  // namespace hsres
