// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "hsres/expansion.hpp"
#include "hsres/lambertw.hpp"
#include "hsres/model.hpp"
#include "hsres/oracle.hpp"
#include "hsres/semiclassical.hpp"
#include "hsres/solver.hpp"

using namespace hsres;

namespace {

const cplx I(0.0, 1.0);

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    if (o.pass) o.detail = why;
    o.pass = false;
}

std::string fmt(double v) { return cli::format_double(v); }

// 1: fig1 plot data.
Outcome fig1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto path = std::filesystem::temp_directory_path() / "hsres_acceptance_fig1.txt";
    std::ostringstream out, err;
    const int code = cli::run({"fig1", "--out", path.string()}, out, err);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (code != 0) fail(o, "fig1 exited with " + std::to_string(code));
    const auto p = ModelParams::make(Boundary::Dirichlet, 0.0, 1.0);
    std::ifstream f(path);
    int rows = 0;
    double worst_res = 0.0, worst_curve = 0.0;
    for (double re, im; f >> re >> im;) {
        ++rows;
        const cplx z(re, im);
        if (!(re > kPi)) fail(o, "row with Re z <= pi");
        worst_res = std::max(worst_res, gamma_relative(p, z));
        // Curve for y3 = 1: e^{-2 Im z} = 2 a / |sin 2a| on the upper-sign branches.
        const double curve = -0.5 * std::log(2.0 * re / std::abs(std::sin(2.0 * re)));
        worst_curve = std::max(worst_curve, std::abs(im - curve) / std::abs(im));
    }
    if (rows != 100) fail(o, std::to_string(rows) + " rows");
    if (!(worst_res <= 1e-12)) fail(o, "residual " + fmt(worst_res));
    if (!(worst_curve <= 1e-10)) fail(o, "curve error " + fmt(worst_curve));
    if (!(secs < 5.0)) fail(o, "took " + fmt(secs) + " s");
    if (o.pass) o.detail = "100 rows, max residual " + fmt(worst_res) + ", max curve error " + fmt(worst_curve);
    return o;
}

// 2: solver count equals the winding count on |z| < 30.
Outcome oracle_equivalence() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ua(-2.0, 2.0), uy(0.2, 5.0);
    std::bernoulli_distribution coin(0.5);
    int total = 0;
    for (int i = 0; i < 20; ++i) {
        const auto bc = coin(rng) ? Boundary::Dirichlet : Boundary::Neumann;
        const double alpha = ua(rng), y3 = uy(rng);
        const auto p = ModelParams::make(bc, alpha, y3);
        const auto w = region_count(p, 30.0);
        const int n = total_multiplicity(find_all(p, w.radius));
        total += n;
        if (!w.certified) fail(o, "uncertified winding for case " + std::to_string(i));
        if (n != w.count)
            fail(o, "case " + std::to_string(i) + " (" + to_string(bc) + ", alpha " + fmt(alpha) + ", y3 " + fmt(y3) +
                        "): solver " + std::to_string(n) + " vs winding " + std::to_string(w.count));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!(secs < 60.0)) fail(o, "took " + fmt(secs) + " s");
    if (o.pass) o.detail = "20 cases, " + std::to_string(total) + " zeros in total";
    return o;
}

// 3: counting law.
Outcome counting() {
    Outcome o;
    const auto p = ModelParams::make(Boundary::Dirichlet, 0.0, 1.0);
    std::ostringstream d;
    for (double R : {50.0, 100.0, 200.0, 400.0}) {
        const auto rep = count_exact(p, R, true);
        const int law = 2 * static_cast<int>(std::floor(p.y3() * R / kPi - 0.25));
        if (std::abs(rep.exact_count - law) > 4)
            fail(o, "R = " + fmt(R) + ": " + std::to_string(rep.exact_count) + " vs " + std::to_string(law));
        d << "R=" << R << ":" << rep.exact_count << "/" << law << " ";
        if (R == 400.0) {
            const double ratio = rep.exact_count / (2.0 * p.y3() * R / kPi);
            if (std::abs(ratio - 1.0) > 0.02) fail(o, "ratio " + fmt(ratio) + " at R = 400");
            d << "ratio " << ratio;
        }
    }
    if (o.pass) o.detail = d.str();
    return o;
}

// Sign changes of the real function Gamma(i b), b in (-50/y3, 0).
int axis_sign_changes(const ModelParams& p) {
    auto f = [&](double b) {
        return p.alpha + b / (4.0 * kPi) + bc_sign(p.bc) * std::exp(-2.0 * p.y3() * b) / (8.0 * kPi * p.y3());
    };
    int n = 0;
    double prev_b = -1e-9, prev = f(prev_b);
    for (double b = -1.05e-9; b > -50.0 / p.y3(); b *= 1.01) {
        const double v = f(b);
        if ((v < 0.0) != (prev < 0.0)) ++n;
        prev = v;
        prev_b = b;
    }
    return n;
}

// 4: antibound thresholds and the zero classification.
Outcome thresholds() {
    Outcome o;
    int checked = 0;
    for (double y3 : {0.5, 1.0, 2.0})
        for (auto bc : {Boundary::Dirichlet, Boundary::Neumann}) {
            const double crit = critical_alpha(bc, y3);
            const double step = std::abs(crit) * 0.2;
            for (int i = -5; i <= 5; ++i) {
                const double alpha = i == 0 ? crit : crit + i * step;
                const auto p = ModelParams::make(bc, alpha, y3);
                const bool expect = i != 0 && (bc == Boundary::Dirichlet ? alpha < crit : alpha > crit);
                const auto ab = find_antibound(p);
                ++checked;
                if (ab.has_value() != expect) fail(o, to_string(bc) + " alpha " + fmt(alpha) + ": existence mismatch");
                if (i != 0 && (axis_sign_changes(p) == 1) != expect)
                    fail(o, to_string(bc) + " alpha " + fmt(alpha) + ": axis scan disagrees");
                if (ab && !(ab->z.real() == 0.0 && ab->z.imag() < 0.0 && gamma_relative(p, ab->z) <= 1e-12))
                    fail(o, "antibound is not a root on the negative imaginary axis");
                const auto zero = detect_zero(p);
                if (i == 0) {
                    if (!zero) {
                        fail(o, "no zero detected at the critical coupling");
                        continue;
                    }
                    if (bc == Boundary::Dirichlet &&
                        !(zero->kind == ResonanceKind::ZeroEigenvalue && zero->multiplicity == 2))
                        fail(o, "Dirichlet zero must be a double eigenvalue");
                    if (bc == Boundary::Neumann &&
                        !(zero->kind == ResonanceKind::ZeroResonance && zero->multiplicity == 1))
                        fail(o, "Neumann zero must be a simple resonance");
                    // Multiplicity from a small winding circle.
                    const auto w = winding_count(p, Contour::circle(0.0, 1e-3));
                    if (w.count != zero->multiplicity) fail(o, "winding multiplicity differs at the critical coupling");
                } else if (zero) {
                    fail(o, "zero detected off the critical coupling");
                }
            }
        }
    if (o.pass) o.detail = std::to_string(checked) + " couplings over 6 sweeps";
    return o;
}

// 5: exceptional lines.
Outcome exceptional() {
    Outcome o;
    std::ostringstream d;
    auto check = [&](Boundary bc, long k, double y3) {
        const std::string tag = "lnpi2k:" + std::to_string(k);
        const double alpha = cli::parse_alpha(tag, bc == Boundary::Dirichlet ? "dirichlet" : "neumann", y3);
        const auto p = ModelParams::make(bc, alpha, y3);
        const double theta = kPi / 2.0 + k * kPi;
        const cplx z(theta / (2.0 * y3), -std::log(theta) / (2.0 * y3));
        const double r = std::abs(gamma(p, z)) / gamma_scale(p, z);
        if (!(r <= 1e-11)) fail(o, to_string(bc) + " k=" + std::to_string(k) + " residual " + fmt(r));
        const auto ex = find_exceptional(p);
        bool found = false;
        for (const auto& e : ex) found = found || std::abs(e.z - z) <= 1e-12 * std::abs(z);
        if (!found) fail(o, to_string(bc) + " k=" + std::to_string(k) + ": solver missed the line");
        d << to_string(bc)[0] << k << ":" << r << " ";
    };
    for (double y3 : {1.0, 0.6}) {
        check(Boundary::Dirichlet, 0, y3);
        check(Boundary::Dirichlet, 2, y3);
        check(Boundary::Neumann, 1, y3);
        check(Boundary::Neumann, 3, y3);
    }
    if (o.pass) o.detail = d.str();
    return o;
}

// 6: Lambert W residuals and the tail estimate.
Outcome lambert() {
    Outcome o;
    double worst = 0.0;
    int n = 0;
    for (int im = 0; im < 20; ++im)
        for (int ia = 0; ia < 10; ++ia) {
            const double mod = std::pow(10.0, -3.0 + 6.0 * im / 19.0);
            const cplx w = std::polar(mod, -kPi + 2.0 * kPi * (ia + 0.5) / 10.0);
            for (long k = -50; k <= 50; ++k) {
                const cplx W = lambert_w(k, w).value;
                const double r = std::abs(W * std::exp(W) - w) / std::max(1.0, std::abs(w));
                worst = std::max(worst, r);
                ++n;
            }
        }
    if (!(worst <= 1e-13)) fail(o, "residual " + fmt(worst));
    int tails = 0;
    double ratio = 0.0;
    for (double h : {1e-1, 1e-2, 1e-3})
        for (double beta : {0.5, 1.5, 2.0})
            for (double eps : {0.25, 0.5})
                for (auto bc : {Boundary::Dirichlet, Boundary::Neumann})
                    for (auto s : {CouplingSign::Plus, CouplingSign::Minus}) {
                        SemiclassicalParams sp;
                        sp.h = h;
                        sp.beta = beta;
                        sp.sign = s;
                        sp.bc = bc;
                        for (const auto& r : semiclassical_roots(sp, eps)) {
                            ++tails;
                            ratio = std::max(ratio, r.tail_error / r.tail_bound);
                            if (!(r.tail_error <= r.tail_bound)) fail(o, "tail estimate violated at h " + fmt(h));
                        }
                    }
    if (o.pass)
        o.detail = std::to_string(n) + " evaluations, max residual " + fmt(worst) + "; " + std::to_string(tails) +
                   " tail checks, max measured/bound " + fmt(ratio);
    return o;
}

// 7: semiclassical bounds at h = 1e-3, eps = 1/2.
Outcome semiclassical() {
    Outcome o;
    const double h = 1e-3, eps = 0.5;
    double band_slack = 0.0, cross = 0.0;
    int band = 0, para = 0, roots = 0;
    for (auto bc : {Boundary::Dirichlet, Boundary::Neumann})
        for (auto s : {CouplingSign::Plus, CouplingSign::Minus}) {
            SemiclassicalParams sp;
            sp.h = h;
            sp.bc = bc;
            sp.sign = s;
            const std::string tag = to_string(bc) + "/" + to_string(s);

            sp.beta = 0.5;
            const double rhs = 72.0 * kPi * kPi / sp.y3 / (eps * eps) * std::pow(h, 3.0 - 2.0 * sp.beta);
            for (const auto& c : verify_band_beta_lt1(sp, eps)) {
                ++band;
                band_slack = std::max(band_slack, c.slack);
                if (!c.ok() || !(c.slack <= rhs)) fail(o, "band violated for " + tag + " k=" + std::to_string(c.k));
            }
            const auto cc = cross_check_solver(sp, eps, 1e-9);
            roots += cc.lambert_count;
            cross = std::max(cross, cc.max_rel_diff);
            if (!cc.ok) fail(o, "solver disagreement for " + tag + ": " + fmt(cc.max_rel_diff));

            sp.beta = 2.0;
            for (const auto& c : verify_parabola_beta_gt1(sp, eps)) {
                ++para;
                if (!c.ok()) fail(o, "parabola violated for " + tag + " k=" + std::to_string(c.k));
            }
            for (const auto& c : verify_envelope_beta_gt1(sp, eps))
                if (!c.ok()) fail(o, "envelope violated for " + tag + " k=" + std::to_string(c.k));
        }
    if (band == 0 || para == 0) fail(o, "no roots in the window");
    if (o.pass)
        o.detail = std::to_string(band) + " band checks (max slack " + fmt(band_slack) + "), " + std::to_string(para) +
                   " parabola checks, " + std::to_string(roots) + " roots cross-checked (max diff " + fmt(cross) + ")";
    return o;
}

// 8: residues of 1/Gamma.
Outcome residues() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ua(-2.0, 2.0), uy(0.2, 5.0);
    int checked = 0;
    double worst_closed = 0.0, worst_contour = 0.0;
    while (checked < 50) {
        const auto p = ModelParams::make(Boundary::Dirichlet, ua(rng), uy(rng));
        const auto zeros = find_all(p, 15.0);
        for (std::size_t i = 0; i < zeros.size() && checked < 50; i += 2) {
            const auto& r = zeros[i];
            if (r.kind == ResonanceKind::AntiBound || r.multiplicity != 1) continue;
            const cplx a = residue_gamma_inv(p, r.z);
            const cplx b = residue_closed_form(p, r.z);
            const cplx c = residue_by_contour(p, r.z, residue_radius(r.z, zeros));
            worst_closed = std::max(worst_closed, std::abs(a - b) / std::abs(b));
            worst_contour = std::max(worst_contour, std::abs(a - c) / std::abs(a));
            ++checked;
        }
    }
    if (!(worst_closed <= 1e-10)) fail(o, "closed form differs by " + fmt(worst_closed));
    if (!(worst_contour <= 1e-8)) fail(o, "contour differs by " + fmt(worst_contour));
    if (o.pass)
        o.detail = "50 resonances, closed form " + fmt(worst_closed) + ", contour " + fmt(worst_contour);
    return o;
}

// 9: kernel expansion.
Outcome kernel() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = ModelParams::make(Boundary::Dirichlet, 0.0, 1.0);
    const Point x{0, 0, 1.5}, xp{0, 0, 2};
    const double t = 2.0;
    const auto k40 = schrodinger_kernel(p, t, x, xp, 40);
    const auto k60 = schrodinger_kernel(p, t, x, xp, 60);
    const auto tilt = schrodinger_kernel(p, t, x, xp, 40, -kPi / 4.0 + 1e-6);
    const auto direct = schrodinger_kernel_direct(p, t, x, xp);
    const double d_direct = std::abs(k40.total - direct.value) / std::abs(direct.value);
    const double d_n = std::abs(k40.total - k60.total) / std::abs(k40.total);
    const double d_tilt = std::abs(k40.total - tilt.total) / std::abs(k40.total);
    if (!(d_direct <= 1e-6)) fail(o, "direct contour differs by " + fmt(d_direct));
    if (!(d_n <= 1e-8)) fail(o, "truncation 40 vs 60 differs by " + fmt(d_n));
    if (!(d_tilt <= 1e-8)) fail(o, "ray tilt changes the result by " + fmt(d_tilt));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!(secs < 120.0)) fail(o, "took " + fmt(secs) + " s");
    if (o.pass)
        o.detail = "direct " + fmt(d_direct) + ", n_max " + fmt(d_n) + ", tilt " + fmt(d_tilt) + ", " +
                   std::to_string(k40.terms) + " terms";
    return o;
}

// 10: structural properties.
Outcome properties() {
    Outcome o;
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> ua(-2.0, 2.0), uy(0.2, 5.0), ure(-20.0, 20.0), uim(-3.0, 1.0),
        uc(-1.0, 1.0), uh(0.3, 3.0);
    int n = 0;
    for (int i = 0; i < 200; ++i) {
        const auto bc = i % 2 ? Boundary::Neumann : Boundary::Dirichlet;
        const auto p = ModelParams::make(bc, ua(rng), uy(rng));
        const cplx z(ure(rng), uim(rng));
        // Gamma(-conj z) = conj Gamma(z).
        const cplx g = gamma(p, z), gm = gamma(p, -std::conj(z));
        if (!(std::abs(gm - std::conj(g)) <= 1e-13 * gamma_scale(p, z))) fail(o, "conjugate symmetry");
        // Dirichlet Green's function vanishes on the boundary; Neumann has zero normal derivative.
        const Point b{uc(rng), uc(rng), 0.0};
        const cplx gb = green_at_source(p, z, b);
        if (bc == Boundary::Dirichlet) {
            if (!(std::abs(gb) <= 1e-14 * (1.0 + std::abs(green_free(z, b, p.y))))) fail(o, "Dirichlet trace");
        } else {
            // Even extension across x3 = 0, so the normal derivative vanishes.
            const double e = 1e-5;
            const cplx up = green_at_source(p, z, {b[0], b[1], e}), down = green_at_source(p, z, {b[0], b[1], -e});
            if (!(std::abs(up - down) <= 1e-13 * std::abs(gb))) fail(o, "Neumann normal derivative");
        }
        // Resolvent kernel symmetry R(x, x') = R(x', x).
        const Point x{uc(rng), uc(rng), uh(rng)}, xp{uc(rng), uc(rng), uh(rng)};
        try {
            const cplx r1 = resolvent_kernel(p, z, x, xp), r2 = resolvent_kernel(p, z, xp, x);
            if (!(std::abs(r1 - r2) <= 1e-12 * std::abs(r1))) fail(o, "resolvent symmetry");
        } catch (const PoleError&) {
        }
        ++n;
    }

    // Linearity of the wave coefficient in the data.
    const auto p = ModelParams::make(Boundary::Dirichlet, 0.0, 1.0);
    const Box box{{0.2, -0.3, 1.5}, {0.8, 0.3, 2.1}};
    TestFunction w1;
    w1.center = {0.5, 0.0, 1.8};
    w1.width = 0.2;
    w1.support = box;
    TestFunction w0 = w1;
    w0.center = {0.4, 0.1, 1.7};
    w0.amplitude = 0.5;
    TestFunction w2 = w1;
    w2.amplitude = -3.0;
    const auto none = TestFunction::zero(box);
    const std::vector<Point> grid{{-0.5, 0, 1.2}, {0.0, 0.4, 0.5}};
    const cplx zj = find_branch(p, 1).first.z;
    const auto f0 = wave_coefficient_fj(p, zj, w0, none, grid);
    const auto f1 = wave_coefficient_fj(p, zj, none, w1, grid);
    const auto f2 = wave_coefficient_fj(p, zj, none, w2, grid);
    const auto fb = wave_coefficient_fj(p, zj, w0, w1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(std::abs(f2.values[i] + 3.0 * f1.values[i]) <= 1e-13 * std::abs(f2.values[i])))
            fail(o, "wave coefficient homogeneity");
        if (!(std::abs(fb.values[i] - f0.values[i] - f1.values[i]) <= 1e-13 * std::abs(fb.values[i])))
            fail(o, "wave coefficient additivity");
    }

    // Winding counts add over a 2x2 split of a rectangle.
    const auto q = ModelParams::make(Boundary::Neumann, 0.3, 0.7);
    const Rectangle whole{0.1, 20.3, -6.1, -0.05};
    const double mr = 10.17, mi = -2.9;
    const int total = winding_count(q, whole).count;
    int parts = 0;
    for (const auto& r : {Rectangle{whole.re_min, mr, whole.im_min, mi}, Rectangle{mr, whole.re_max, whole.im_min, mi},
                          Rectangle{whole.re_min, mr, mi, whole.im_max}, Rectangle{mr, whole.re_max, mi, whole.im_max}})
        parts += winding_count(q, r).count;
    if (total != parts) fail(o, "winding additivity " + std::to_string(total) + " vs " + std::to_string(parts));
    if (total == 0) fail(o, "empty additivity rectangle");

    if (o.pass) o.detail = std::to_string(n) + " random points, wave coefficient linearity, winding " + std::to_string(total);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {1, "resonance curve plot data", fig1},
        {2, "solver matches the argument principle", oracle_equivalence},
        {3, "counting law", counting},
        {4, "antibound thresholds and zero at the critical coupling", thresholds},
        {5, "exceptional couplings", exceptional},
        {6, "Lambert W residuals and series tail", lambert},
        {7, "semiclassical localization", semiclassical},
        {8, "residues of the inverse characteristic function", residues},
        {9, "Schrodinger kernel expansion", kernel},
        {10, "structural properties", properties},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
    return failed == 0 ? 0 : 1;
}
