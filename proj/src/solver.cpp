#include "hsres/solver.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hsres/oracle.hpp"
#include "hsres/parallel.hpp"

namespace hsres {

namespace {

// theta cot(theta) and ln(sin(theta)/theta) with series near theta = 0.
void small_angle_parts(double theta, double& cot_part, double& log_part) {
    const double t2 = theta * theta;
    cot_part = 1.0 - t2 / 3.0 - t2 * t2 / 45.0;
    log_part = -t2 / 6.0 - t2 * t2 / 180.0;
}

double reduced_equation(const ModelParams& p, double theta) {
    const double y3 = p.y3();
    double cot_part, log_part;
    if (theta < 1e-4) {
        small_angle_parts(theta, cot_part, log_part);
    } else {
        const double s = std::sin(theta);
        cot_part = theta * std::cos(theta) / s;
        log_part = std::log(bc_sign(p.bc) * s / theta);
    }
    return -8.0 * kPi * y3 * p.alpha - cot_part - log_part;
}

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi) {
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    boost::uintmax_t iters = 300;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

// Shrinks the open interval (lo, hi) from both ends until f < 0 at the left
// and f > 0 at the right; the equation tends to -inf / +inf at the ends.
std::pair<double, double> shrink_bracket(const std::function<double(double)>& f, double lo, double hi) {
    const double width = hi - lo;
    const double ulp_floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
    double dl = 1e-9 * width, dr = 1e-9 * width;
    double a = lo + dl, b = hi - dr;
    while (!(f(a) < 0.0) && dl > ulp_floor) {
        dl *= 1e-3;
        a = lo + dl;
    }
    while (!(f(b) > 0.0) && dr > ulp_floor) {
        dr *= 1e-3;
        b = hi - dr;
    }
    if (!(f(a) < 0.0) || !(f(b) > 0.0)) throw SolverError("branch bracket has no sign change");
    return {a, b};
}

Resonance mirror(const Resonance& r) {
    Resonance m = r;
    m.z = -std::conj(r.z);
    return m;
}

// Real part of Gamma on the imaginary axis, z = i b.
double axis_gamma(const ModelParams& p, double b) {
    const double y3 = p.y3();
    return p.alpha + b / (4.0 * kPi) + bc_sign(p.bc) * std::exp(-2.0 * y3 * b) / (8.0 * kPi * y3);
}

}  // namespace

std::string to_string(ResonanceKind kind) {
    switch (kind) {
        case ResonanceKind::ComplexPair: return "ComplexPair";
        case ResonanceKind::AntiBound: return "AntiBound";
        case ResonanceKind::ZeroEigenvalue: return "ZeroEigenvalue";
        case ResonanceKind::ZeroResonance: return "ZeroResonance";
        case ResonanceKind::LowPair: return "LowPair";
        case ResonanceKind::Exceptional: return "Exceptional";
    }
    return "Unknown";
}

double g_of_a(double y3, double a) {
    const double t = 2.0 * y3 * a;
    if (t == 0.0) return 1.0;
    return std::sin(t) / t;
}

double h_of_a(const ModelParams& p, double a) {
    const double t = 2.0 * p.y3() * a;
    const double cot_part = (t == 0.0) ? 1.0 : t * std::cos(t) / std::sin(t);
    return std::exp(-8.0 * kPi * p.alpha * p.y3() - cot_part);
}

double branch_equation(const ModelParams& p, double a) { return reduced_equation(p, 2.0 * p.y3() * std::abs(a)); }

std::pair<double, double> branch_interval(const ModelParams& p, long k) {
    const double y3 = p.y3();
    const double kk = static_cast<double>(k);
    if (p.bc == Boundary::Dirichlet) {
        if (k < 1) throw std::invalid_argument("Dirichlet branches start at k = 1");
        return {kk * kPi / y3, (2.0 * kk + 1.0) * kPi / (2.0 * y3)};
    }
    if (k < 0) throw std::invalid_argument("Neumann branches start at k = 0");
    return {(2.0 * kk + 1.0) * kPi / (2.0 * y3), (kk + 1.0) * kPi / y3};
}

double curve_imag(const ModelParams& p, double a) {
    const double y3 = p.y3();
    const double t = 2.0 * y3 * std::abs(a);
    if (t < 1e-4) {
        double c, l;
        small_angle_parts(t, c, l);
        return l / (2.0 * y3);
    }
    return std::log(bc_sign(p.bc) * std::sin(t) / t) / (2.0 * y3);
}

double on_curve_error(const ModelParams& p, cplx z) {
    const double b = curve_imag(p, z.real());
    return std::abs(z.imag() - b) / std::max(std::abs(z.imag()), 1e-300);
}

double search_depth(const ModelParams& p, double a_max) {
    const double y3 = p.y3();
    // A zero satisfies e^{-2 y3 b} = 8 pi y3 |alpha - i z/(4 pi)|; iterate the
    // resulting bound on -b to a fixed point.
    double B = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double next =
            std::max(0.0, std::log(8.0 * kPi * y3 * (std::abs(p.alpha) + (std::abs(a_max) + B) / (4.0 * kPi))) / (2.0 * y3));
        if (std::abs(next - B) < 1e-12 * (1.0 + B)) {
            B = next;
            break;
        }
        B = next;
    }
    return B + 2.0 / y3;
}

cplx newton_polish(const ModelParams& p, cplx z, int max_steps) {
    cplx best = z;
    double best_rel = gamma_relative(p, z);
    for (int i = 0; i < max_steps; ++i) {
        const cplx d = gamma_derivative(p, z);
        if (d == 0.0) break;
        const cplx dz = gamma(p, z) / d;
        z -= dz;
        const double rel = gamma_relative(p, z);
        if (rel < best_rel) {
            best = z;
            best_rel = rel;
        }
        if (std::abs(dz) <= 2e-16 * std::abs(z)) break;
    }
    return best;
}

ResonancePair find_branch(const ModelParams& p, long k) {
    p.validate();
    const auto [lo, hi] = branch_interval(p, k);
    auto f = [&](double a) { return branch_equation(p, a); };
    const auto [a0, a1] = shrink_bracket(f, lo, hi);
    const double a = solve_bracketed(f, a0, a1);
    const cplx z0(a, curve_imag(p, a));
    cplx z = newton_polish(p, z0);
    if (!(z.real() > lo && z.real() < hi)) z = z0;
    Resonance r{z, k, ResonanceKind::ComplexPair, 1};
    return {r, mirror(r)};
}

std::optional<Resonance> detect_zero(const ModelParams& p) {
    p.validate();
    const double y3 = p.y3();
    const double g0 = p.alpha + bc_sign(p.bc) / (8.0 * kPi * y3);
    if (std::abs(g0) > 1e-13 * (std::abs(p.alpha) + 1.0 / (8.0 * kPi * y3))) return std::nullopt;
    if (p.bc == Boundary::Dirichlet) return Resonance{0.0, 0, ResonanceKind::ZeroEigenvalue, 2};
    return Resonance{0.0, 0, ResonanceKind::ZeroResonance, 1};
}

std::optional<Resonance> find_antibound(const ModelParams& p) {
    p.validate();
    const double y3 = p.y3();
    const double crit = critical_alpha(p.bc, y3);
    const bool exists = p.bc == Boundary::Dirichlet ? p.alpha < crit : p.alpha > crit;
    if (!exists || detect_zero(p)) return std::nullopt;
    // Dirichlet: f decreasing on b < 0 with f(0) < 0; Neumann: increasing with f(0) > 0.
    auto f = [&](double b) { return bc_sign(p.bc) * axis_gamma(p, b); };
    double lo = -1.0 / y3;
    while (f(lo) <= 0.0) {
        lo *= 2.0;
        if (-2.0 * y3 * lo > 700.0) throw SolverError("antibound bracket exceeds the representable range");
    }
    const double b = solve_bracketed(f, lo, 0.0);
    return Resonance{cplx(0.0, b), 0, ResonanceKind::AntiBound, 1};
}

std::optional<ResonancePair> find_low_pair(const ModelParams& p) {
    p.validate();
    if (p.bc != Boundary::Dirichlet || detect_zero(p)) return std::nullopt;
    const double y3 = p.y3();
    if (!(-8.0 * kPi * y3 * p.alpha - 1.0 < 0.0)) return std::nullopt;
    // Strictly increasing on (0, pi/(2 y3)), from -8 pi y3 alpha - 1 to +inf.
    auto f = [&](double a) { return branch_equation(p, a); };
    const double hi0 = kPi / (2.0 * y3);
    double hi = hi0 * (1.0 - 1e-9);
    while (!(f(hi) > 0.0)) hi = hi0 - 1e-3 * (hi0 - hi);
    const double a = solve_bracketed(f, 0.0, hi);
    const cplx z0(a, curve_imag(p, a));
    cplx z = newton_polish(p, z0);
    if (!(z.real() > 0.0 && z.real() < hi0)) z = z0;
    Resonance r{z, 0, ResonanceKind::LowPair, 1};
    return ResonancePair{r, mirror(r)};
}

std::vector<Resonance> find_exceptional(const ModelParams& p) {
    p.validate();
    std::vector<Resonance> out;
    const double y3 = p.y3();
    const double expo = 8.0 * kPi * y3 * p.alpha;
    if (expo > 700.0 || expo < std::log(kPi / 2.0) - 1.0) return out;
    const double theta_star = std::exp(expo);
    const long n = std::lround((theta_star - kPi / 2.0) / kPi);
    if (n < 0) return out;
    const double theta = kPi / 2.0 + static_cast<double>(n) * kPi;
    const double alpha_n = std::log(theta) / (8.0 * kPi * y3);
    const double tol = 1e-12 * (1.0 + std::abs(p.alpha));
    if (std::abs(p.alpha - alpha_n) > tol) return out;
    const bool even = n % 2 == 0;
    if ((p.bc == Boundary::Dirichlet) != even) return out;
    const long branch = p.bc == Boundary::Dirichlet ? n / 2 : (n - 1) / 2;
    const cplx z(theta / (2.0 * y3), -std::log(theta) / (2.0 * y3));
    if (gamma_relative(p, z) > 1e-11) {
        // Adjacent lines are 1/(8 y3 theta) apart; below 4 tol they cannot be
        // told apart from alpha alone and the residual decides.
        if (1.0 / (8.0 * y3 * theta) < 4.0 * tol) return out;
        throw ConsistencyError("closed-form exceptional resonance fails the Gamma residual check");
    }
    Resonance r{z, branch, ResonanceKind::Exceptional, 1};
    out.push_back(mirror(r));
    out.push_back(r);
    return out;
}

std::vector<Resonance> find_all(const ModelParams& p, double R) {
    p.validate();
    if (!(R > 0.0)) throw std::invalid_argument("find_all: R must be positive");
    const double y3 = p.y3();
    std::vector<Resonance> out;
    auto keep = [&](const Resonance& r) {
        if (std::abs(r.z) < R) out.push_back(r);
    };
    if (auto z0 = detect_zero(p)) out.push_back(*z0);
    if (auto ab = find_antibound(p)) keep(*ab);
    if (auto lp = find_low_pair(p)) {
        keep(lp->first);
        keep(lp->second);
    }
    std::vector<long> ks;
    for (long k = p.bc == Boundary::Dirichlet ? 1 : 0;; ++k) {
        if (branch_interval(p, k).first >= R) break;
        ks.push_back(k);
    }
    (void)y3;
    const auto pairs = parallel_map(ks.size(), [&](std::size_t i) { return find_branch(p, ks[i]); });
    for (const auto& pr : pairs) {
        keep(pr.first);
        keep(pr.second);
    }
    for (const auto& e : find_exceptional(p)) {
        bool matched = false;
        for (auto& r : out) {
            if (std::abs(r.z - e.z) <= 1e-8 * (1.0 + std::abs(e.z))) {
                r.kind = ResonanceKind::Exceptional;
                matched = true;
            }
        }
        if (!matched && std::abs(e.z) < R)
            throw ConsistencyError("exceptional resonance not reproduced by the branch solver");
    }
    std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

int total_multiplicity(const std::vector<Resonance>& rs) {
    int s = 0;
    for (const auto& r : rs) s += r.multiplicity;
    return s;
}

int asymptotic_count(double y3, double R) {
    return 2 * static_cast<int>(std::floor(y3 * R / kPi - 0.25));
}

CountReport count_exact(const ModelParams& p, double R, bool check) {
    const WindingResult w = region_count(p, R);
    CountReport rep;
    rep.R = R;
    rep.radius_used = w.radius;
    rep.exact_count = total_multiplicity(find_all(p, w.radius));
    rep.asymptotic_count = asymptotic_count(p.y3(), R);
    rep.oracle_count = w.count;
    if (check && rep.exact_count != rep.oracle_count)
        throw ConsistencyError("solver count " + std::to_string(rep.exact_count) + " differs from oracle count " +
                               std::to_string(rep.oracle_count));
    return rep;
}

}  // namespace hsres
