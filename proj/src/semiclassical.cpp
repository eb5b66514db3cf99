#include "hsres/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hsres/parallel.hpp"
#include "hsres/solver.hpp"

namespace hsres {

namespace {

const cplx I(0.0, 1.0);

struct EnvelopeConstants {
    double upper_coeff, lower_coeff, rhs_constant;
};

double rhs_with(const SemiclassicalParams& p, double eps, double c) {
    const double L = p.log_coupling();
    const double den = (p.bc == Boundary::Dirichlet ? 2.0 : 4.0) * kPi * kPi * p.y3;
    return (1.0 + c * std::pow(eps, -4.0)) / (4.0 * kPi * p.y3 * p.y3) * std::pow(p.h, p.beta + 1.0) * L +
           std::pow(eps, -2.0) * std::pow(p.h, 2.0 * p.beta - 1.0) / den;
}

// R in x = L1 - L2 + R, from R = -log1p((R - L2)/L1). Avoids the cancellation
// in x - (L1 - L2) when |L1| is large.
cplx measured_tail(cplx L1) {
    const cplx L2 = std::log(L1);
    cplx R = 0.0;
    for (int i = 0; i < 200; ++i) {
        const cplx u = (R - L2) / L1;
        const cplx next = -2.0 * std::atanh(u / (2.0 + u));
        if (std::abs(next - R) <= 1e-17 * std::max(1.0, std::abs(R))) return next;
        R = next;
    }
    throw LambertError("tail iteration did not converge");
}

double rhs_constant(const SemiclassicalParams& p) {
    return (p.bc == Boundary::Dirichlet && p.sign == CouplingSign::Minus) ? 24.0 : 96.0;
}

}  // namespace

std::string to_string(CouplingSign s) { return s == CouplingSign::Plus ? "plus" : "minus"; }

CouplingSign parse_sign(const std::string& s) {
    if (s == "plus" || s == "+") return CouplingSign::Plus;
    if (s == "minus" || s == "-") return CouplingSign::Minus;
    throw std::invalid_argument("sign must be plus or minus: " + s);
}

void SemiclassicalParams::validate() const {
    if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("h must lie in (0, 1]");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
    if (!(y3 > 0.0) || !std::isfinite(y3)) throw std::invalid_argument("y3 must be positive");
}

double SemiclassicalParams::log_w() const { return sign_value() * 8.0 * kPi * y3 * std::pow(h, -beta); }

double SemiclassicalParams::log_coupling() const { return std::log(8.0 * kPi * y3 * std::pow(h, -beta)); }

ModelParams SemiclassicalParams::effective() const {
    validate();
    return ModelParams::make(bc, sign_value() * std::pow(h, -beta), y3);
}

cplx gamma_scaled(const SemiclassicalParams& p, cplx z) {
    p.validate();
    return p.sign_value() * std::pow(p.h, -p.beta) - I * z / (4.0 * kPi * p.h) +
           bc_sign(p.bc) * std::exp(2.0 * I * p.y3 * z / p.h) / (8.0 * kPi * p.y3);
}

double scaled_residual_scale(const SemiclassicalParams& p, cplx z) {
    return std::pow(p.h, -p.beta) + std::abs(z) / (4.0 * kPi * p.h) + 1.0 / (8.0 * kPi * p.y3);
}

cplx resonance_wk_unpolished(const SemiclassicalParams& p, long k) {
    p.validate();
    const auto tail = remainder_bound_log(k, p.log_w(), p.shift());
    if (!tail.valid) throw LambertError("resonance_wk: |L2/L1| exceeds 1/2 on this branch");
    const cplx x = lambert_w_log(k, p.log_w(), p.shift()).value;
    return I * p.h / (2.0 * p.y3) * (x - p.log_w());
}

cplx resonance_wk(const SemiclassicalParams& p, long k) {
    const cplx z0 = resonance_wk_unpolished(p, k);
    const ModelParams e = p.effective();
    return p.h * newton_polish(e, z0 / p.h);
}

bool check_branch_window(const SemiclassicalParams& p, long k, cplx z, double eps) {
    const double m = std::abs(z);
    if (m < eps || m > 1.0 / eps) return true;
    const double v = std::abs(static_cast<double>(k)) * kPi * p.h / p.y3;
    return v >= eps / 2.0 && v <= 2.0 / eps;
}

std::vector<SemiclassicalRoot> semiclassical_roots(const SemiclassicalParams& p, double eps) {
    p.validate();
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    const long K = static_cast<long>(std::floor(2.0 * p.y3 / (eps * kPi * p.h))) + 2;
    auto one = [&](std::size_t i) -> std::optional<SemiclassicalRoot> {
        const long k = -K - 1 + static_cast<long>(i);
        try {
            SemiclassicalRoot r;
            r.k = k;
            r.z = resonance_wk(p, k);
            r.residual = std::abs(gamma_scaled(p, r.z)) / scaled_residual_scale(p, r.z);
            const auto tb = remainder_bound_log(k, p.log_w(), p.shift());
            const cplx L1 = branch_log(k, p.log_w(), p.shift());
            r.tail_ratio = tb.ratio;
            r.tail_bound = tb.bound;
            r.tail_error = std::abs(measured_tail(L1) - tb.first_term);
            return r;
        } catch (const LambertError&) {
            return std::nullopt;
        }
    };
    const auto all = parallel_map(static_cast<std::size_t>(2 * K + 3), one);
    std::vector<SemiclassicalRoot> out;
    for (const auto& r : all) {
        if (!r) continue;
        const cplx z = r->z;
        const double m = std::abs(z);
        if (!(z.imag() < 0.0) || std::abs(z.real()) <= 1e-12 * m) continue;
        if (m < eps || m > 1.0 / eps) continue;
        bool dup = false;
        for (const auto& q : out) dup = dup || std::abs(q.z - z) <= 1e-12 * m;
        if (!dup) out.push_back(*r);
    }
    return out;
}

std::vector<BandCheck> verify_band_beta_lt1(const SemiclassicalParams& p, double eps) {
    if (!(p.beta < 1.0)) throw std::invalid_argument("band check needs beta < 1");
    const double bound = 72.0 * kPi * kPi / p.y3 * std::pow(eps, -2.0) * std::pow(p.h, 3.0 - 2.0 * p.beta);
    std::vector<BandCheck> out;
    for (const auto& r : semiclassical_roots(p, eps)) {
        BandCheck b;
        b.z = r.z;
        b.k = r.k;
        const double center = p.h / (2.0 * p.y3) * std::log(2.0 * p.y3 * std::abs(r.z.real()) / p.h);
        b.value = -r.z.imag() - center;
        b.bound = bound;
        b.slack = b.value;
        // The lower bound is an identity on the resonance curve; allow rounding only.
        const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(r.z.imag()) + std::abs(center));
        b.lower_ok = b.value >= -rounding;
        b.upper_ok = b.value <= bound;
        out.push_back(b);
    }
    return out;
}

double parabola_curvature(const SemiclassicalParams& p, long k) {
    const double L = p.log_coupling();
    const double h = p.h, y3 = p.y3, pi2 = kPi * kPi;
    const double kk = static_cast<double>(k);
    if (p.bc == Boundary::Dirichlet) {
        if (p.sign == CouplingSign::Plus) return 2.0 * y3 * L / (h * (2.0 * kk + 1.0) * (2.0 * kk + 1.0) * pi2);
        const double n = k >= 0 ? kk : kk + 1.0;
        return y3 * L / (2.0 * n * n * pi2 * h);
    }
    if (p.sign == CouplingSign::Plus) return y3 * L / (2.0 * kk * kk * pi2 * h);
    const double m = k >= 1 ? 2.0 * kk - 1.0 : 2.0 * kk + 1.0;
    return 2.0 * y3 * L / (h * m * m * pi2);
}

double parabola_curvature_as_printed_neumann_plus(const SemiclassicalParams& p, long k) {
    const double kk = static_cast<double>(k);
    return 2.0 * p.y3 / (p.h * kk * kk * kPi * kPi) * p.log_coupling();
}

double parabola_rhs(const SemiclassicalParams& p, double eps) { return rhs_with(p, eps, rhs_constant(p)); }

std::vector<BandCheck> verify_parabola_with(const SemiclassicalParams& p, double eps,
                                            double (*curvature)(const SemiclassicalParams&, long)) {
    if (!(p.beta > 1.0)) throw std::invalid_argument("parabola check needs beta > 1");
    const double rhs = parabola_rhs(p, eps);
    std::vector<BandCheck> out;
    for (const auto& r : semiclassical_roots(p, eps)) {
        BandCheck b;
        b.z = r.z;
        b.k = r.k;
        b.value = r.z.imag() + curvature(p, r.k) * r.z.real() * r.z.real();
        b.bound = rhs;
        b.slack = std::abs(b.value);
        b.lower_ok = b.value >= -rhs;
        b.upper_ok = b.value <= rhs;
        out.push_back(b);
    }
    return out;
}

std::vector<BandCheck> verify_parabola_beta_gt1(const SemiclassicalParams& p, double eps) {
    return verify_parabola_with(p, eps, &parabola_curvature);
}

std::vector<BandCheck> verify_envelope_beta_gt1(const SemiclassicalParams& p, double eps) {
    if (!(p.beta > 1.0)) throw std::invalid_argument("envelope check needs beta > 1");
    const double e2 = eps * eps, y3 = p.y3;
    EnvelopeConstants c{};
    if (p.bc == Boundary::Dirichlet && p.sign == CouplingSign::Plus) c = {e2 / (32.0 * y3), 8.0 / (e2 * y3), 96.0};
    if (p.bc == Boundary::Dirichlet && p.sign == CouplingSign::Minus) c = {e2 / (8.0 * y3), 2.0 / (e2 * y3), 24.0};
    // Neumann plus: coefficients follow from the corrected curvature y3 L/(2 k^2 pi^2 h).
    if (p.bc == Boundary::Neumann && p.sign == CouplingSign::Plus) c = {e2 / (8.0 * y3), 2.0 / (e2 * y3), 96.0};
    if (p.bc == Boundary::Neumann && p.sign == CouplingSign::Minus) c = {e2 / (32.0 * y3), 8.0 / (e2 * y3), 24.0};
    const double hL = p.h * p.log_coupling();
    const double rhs = rhs_with(p, eps, c.rhs_constant);
    std::vector<BandCheck> out;
    for (const auto& r : semiclassical_roots(p, eps)) {
        const double x2 = r.z.real() * r.z.real();
        BandCheck b;
        b.z = r.z;
        b.k = r.k;
        const double up = r.z.imag() + c.upper_coeff * hL * x2;
        const double lo = r.z.imag() + c.lower_coeff * hL * x2;
        b.value = up;
        b.bound = rhs;
        b.upper_ok = up <= rhs;
        b.lower_ok = lo >= -rhs;
        b.slack = std::max(up - rhs, -rhs - lo);
        out.push_back(b);
    }
    return out;
}

CrossCheck cross_check_solver(const SemiclassicalParams& p, double eps, double tol) {
    const auto lam = semiclassical_roots(p, eps);
    const ModelParams e = p.effective();
    const double h = p.h;
    std::vector<cplx> direct;
    for (const auto& r : find_all(e, 1.0 / (eps * h) * (1.0 + 1e-12))) {
        const cplx z = h * r.z;
        const double m = std::abs(z);
        if (!(z.imag() < 0.0) || r.z.real() == 0.0) continue;
        if (m < eps || m > 1.0 / eps) continue;
        direct.push_back(z);
    }
    CrossCheck c;
    c.lambert_count = static_cast<int>(lam.size());
    c.solver_count = static_cast<int>(direct.size());
    bool all_matched = true;
    for (const auto& r : lam) {
        double best = INFINITY;
        for (cplx z : direct) best = std::min(best, std::abs(z - r.z) / std::abs(r.z));
        c.max_rel_diff = std::max(c.max_rel_diff, best);
        all_matched = all_matched && best <= tol;
    }
    c.ok = all_matched && c.lambert_count == c.solver_count;
    return c;
}

}  // namespace hsres
