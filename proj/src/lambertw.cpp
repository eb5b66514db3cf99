#include "hsres/lambertw.hpp"

#include <boost/math/special_functions/lambert_w.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace hsres {

namespace {

using boost::multiprecision::cpp_int;
constexpr double kPiL = 3.14159265358979323846;
constexpr int kMaxIter = 50;

using StirlingTable = std::array<std::array<cpp_int, kMaxStirling + 1>, kMaxStirling + 1>;

const StirlingTable& table() {
    static const StirlingTable t = [] {
        StirlingTable s{};
        s[0][0] = 1;
        for (int p = 0; p < kMaxStirling; ++p)
            for (int q = 1; q <= p + 1; ++q) s[p + 1][q] = p * s[p][q] + s[p][q - 1];
        return s;
    }();
    return t;
}

void check_branch(long k) {
    if (k > kMaxBranch || k < -kMaxBranch) throw LambertError("branch index exceeds the configured cap");
}

double w_residual(cplx W, cplx w) { return std::abs(W * std::exp(W) - w) / std::max(1.0, std::abs(w)); }

// Halley on W e^W - w. Returns false on non-convergence.
bool halley(cplx& W, cplx w, int& iters) {
    for (iters = 1; iters <= kMaxIter; ++iters) {
        const cplx ew = std::exp(W);
        const cplx f = W * ew - w;
        const cplx wp1 = W + 1.0;
        if (std::abs(wp1) < 1e-300) return false;
        const cplx denom = ew * wp1 - (W + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0) return false;
        const cplx dW = f / denom;
        W -= dW;
        if (!std::isfinite(W.real()) || !std::isfinite(W.imag())) return false;
        if (std::abs(dW) <= 4e-16 * (1.0 + std::abs(W))) return true;
    }
    return false;
}

// Unwinding index of a candidate: (W + Log W - Log w) / (2 pi i).
long unwinding(cplx W, cplx w) {
    const cplx d = W + std::log(W) - std::log(w);
    return std::lround(d.imag() / (2.0 * kPiL));
}

bool real_pair_segment(cplx w) { return w.imag() == 0.0 && w.real() >= -1.0 / M_E && w.real() < 0.0; }

bool branch_matches(long k, cplx W, cplx w) {
    if (real_pair_segment(w) && (k == 0 || k == -1)) {
        if (std::abs(W.imag()) > 1e-8 * (1.0 + std::abs(W))) return false;
        return k == 0 ? W.real() >= -1.0 - 1e-7 : W.real() <= -1.0 + 1e-7;
    }
    return unwinding(W, w) == k;
}

std::vector<cplx> starts(long k, cplx w) {
    std::vector<cplx> s;
    const cplx q = M_E * w + 1.0;
    if (std::abs(q) < 0.3) {
        const cplx p = std::sqrt(2.0 * q);
        if (k == 0) s.push_back(-1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p);
        if ((k == -1 && w.imag() >= 0.0) || (k == 1 && w.imag() < 0.0))
            s.push_back(-1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p);
    }
    if (k == 0) {
        if (w.imag() == 0.0 && w.real() >= -1.0 / M_E) s.push_back(boost::math::lambert_w0(w.real()));
        if (std::abs(w) < 0.5) s.push_back(w - w * w + 1.5 * w * w * w);
        s.push_back(std::log(1.0 + w));
    }
    if (k == -1 && real_pair_segment(w)) s.push_back(boost::math::lambert_wm1(w.real()));
    const cplx L1 = std::log(w) + cplx(0.0, 2.0 * kPiL * static_cast<double>(k));
    if (std::abs(L1) > 1e-3) {
        const cplx L2 = std::log(L1);
        s.push_back(L1 - L2 + L2 / L1);
        s.push_back(L1 - L2);
    }
    s.push_back(L1);
    // Points near the branch point from either side as a last resort.
    s.push_back(cplx(-1.0, k >= 0 ? 1.0 : -1.0) + cplx(0.0, 2.0 * kPiL * static_cast<double>(k)));
    return s;
}

}  // namespace

const cpp_int& stirling_cycle(int p, int q) {
    if (p < 0 || q < 0 || p > kMaxStirling || q > kMaxStirling)
        throw std::out_of_range("stirling_cycle: indices must lie in [0, 64]");
    return table()[p][q];
}

double stirling_cycle_double(int p, int q) { return stirling_cycle(p, q).convert_to<double>(); }

WValue lambert_w(long k, cplx w) {
    check_branch(k);
    // A signed zero imaginary part would flip the side of the cut; use the upper side.
    if (w.imag() == 0.0) w = cplx(w.real(), 0.0);
    if (w == 0.0) {
        if (k == 0) return {0.0, 0.0, 0};
        throw LambertError("W_k(0) is undefined for k != 0");
    }
    if ((k == 0 || k == -1) && w.imag() == 0.0 && w.real() == -1.0 / M_E) return {-1.0, w_residual(-1.0, w), 0};
    for (cplx W : starts(k, w)) {
        int iters = 0;
        if (!halley(W, w, iters)) continue;
        if (!branch_matches(k, W, w)) continue;
        const double r = w_residual(W, w);
        if (r <= 1e-13) return {W, r, iters};
    }
    throw LambertError("lambert_w: iteration did not converge on the requested branch");
}

cplx branch_log(long k, cplx log_w, SignShift shift) {
    const double m = shift == SignShift::Odd ? 2.0 * static_cast<double>(k) + 1.0 : 2.0 * static_cast<double>(k);
    return log_w + cplx(0.0, m * kPiL);
}

WValue lambert_w_log(long k, cplx log_w, SignShift shift) {
    check_branch(k);
    const cplx L1 = branch_log(k, log_w, shift);
    if (std::abs(L1) < 2.0)
        throw LambertError("lambert_w_log: |ln w + shift| too small for the logarithmic form");
    cplx x = L1 - std::log(L1);
    int it = 1;
    for (; it <= kMaxIter; ++it) {
        const cplx F = x + std::log(x) - L1;
        const cplx F1 = 1.0 + 1.0 / x;
        const cplx F2 = -1.0 / (x * x);
        const cplx dx = F / (F1 - F * F2 / (2.0 * F1));
        x -= dx;
        if (std::abs(dx) <= 4e-16 * (1.0 + std::abs(x))) break;
    }
    const double r = std::abs(x + std::log(x) - L1) / std::max(1.0, std::abs(L1));
    if (it > kMaxIter || !(r <= 1e-13)) throw LambertError("lambert_w_log: iteration did not converge");
    return {x, r, it};
}

cplx w_series_log(long k, cplx log_w, SignShift shift, int terms) {
    check_branch(k);
    if (terms < 0 || terms + 1 > kMaxStirling) throw std::out_of_range("w_series: terms out of range");
    const cplx L1 = branch_log(k, log_w, shift);
    const cplx L2 = std::log(L1);
    const cplx q = L2 / L1;
    if (!(std::abs(q) <= 0.5)) throw LambertError("w_series: outside the validity region |L2/L1| <= 1/2");
    const cplx inv = 1.0 / L1;
    cplx sum{};
    // Add the smallest terms first.
    for (int n = terms; n >= 1; --n) {
        for (int m = 1; m <= n; ++m) {
            const int j = n - m;
            const double c = (j % 2 == 0 ? 1.0 : -1.0) / std::tgamma(m + 1.0) * stirling_cycle_double(j + m, j + 1);
            if (c == 0.0) continue;
            sum += c * std::pow(q, m) * std::pow(inv, j);
        }
    }
    return L1 - L2 + sum;
}

cplx w_series(long k, cplx w, SignShift shift, int terms) {
    if (w == 0.0) throw LambertError("w_series: w must be nonzero");
    return w_series_log(k, std::log(w), shift, terms);
}

double series_abs_tail(long k, cplx log_w, SignShift shift, int terms_from, int terms_to) {
    const cplx L1 = branch_log(k, log_w, shift);
    const double a1 = std::abs(L1), a2 = std::abs(std::log(L1));
    terms_to = std::min(terms_to, kMaxStirling - 1);
    double s = 0.0;
    for (int n = terms_to; n > terms_from; --n)
        for (int m = 1; m <= n; ++m) {
            const int j = n - m;
            s += stirling_cycle_double(j + m, j + 1) / std::tgamma(m + 1.0) * std::pow(a2, m) / std::pow(a1, n);
        }
    return s;
}

SeriesTail remainder_bound_log(long k, cplx log_w, SignShift shift) {
    const cplx L1 = branch_log(k, log_w, shift);
    SeriesTail t;
    t.first_term = std::log(L1) / L1;
    t.ratio = std::abs(t.first_term);
    t.bound = 2.0 * t.ratio * t.ratio;
    t.valid = t.ratio <= 0.5;
    return t;
}

SeriesTail remainder_bound(long k, cplx w, SignShift shift) {
    if (w == 0.0) throw LambertError("remainder_bound: w must be nonzero");
    return remainder_bound_log(k, std::log(w), shift);
}

}  // namespace hsres
