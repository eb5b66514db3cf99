#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <stdexcept>

namespace hsres {

using cplx = std::complex<double>;

struct LambertError : std::domain_error {
    using std::domain_error::domain_error;
};

inline constexpr long kMaxBranch = 1000000;
inline constexpr int kMaxStirling = 64;

// Unsigned Stirling numbers of the first kind, exact, for 0 <= p, q <= 64.
const boost::multiprecision::cpp_int& stirling_cycle(int p, int q);
double stirling_cycle_double(int p, int q);

struct WValue {
    cplx value{};
    double residual = 0.0;  // |W e^W - w| / max(1, |w|), or the log-form analogue
    int iterations = 0;
};

// Branch k of Lambert W (Corless et al. conventions), Halley-polished.
WValue lambert_w(long k, cplx w);

// Which logarithm offset accompanies branch k:
//   Odd  -> L1 = ln w + (2k+1) i pi, targets W_k(-w)
//   Even -> L1 = ln w + 2k i pi,     targets W_k(w)
enum class SignShift { Odd, Even };

cplx branch_log(long k, cplx log_w, SignShift shift);

// Solves x + Log x = L1 with L1 = branch_log(k, log_w, shift). Works when
// w = e^{log_w} itself would overflow or underflow. Residual is
// |x + Log x - L1| / max(1, |L1|).
WValue lambert_w_log(long k, cplx log_w, SignShift shift);

// L1 - L2 + sum_{j >= 0, m >= 1, j + m <= terms} c_{j,m} L2^m / L1^{j+m}.
cplx w_series(long k, cplx w, SignShift shift, int terms);
cplx w_series_log(long k, cplx log_w, SignShift shift, int terms);

// Sum of |c_{j,m} L2^m / L1^{j+m}| over terms_from < j + m <= terms_to.
double series_abs_tail(long k, cplx log_w, SignShift shift, int terms_from, int terms_to);

struct SeriesTail {
    cplx first_term{};  // L2 / L1
    double ratio = 0.0; // |L2 / L1|
    double bound = 0.0; // 2 |L2 / L1|^2, bounds |R_k - L2/L1|
    bool valid = false; // ratio <= 1/2
};

SeriesTail remainder_bound(long k, cplx w, SignShift shift);
SeriesTail remainder_bound_log(long k, cplx log_w, SignShift shift);

}  // namespace hsres
