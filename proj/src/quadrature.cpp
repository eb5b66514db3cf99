#include "hsres/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>

namespace hsres::quad {

namespace {

Rule build_rule(int n) {
    Rule r;
    const auto pos = boost::math::legendre_p_zeros<double>(n);
    for (double x : pos) {
        const double d = boost::math::legendre_p_prime<double>(n, x);
        const double w = 2.0 / ((1.0 - x * x) * d * d);
        r.nodes.push_back(x);
        r.weights.push_back(w);
        if (x != 0.0) {
            r.nodes.push_back(-x);
            r.weights.push_back(w);
        }
    }
    return r;
}

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<cplx(double)>& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    static const auto& xk = GK::abscissa();
    static const auto& wk = GK::weights();
    static const auto& wg = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx f0 = f(c);
    cplx kron = f0 * wk[0];
    cplx gauss = f0 * wg[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const cplx s = f(c + h * xk[i]) + f(c - h * xk[i]);
        kron += s * wk[i];
        if ((i & 1u) == 0) gauss += s * wg[i / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Rule>(build_rule(n))).first;
    return *it->second;
}

Result adaptive(const std::function<cplx(double)>& f, double a, double b,
                double abs_tol, double rel_tol, int initial_panels,
                int max_panels) {
    std::priority_queue<Panel> heap;
    cplx total{};
    double err = 0.0;
    const int n0 = std::max(1, initial_panels);
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        Panel p = gk15(f, lo, hi);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int count = n0;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_panels) {
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            heap.push(p);
            break;
        }
        Panel l = gk15(f, p.a, mid);
        Panel r = gk15(f, mid, p.b);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    Result res;
    res.value = total;
    res.error = err;
    res.panels = count;
    res.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
    return res;
}

cplx fixed(const std::function<cplx(double)>& f, double a, double b, int n,
           int panels) {
    const Rule& r = gauss_legendre(n);
    cplx total{};
    for (int p = 0; p < panels; ++p) {
        const double lo = a + (b - a) * p / panels;
        const double hi = a + (b - a) * (p + 1) / panels;
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        cplx s{};
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
        total += h * s;
    }
    return total;
}

}  // namespace hsres::quad
