#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsres/model.hpp"

namespace hsres {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ResonanceKind { ComplexPair, AntiBound, ZeroEigenvalue, ZeroResonance, LowPair, Exceptional };

std::string to_string(ResonanceKind kind);

struct Resonance {
    cplx z{};
    long branch = 0;
    ResonanceKind kind = ResonanceKind::ComplexPair;
    int multiplicity = 1;
};

// first has Re z > 0, second is its mirror -conj(first).
struct ResonancePair {
    Resonance first, second;
};

// sin(2 y3 a) / (2 y3 a), with the limit 1 at a = 0.
double g_of_a(double y3, double a);
// exp(-8 pi alpha y3 - 2 y3 a cot(2 y3 a)); may over/underflow for large |alpha|.
double h_of_a(const ModelParams& p, double a);
// ln h(a) - ln(+-g(a)) (sign + for Dirichlet, - for Neumann). The pair
// resonances are exactly the sign changes of this function.
double branch_equation(const ModelParams& p, double a);

// Open interval of Re z holding branch k: Dirichlet (k pi/y3, (2k+1) pi/(2 y3)),
// k >= 1; Neumann ((2k+1) pi/(2 y3), (k+1) pi/y3), k >= 0.
std::pair<double, double> branch_interval(const ModelParams& p, long k);

// Im z on the resonance curve over Re z = a.
double curve_imag(const ModelParams& p, double a);
// |Im z - curve_imag(Re z)| / max(|Im z|, 1e-300).
double on_curve_error(const ModelParams& p, cplx z);

// Depth below which no zero of Gamma with |Re z| <= a_max can lie, plus 2/y3.
double search_depth(const ModelParams& p, double a_max);

// Up to max_steps complex Newton steps on Gamma.
cplx newton_polish(const ModelParams& p, cplx z, int max_steps = 10);

ResonancePair find_branch(const ModelParams& p, long k);
std::optional<Resonance> find_antibound(const ModelParams& p);
std::optional<Resonance> detect_zero(const ModelParams& p);
std::optional<ResonancePair> find_low_pair(const ModelParams& p);
std::vector<Resonance> find_exceptional(const ModelParams& p);

// Everything with |z| < R (Im z <= 0), sorted by Re z then Im z.
std::vector<Resonance> find_all(const ModelParams& p, double R);

int total_multiplicity(const std::vector<Resonance>& rs);

// 2 floor(y3 R / pi - 1/4).
int asymptotic_count(double y3, double R);

struct CountReport {
    double R = 0.0;
    int exact_count = 0;
    int asymptotic_count = 0;
    int oracle_count = 0;
    double radius_used = 0.0;  // R after any oracle boundary nudge
};

// ConsistencyError on exact/oracle mismatch when check is true.
CountReport count_exact(const ModelParams& p, double R, bool check = true);

}  // namespace hsres
