#pragma once

#include <string>
#include <vector>

#include "hsres/lambertw.hpp"
#include "hsres/model.hpp"

namespace hsres {

enum class CouplingSign { Plus, Minus };

std::string to_string(CouplingSign s);
CouplingSign parse_sign(const std::string& s);

// Operator -h^2 Laplacian with coupling +-h^{-beta}.
struct SemiclassicalParams {
    double h = 1e-2;
    double beta = 0.5;
    CouplingSign sign = CouplingSign::Plus;
    Boundary bc = Boundary::Dirichlet;
    double y3 = 1.0;

    void validate() const;
    double sign_value() const { return sign == CouplingSign::Plus ? 1.0 : -1.0; }
    // ln w = +-8 pi y3 h^{-beta}
    double log_w() const;
    // ln(8 pi y3 h^{-beta})
    double log_coupling() const;
    SignShift shift() const { return bc == Boundary::Dirichlet ? SignShift::Odd : SignShift::Even; }
    // Unscaled model with alpha = +-h^{-beta}; its zeros are z/h.
    ModelParams effective() const;
};

// +-h^{-beta} - iz/(4 pi h) +- e^{2 i y3 z/h}/(8 pi y3).
cplx gamma_scaled(const SemiclassicalParams& p, cplx z);
// h^{-beta} + |z|/(4 pi h) + 1/(8 pi y3)
double scaled_residual_scale(const SemiclassicalParams& p, cplx z);

// (i h/(2 y3)) (x - ln w) with x the Lambert solution on branch k, before polishing.
cplx resonance_wk_unpolished(const SemiclassicalParams& p, long k);
// Newton-polished on gamma_scaled. LambertError outside |L2/L1| <= 1/2.
cplx resonance_wk(const SemiclassicalParams& p, long k);

// Branch window: if eps <= |z| <= 1/eps then eps/2 <= |k| pi h / y3 <= 2/eps.
bool check_branch_window(const SemiclassicalParams& p, long k, cplx z, double eps);

struct SemiclassicalRoot {
    long k = 0;
    cplx z{};
    double residual = 0.0;  // |gamma_scaled| / scaled_residual_scale
    double tail_ratio = 0.0; // |L2/L1|
    double tail_error = 0.0; // |R_k - L2/L1|
    double tail_bound = 0.0; // 2 |L2/L1|^2
};

// Lambert-built resonances with eps <= |z| <= 1/eps, Im z < 0, Re z != 0.
std::vector<SemiclassicalRoot> semiclassical_roots(const SemiclassicalParams& p, double eps);

struct BandCheck {
    cplx z{};
    long k = 0;
    bool lower_ok = false;
    bool upper_ok = false;
    double value = 0.0;  // the bounded quantity
    double bound = 0.0;  // right-hand side
    double slack = 0.0;  // value for the band; |value| for parabolas
    bool ok() const { return lower_ok && upper_ok; }
};

// 0 <= -Im z - (h/(2 y3)) ln(2 y3 |Re z|/h) <= (72 pi^2/y3) eps^-2 h^{3-2 beta}.
std::vector<BandCheck> verify_band_beta_lt1(const SemiclassicalParams& p, double eps);

// Curvature of the parabola Im z = -c (Re z)^2 near which branch k sits.
double parabola_curvature(const SemiclassicalParams& p, long k);
// As displayed for the Neumann plus case, 2 y3 ln(.)/(h k^2 pi^2).
double parabola_curvature_as_printed_neumann_plus(const SemiclassicalParams& p, long k);
double parabola_rhs(const SemiclassicalParams& p, double eps);

// |Im z + c_k (Re z)^2| <= rhs for every in-window root.
std::vector<BandCheck> verify_parabola_beta_gt1(const SemiclassicalParams& p, double eps);
// Same check with an arbitrary curvature law (used to test alternatives).
std::vector<BandCheck> verify_parabola_with(const SemiclassicalParams& p, double eps,
                                            double (*curvature)(const SemiclassicalParams&, long));

// k-free sandwich: Im z + a (Re z)^2 <= rhs and Im z + b (Re z)^2 >= -rhs, with
// a, b proportional to h ln(8 pi y3 h^-beta).
std::vector<BandCheck> verify_envelope_beta_gt1(const SemiclassicalParams& p, double eps);

struct CrossCheck {
    int lambert_count = 0;
    int solver_count = 0;
    double max_rel_diff = 0.0;
    bool ok = false;
};

// Compares the Lambert roots against the branch solver run on the unscaled
// model with alpha = +-h^{-beta}.
CrossCheck cross_check_solver(const SemiclassicalParams& p, double eps, double tol = 1e-9);

}  // namespace hsres
