#pragma once

#include <memory>

#include "ssblow/elliptic.hpp"
#include "ssblow/field.hpp"
#include "ssblow/params.hpp"
#include "ssblow/spaces.hpp"

namespace ssblow {

// U(Phi) = -3 Phi - alpha D_z Phi and V(Phi) = d_theta Phi - tan(theta) Phi.
Field u_of(const Field& phi, double alpha);
Field v_of(const Field& phi);
// R(Phi) = V(Phi) - tan(theta) U(Phi).
Field stretching(const Field& phi, double alpha);

// The same functionals for a solved potential. The sin(2 theta) parts are
// evaluated from their radial profiles, so U / sin(2 theta) needs no division
// there; the remaining part is divided at the (interior) angular nodes.
Field u_over_sin2(const PotentialSolution& s, double alpha);
Field v_of(const PotentialSolution& s);
Field stretching(const PotentialSolution& s, double alpha);
// R(Phi - Phi_main).
Field stretching_remainder(const PotentialSolution& s, double alpha);

// T_f = (U / sin 2theta) D_theta f + alpha V D_z f.
Field transport(const PotentialSolution& s, const Field& f, double alpha);
// Generic form for an arbitrary potential vanishing at both angular ends.
Field transport(const Field& phi, const Field& f, double alpha);

// (cos theta)^{-1} d_theta(cos theta U) + alpha D_z V + 3 V, which vanishes
// identically for every Phi.
Field divergence_identity_residual(const Field& phi, double alpha);

struct NullPairing {
    double pairing = 0.0;     // <T_f, f W> with W rescaled by its maximum
    double norm_tf = 0.0;     // ||T_f W^{1/2}|| (same rescaling)
    double norm_f = 0.0;      // ||f W^{1/2}|| (same rescaling)
    double normalized = 0.0;  // |pairing| / (norm_tf norm_f)
    double log_scale = 0.0;   // W was divided by exp(log_scale)
};
// Pairing of T_f against f z^{3/alpha - 1} cos(theta). f must vanish near
// both radial ends of the grid for the pairing to vanish.
NullPairing null_pairing(const Field& phi, const Field& f, double alpha);

// Core operator g + beta D_z g - L^{-1}_z(Gamma*_beta) g.
Field core_op(const Field& g, const ModelParams& p);
RadialFn core_op(const RadialFn& g, double beta);
// Main operator: core_op - (3/(2 alpha)) L^{-1}_{z,K}(g) F*_beta.
Field main_op(const Field& g, const ModelParams& p, TailPolicy policy = TailPolicy::strict);
// Linearised operator about F*_gamma (gamma from p).
Field linear_op(const Field& g, const ModelParams& p, TailPolicy policy = TailPolicy::strict);

// Remainder from the profile mismatch, closed form -2 mu u/(1+u) F*_gamma with u = z^{1/gamma}.
Field remainder_R0(const GridsPtr& g, const ModelParams& p);
// The same remainder from its definition -mu F* + (gamma - (1+mu) beta) D_z F*.
Field remainder_R0_definition(const GridsPtr& g, const ModelParams& p);
// -mu g - mu beta D_z g.
Field remainder_R1(const Field& g, const ModelParams& p);

// Perturbation g with its profile, total field and solved potential.
struct SystemState {
    ModelParams params;
    Field g;
    Field f_star;
    Field F;
    PotentialSolution potential;
};

// Builds F = F*_gamma + g and solves the potential with `solver` (which must
// match g's grid and params.alpha).
SystemState make_state(const ModelParams& p, const Field& g, const EllipticSolver& solver);
SystemState make_state(const ModelParams& p, const Field& g);

// Nonlinear remainder (3/(2 alpha)) L^{-1}_{z,K}(g) g - (3/2) sin^2 <F,K> F + R(Phi - Phi_main) F.
Field remainder_R2(const SystemState& s, TailPolicy policy = TailPolicy::strict);
// Transport term T = T_F for the state.
Field transport_term(const SystemState& s);

// (3/(4 alpha)) L^{-1}_{z,K}(R2 - T)(0). Throws DivergenceError if |mu| >= 1.
double mu_update(const SystemState& s, TailPolicy policy = TailPolicy::strict);
double mu_from_forcing(const Field& r2_minus_t, double alpha, TailPolicy policy = TailPolicy::strict);

// L_Gamma(g) + T - R0 - R1 - R2.
Field system_residual(const SystemState& s, TailPolicy policy = TailPolicy::strict);
// (1+mu) F + (1+mu) beta D_z F + T - R(Phi) F.
Field main_equation_residual(const SystemState& s);

// Logarithmic derivatives of the transport weights, by complex-step
// differentiation of the weight factors. wbar^xi = w_z sin(2theta)^{-xi/2}
// z^{1/2 - 3/(2 alpha)} cos(theta)^{-1/2}.
double wbar_log_dtheta(double theta, double xi);
double wbar_log_dz(double z, const ModelParams& p);
// W = w_z sin(2theta)^{-xi} z^{1/2 - 3/(2 alpha)} cos(theta)^{-1/2}; returns D_theta W / W.
double null_weight_log_dtheta(double theta, double xi);

}  // namespace ssblow
