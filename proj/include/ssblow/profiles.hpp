#pragma once

#include "ssblow/params.hpp"
#include "ssblow/report.hpp"

namespace ssblow {

// K(theta) = sin(theta) cos(theta)^2 on [0, pi/2].
double k_theta(double theta);

// Radial profile 2 z^{1/g} / (g (1 + z^{1/g})^2) and its integral
// L^{-1}_z of it, 2 / (1 + z^{1/g}).
double gamma_star(double z, double gamma);
double l_inv_gamma_star(double z, double gamma);

// Angular profile K^{alpha/(3 gamma)}.
double gamma_theta(double theta, double gamma, double alpha);

// Normalisation integral of K * gamma_theta over [0, pi/2].
double c_star(double gamma, double alpha);

// Fundamental profile (2 alpha/3) (gamma_theta / c_star) gamma_star, using
// params.gamma. The overload taking `cstar` skips the quadrature.
double f_star(double z, double theta, const ModelParams& p);
double f_star(double z, double theta, const ModelParams& p, double cstar);

// k-th power of D_z = z d/dz applied to gamma_star (k = 0..4), in closed form.
double dz_gamma_star(double z, double gamma, int k);

// k-th power of D_theta = sin(2 theta) d/dtheta applied to gamma_theta (k = 0..4).
double dtheta_gamma_theta(double theta, double gamma, double alpha, int k);

// Upper bound allowed on |1/g1 - 1/g2| for a given delta0.
double stability_threshold(double delta0);

// Sup-norm comparison of two radial profiles; throws PreconditionError when
// |1/g1 - 1/g2| exceeds stability_threshold(delta0).
Report parameter_stability(double gamma1, double gamma2, double delta0, int grid_points = 20001,
                           double alpha = 0.03);

}  // namespace ssblow
