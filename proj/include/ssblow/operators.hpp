#pragma once

#include "ssblow/field.hpp"

namespace ssblow {

// Boundary information used by angular differentiation.
enum class AngularBC {
    none,       // interpolate through the interior nodes only
    dirichlet,  // the field vanishes at theta = 0 and theta = pi/2
};

// D_z = z d/dz = d/d(ln z), fourth-order finite differences.
Field d_z(const Field& f);
RadialFn d_z(const RadialFn& f);
// D_z^2 with the compact fourth-order stencil.
Field d_zz(const Field& f);
RadialFn d_zz(const RadialFn& f);
// k-fold application of d_z.
Field d_z_pow(const Field& f, int k);
RadialFn d_z_pow(const RadialFn& f, int k);

// d/dtheta by barycentric differentiation on the angular nodes.
Field partial_theta(const Field& f, AngularBC bc = AngularBC::none);
Field partial_theta2(const Field& f);  // Dirichlet only
// D_theta = sin(2 theta) d/dtheta, and its k-fold application.
Field d_theta(const Field& f, AngularBC bc = AngularBC::none);
Field d_theta_pow(const Field& f, int k, AngularBC bc = AngularBC::none);

// Tensor-product quadrature of f g w2 over the truncated domain (dz dtheta).
double inner(const Field& f, const Field& g, const Field& w2);
double inner(const Field& f, const Field& g);
// Radial inner product of f g w2 over dz.
double inner_z(const RadialFn& f, const RadialFn& g, const RadialFn& w2);
double inner_z(const RadialFn& f, const RadialFn& g);
// Angular inner product per radial node, sum_j q_j f(., theta_j) g(theta_j).
RadialFn inner_theta(const Field& f, const Eigen::ArrayXd& g);
double inner_theta(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g, const AngularGrid& ag);

// ||f w||^2 with the product f w formed before squaring.
double weighted_l2_sq(const Field& f, const Field& w);
double weighted_l2_sq_z(const RadialFn& f, const RadialFn& w);

}  // namespace ssblow
