#pragma once

#include <functional>

#include <Eigen/Dense>

namespace ssblow {

struct QuadratureRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

// n-point Gauss-Legendre rule on [a, b], nodes increasing.
QuadratureRule gauss_legendre(int n, double a, double b);

// Composite Gauss-Legendre on [a, b] with panels refined geometrically
// toward both endpoints (`levels` halvings per end, ratio 1/2).
QuadratureRule composite_gauss_legendre(int points_per_panel, int levels, double a, double b);

double integrate(const QuadratureRule& q, const std::function<double(double)>& f);

// First-derivative matrix of the polynomial interpolant through `x`
// (barycentric formula, negative-sum trick on the diagonal).
Eigen::MatrixXd differentiation_matrix(const Eigen::ArrayXd& x);

// Barycentric interpolation weights for the nodes `x`.
Eigen::ArrayXd barycentric_weights(const Eigen::ArrayXd& x);

// Weights w such that sum_k w_k f(x_k) approximates f(t) by the polynomial
// through x (barycentric form of Lagrange interpolation).
Eigen::ArrayXd lagrange_weights(const Eigen::ArrayXd& x, double t);

}  // namespace ssblow
