#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ssblow {

struct GridConfig {
    int n_z = 512;
    int n_theta = 128;
    double z_min = 1e-6;
    double z_max = 1e6;
    // Number of compositions of the endpoint-clustering map s -> sin(pi s/2)
    // applied to the angular Gauss-Legendre nodes (0 = plain Gauss-Legendre).
    int endpoint_refinement = 0;
};

// Log-uniform radial grid. s = ln z is uniform with spacing h.
struct RadialGrid {
    int n = 0;
    double z_min = 0.0, z_max = 0.0, h = 0.0;
    Eigen::ArrayXd s, z;
    Eigen::ArrayXd ds_weights;    // quadrature for integrals d(ln z)
    Eigen::ArrayXd quad_weights;  // quadrature for integrals dz
    Eigen::SparseMatrix<double> d1;  // D_z, 4th order
    Eigen::SparseMatrix<double> d2;  // D_z^2, 4th order compact stencil
    Eigen::SparseMatrix<double> d1_upwind;  // D_z biased toward smaller z (offsets -3..+1)
};

// Gauss-Legendre nodes on (0, pi/2), optionally clustered toward the ends.
struct AngularGrid {
    int n = 0;
    int refinement = 0;
    Eigen::ArrayXd theta, quad_weights;
    Eigen::ArrayXd sin2, cos2, tan;  // sin(2 theta), cos(2 theta), tan(theta)
    Eigen::MatrixXd d_free;       // d/dtheta of the interpolant through the nodes
    Eigen::MatrixXd d_dirichlet;  // d/dtheta using zero endpoint values
    Eigen::MatrixXd d2_dirichlet; // d^2/dtheta^2 using zero endpoint values
};

struct Grids {
    GridConfig config;
    RadialGrid radial;
    AngularGrid angular;
    int nz() const { return radial.n; }
    int nt() const { return angular.n; }
};

using GridsPtr = std::shared_ptr<const Grids>;

RadialGrid make_radial_grid(int n, double z_min, double z_max);
AngularGrid make_angular_grid(int n, int refinement = 0);
GridsPtr make_grids(const GridConfig& cfg);

// Checks that the weight transitions near z_min and z_max are resolved:
// z_min^{1/beta} and z_max^{-1/beta} must not exceed `threshold`.
void check_resolution(const RadialGrid& g, double beta, double threshold = 1e-3);

// Finite-difference weights (Fornberg) for the m-th derivative at x0.
Eigen::ArrayXd fd_weights(double x0, const Eigen::ArrayXd& nodes, int m);

}  // namespace ssblow
