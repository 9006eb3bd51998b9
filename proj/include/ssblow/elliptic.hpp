#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "ssblow/field.hpp"

namespace ssblow {

// Solution of (L^alpha_z + L_theta) Phi = F with its three parts:
// Phi = phi_main + g_tilde sin(2 theta) + phi_tilde, phi_main = g_star sin(2 theta).
struct PotentialSolution {
    Field phi;
    Field phi_main;
    RadialFn g_star;
    RadialFn g_tilde;
    Field phi_tilde;
    // D_z g_star and D_z g_tilde from their defining integral relations.
    RadialFn dz_g_star;
    RadialFn dz_g_tilde;
    // Relative unweighted L^2 residual over the interior radial rows.
    double residual_norm = 0.0;
};

// -alpha^2 D_z^2 - 5 alpha D_z.
Field apply_Lz_alpha(const Field& phi, double alpha);
RadialFn apply_Lz_alpha(const RadialFn& phi, double alpha);
// -d^2_theta phi + d_theta(tan(theta) phi) - 6 phi for phi vanishing at both ends.
Field apply_Ltheta(const Field& phi);
// Matrix of apply_Ltheta acting on a column of angular samples.
Eigen::MatrixXd ltheta_matrix(const AngularGrid& ag);

struct RhsSplit {
    Field f_bar;    // (15/4) sin(2 theta) <F, K>_theta
    Field f_tilde;  // F - f_bar
};
RhsSplit decompose_rhs(const Field& F);

// Radial Green pieces of the sin(2 theta) component.
struct RadialPart {
    RadialFn g_star;
    RadialFn g_tilde;
};
// Throws PreconditionError when <F,K>_theta at z_min is not small compared
// with its maximum (relative `compat_tol`).
RadialPart solve_radial_part(const Field& F, double alpha, double compat_tol = 1e-3);

// Factorised angular/radial operator for a fixed grid and alpha. The angular
// operator is triangularised once (complex Schur form) and each triangular
// column gives one banded radial solve with Dirichlet rows at z_min, z_max.
class EllipticSolver {
public:
    EllipticSolver(GridsPtr grids, double alpha);
    double alpha() const { return alpha_; }
    const GridsPtr& grids() const { return grids_; }

    // Solves (L^alpha_z + L_theta) Phi = F_tilde with Dirichlet rows in z.
    Field solve_tilde(const Field& f_tilde) const;
    PotentialSolution solve(const Field& F) const;

private:
    using CSparse = Eigen::SparseMatrix<std::complex<double>>;
    GridsPtr grids_;
    double alpha_;
    Eigen::MatrixXcd q_;  // Schur vectors
    Eigen::MatrixXcd t_;  // upper-triangular Schur factor
    std::vector<std::unique_ptr<Eigen::SparseLU<CSparse>>> radial_lu_;
};

Field solve_tilde(const Field& f_tilde, double alpha);
PotentialSolution solve_potential(const Field& F, double alpha);

// Residual of (L^alpha_z + L_theta) phi - F relative to F, unweighted L^2
// over all radial rows except the two boundary rows.
double potential_residual(const Field& phi, const Field& F, double alpha);

// Coefficients phi_k(z), k = 1..n_modes, of phi in the basis sin(2 k theta),
// by quadrature projection. Returned as an (n_z, n_modes) array.
Eigen::ArrayXXd sine_coefficients(const Field& phi, int n_modes);

// Max over z of |phi_1 + sum_{k>=2} (-1)^k 15k/((4k^2-1)(4k^2-9)) phi_k|,
// divided by max over z of |phi_1|. Vanishes when <phi, K>_theta = 0.
double mode1_identity_residual(const Field& phi, int n_modes);

// <sin(2 n theta), K>_theta in closed form.
double sin_k_integral(int n);

}  // namespace ssblow
