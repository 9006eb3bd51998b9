#include "ssblow/elliptic.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/spaces.hpp"

namespace ssblow {

Field apply_Lz_alpha(const Field& phi, double alpha) {
    return -alpha * alpha * d_zz(phi) - 5.0 * alpha * d_z(phi);
}

RadialFn apply_Lz_alpha(const RadialFn& phi, double alpha) {
    return -alpha * alpha * d_zz(phi) - 5.0 * alpha * d_z(phi);
}

Eigen::MatrixXd ltheta_matrix(const AngularGrid& ag) {
    const int n = ag.n;
    Eigen::MatrixXd m = -ag.d2_dirichlet + ag.d_free * ag.tan.matrix().asDiagonal();
    m -= 6.0 * Eigen::MatrixXd::Identity(n, n);
    return m;
}

Field apply_Ltheta(const Field& phi) {
    const Eigen::MatrixXd a = ltheta_matrix(phi.grids->angular);
    return Field(phi.grids, (phi.v.matrix() * a.transpose()).array());
}

RhsSplit decompose_rhs(const Field& F) {
    const RadialFn bk = bracket_K(F);
    Field bar = outer((15.0 / 4.0) * bk, F.grids->angular.sin2);
    Field tilde = F - bar;
    return {std::move(bar), std::move(tilde)};
}

RadialPart solve_radial_part(const Field& F, double alpha, double compat_tol) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const RadialFn bk = bracket_K(F);
    const double peak = bk.v.abs().maxCoeff();
    if (peak > 0.0 && std::abs(bk.v[0]) > compat_tol * peak)
        throw PreconditionError("<F,K>_theta does not vanish at z_min (ratio " +
                                std::to_string(std::abs(bk.v[0]) / peak) + ")");
    RadialPart out;
    out.g_star = (3.0 / (4.0 * alpha)) * l_inv_z(bk);
    out.g_tilde = g_tilde_kernel((15.0 / 4.0) * bk, alpha);
    return out;
}

EllipticSolver::EllipticSolver(GridsPtr grids, double alpha) : grids_(std::move(grids)), alpha_(alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const auto& rg = grids_->radial;
    const Eigen::MatrixXd a = ltheta_matrix(grids_->angular);
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a.cast<std::complex<double>>());
    if (schur.info() != Eigen::Success) throw SolverError("Schur decomposition of L_theta failed");
    q_ = schur.matrixU();
    t_ = schur.matrixT();

    const int nz = rg.n;
    const Eigen::SparseMatrix<double> lz = -alpha * alpha * rg.d2 - 5.0 * alpha * rg.d1;
    radial_lu_.resize(grids_->nt());
    for (int k = 0; k < grids_->nt(); ++k) {
        std::vector<Eigen::Triplet<std::complex<double>>> trip;
        for (int col = 0; col < lz.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(lz, col); it; ++it)
                if (it.row() != 0 && it.row() != nz - 1) trip.emplace_back(it.row(), it.col(), it.value());
        for (int i = 1; i < nz - 1; ++i) trip.emplace_back(i, i, t_(k, k));
        trip.emplace_back(0, 0, 1.0);
        trip.emplace_back(nz - 1, nz - 1, 1.0);
        CSparse m(nz, nz);
        m.setFromTriplets(trip.begin(), trip.end());
        m.makeCompressed();
        auto lu = std::make_unique<Eigen::SparseLU<CSparse>>();
        lu->compute(m);
        if (lu->info() != Eigen::Success)
            throw SolverError("radial factorisation failed for angular mode " + std::to_string(k) +
                              " (Schur diagonal " + std::to_string(std::abs(t_(k, k))) + ")");
        radial_lu_[k] = std::move(lu);
    }
}

Field EllipticSolver::solve_tilde(const Field& f_tilde) const {
    const int nz = grids_->nz();
    const int nt = grids_->nt();
    if (f_tilde.nz() != nz || f_tilde.nt() != nt) throw PreconditionError("field does not match solver grid");
    // Columns of G = F conj(Q); then L_z psi_k + sum_{j>=k} T_kj psi_j = G_k.
    Eigen::MatrixXcd g = f_tilde.v.matrix().cast<std::complex<double>>() * q_.conjugate();
    Eigen::MatrixXcd psi(nz, nt);
    for (int k = nt - 1; k >= 0; --k) {
        Eigen::VectorXcd rhs = g.col(k);
        if (k + 1 < nt) rhs.noalias() -= psi.rightCols(nt - k - 1) * t_.row(k).tail(nt - k - 1).transpose();
        rhs[0] = 0.0;
        rhs[nz - 1] = 0.0;
        psi.col(k) = radial_lu_[k]->solve(rhs);
        if (radial_lu_[k]->info() != Eigen::Success) throw SolverError("radial solve failed");
    }
    Eigen::MatrixXd phi = (psi * q_.transpose()).real();
    Field out(grids_, phi.array());
    if (!out.all_finite()) throw SolverError("non-finite potential");
    return out;
}

PotentialSolution EllipticSolver::solve(const Field& F) const {
    PotentialSolution s;
    const RhsSplit split = decompose_rhs(F);
    const RadialFn bk = bracket_K(F);
    const RadialPart rp = solve_radial_part(F, alpha_);
    s.g_star = rp.g_star;
    s.g_tilde = rp.g_tilde;
    // D_z L^{-1}_z h = -h, and D_z of the exponential kernel is h/(5 alpha) - (5/alpha) G~.
    s.dz_g_star = (-3.0 / (4.0 * alpha_)) * bk;
    s.dz_g_tilde = (1.0 / (5.0 * alpha_)) * ((15.0 / 4.0) * bk) - (5.0 / alpha_) * rp.g_tilde;
    const auto& sin2 = grids_->angular.sin2;
    s.phi_main = outer(s.g_star, sin2);
    s.phi_tilde = solve_tilde(split.f_tilde);
    s.phi = s.phi_main + outer(s.g_tilde, sin2) + s.phi_tilde;
    s.residual_norm = potential_residual(s.phi, F, alpha_);
    return s;
}

Field solve_tilde(const Field& f_tilde, double alpha) {
    return EllipticSolver(f_tilde.grids, alpha).solve_tilde(f_tilde);
}

PotentialSolution solve_potential(const Field& F, double alpha) {
    return EllipticSolver(F.grids, alpha).solve(F);
}

double potential_residual(const Field& phi, const Field& F, double alpha) {
    const Field r = apply_Lz_alpha(phi, alpha) + apply_Ltheta(phi) - F;
    const auto& g = *F.grids;
    const int nz = g.nz();
    auto sq = [&](const Eigen::ArrayXXd& a) {
        double s = 0.0;
        for (int i = 1; i < nz - 1; ++i)
            s += g.radial.quad_weights[i] * (a.row(i).square() * g.angular.quad_weights.transpose()).sum();
        return s;
    };
    const double den = sq(F.v);
    const double num = sq(r.v);
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

Eigen::ArrayXXd sine_coefficients(const Field& phi, int n_modes) {
    const auto& ag = phi.grids->angular;
    Eigen::MatrixXd basis(ag.n, n_modes);
    for (int k = 1; k <= n_modes; ++k)
        for (int j = 0; j < ag.n; ++j)
            basis(j, k - 1) = (4.0 / std::numbers::pi) * ag.quad_weights[j] * std::sin(2.0 * k * ag.theta[j]);
    return (phi.v.matrix() * basis).array();
}

double sin_k_integral(int n) {
    const double nn = static_cast<double>(n);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * 4.0 * nn / ((4.0 * nn * nn - 1.0) * (4.0 * nn * nn - 9.0));
}

double mode1_identity_residual(const Field& phi, int n_modes) {
    if (n_modes < 2) throw PreconditionError("mode-1 identity needs at least two modes");
    const Eigen::ArrayXXd c = sine_coefficients(phi, n_modes);
    Eigen::ArrayXd r = c.col(0);
    for (int k = 2; k <= n_modes; ++k) r += (15.0 / 4.0) * sin_k_integral(k) * c.col(k - 1);
    const double scale = c.col(0).abs().maxCoeff();
    if (scale == 0.0) return r.abs().maxCoeff();
    return r.abs().maxCoeff() / scale;
}

}  // namespace ssblow
