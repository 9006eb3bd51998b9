#include <cmath>

#include <gtest/gtest.h>

#include "ssblow/elliptic.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/spaces.hpp"

using namespace ssblow;

namespace {

GridsPtr grids(int nz, int nt, double zmin = 1e-6, double zmax = 1e6) {
    GridConfig c;
    c.n_z = nz;
    c.n_theta = nt;
    c.z_min = zmin;
    c.z_max = zmax;
    return make_grids(c);
}

// Manufactured potential phi = sin(4 theta) z^2 / (1 + z)^4 and its image under
// L^alpha_z + L_theta, both in closed form.
double phi_exact(double z, double t) { return std::sin(4 * t) * z * z / std::pow(1 + z, 4); }

double rhs_exact(double z, double t, double a) {
    const double f = z * z / std::pow(1 + z, 4);
    const double q = 2 - 4 * z / (1 + z);
    const double d1 = f * q;
    const double d2 = d1 * q + f * (-4 * z / ((1 + z) * (1 + z)));
    const double lz = -a * a * d2 - 5 * a * d1;
    const double s4 = std::sin(4 * t), c4 = std::cos(4 * t), c = std::cos(t);
    const double lt = 10 * s4 + s4 / (c * c) + 4 * std::tan(t) * c4;
    return lz * s4 + f * lt;
}

double manufactured_error(int nz, int nt, double alpha) {
    const GridsPtr g = grids(nz, nt);
    const Field F = Field::from_function(g, [&](double z, double t) { return rhs_exact(z, t, alpha); });
    const PotentialSolution s = solve_potential(F, alpha);
    const Field ex = Field::from_function(g, phi_exact);
    const Field d = s.phi - ex;
    return std::sqrt(inner(d, d) / inner(ex, ex));
}

}  // namespace

TEST(TrigIntegral, ClosedForm) {
    EXPECT_EQ(sin_k_integral(0), 0.0);
    for (int n = 1; n <= 10; ++n) {
        const double ref = (n % 2 ? -1.0 : 1.0) * 4.0 * n / ((4.0 * n * n - 1) * (4.0 * n * n - 9));
        EXPECT_NEAR(sin_k_integral(n), ref, 1e-16);
    }
}

TEST(Elliptic, ManufacturedSolutionConvergesAtFourthOrder) {
    double prev = 0.0;
    for (auto [nz, nt] : {std::pair{96, 16}, {192, 32}, {384, 64}}) {
        const double err = manufactured_error(nz, nt, 0.03);
        if (prev > 0.0) EXPECT_GE(prev / err, 4.0);
        prev = err;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(Elliptic, FStarResidualAtProductionResolution) {
    for (double mu : {0.0, 0.2}) {
        const ModelParams p = ModelParams::make(0.03, 1.0, 0.2, mu);
        const PotentialSolution s = solve_potential(f_star_field(make_grids(GridConfig{}), p), p.alpha);
        EXPECT_LT(s.residual_norm, 1e-6);
        EXPECT_NEAR(potential_residual(s.phi, f_star_field(s.phi.grids, p), p.alpha), s.residual_norm,
                    1e-3 * s.residual_norm + 1e-14);
        // g_star = (3/(4 alpha)) L^{-1}_{z,K} F* = L^{-1} Gamma* / 2.
        for (int i = 0; i < s.phi.nz(); i += 37)
            EXPECT_NEAR(s.g_star.v[i], 0.5 * l_inv_gamma_star(s.phi.grids->radial.z[i], p.gamma), 1e-7);
        EXPECT_LT(mode1_identity_residual(s.phi_tilde, s.phi.nt() / 2), 1e-6);
    }
}

TEST(Elliptic, SolveIsLinear) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(192, 32);
    const Field F1 = f_star_field(g, p);
    const Field F2 = Field::from_function(g, [](double z, double t) { return rhs_exact(z, t, 0.03); });
    const PotentialSolution a = solve_potential(F1, p.alpha);
    const PotentialSolution b = solve_potential(F2, p.alpha);
    const PotentialSolution c = solve_potential(2.0 * F1 - 3.0 * F2, p.alpha);
    const Field combo = 2.0 * a.phi - 3.0 * b.phi;
    EXPECT_LT((c.phi - combo).max_abs(), 1e-10 * combo.max_abs());
}

TEST(Elliptic, RhsSplitRemovesKComponent) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(64, 32);
    const RhsSplit split = decompose_rhs(f_star_field(g, p));
    EXPECT_LT(bracket_K(split.f_tilde).v.abs().maxCoeff(), 1e-14);
    EXPECT_LT((split.f_bar + split.f_tilde - f_star_field(g, p)).max_abs(), 1e-15);
}

TEST(Elliptic, SineCoefficientsRecoverModes) {
    const GridsPtr g = grids(8, 48);
    const Field f = Field::from_function(g, [](double, double t) { return std::sin(2 * t) - 0.5 * std::sin(6 * t); });
    const Eigen::ArrayXXd c = sine_coefficients(f, 4);
    EXPECT_NEAR(c(0, 0), 1.0, 1e-10);
    EXPECT_NEAR(c(0, 1), 0.0, 1e-10);
    EXPECT_NEAR(c(0, 2), -0.5, 1e-10);
}
