#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ssblow/dynamics.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/spaces.hpp"
#include "ssblow/weights.hpp"

using namespace ssblow;

namespace {

GridsPtr grids(int nz, int nt, double zmin, double zmax) {
    GridConfig c;
    c.n_z = nz;
    c.n_theta = nt;
    c.z_min = zmin;
    c.z_max = zmax;
    return make_grids(c);
}

double bump(double z, double c, double w) {
    const double s = std::log(z) - c;
    return std::exp(-s * s / (2 * w * w));
}

}  // namespace

class Coercivity : public ::testing::TestWithParam<double> {};

TEST_P(Coercivity, WeightedIdentity) {
    const double beta = GetParam();
    const ModelParams p = ModelParams::make(0.03, beta, 0.2, 0.0, true);
    const GridsPtr g = grids(4096, 8, 1e-4, 1e4);
    const RadialFn wz = radial_weight(WeightKind::w_z, g, p);
    RadialFn w2 = wz;
    w2.v = wz.v.square();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        const double c = -2 + 4 * u(rng), w = 0.5 + 0.5 * u(rng);
        const RadialFn r = RadialFn::from_function(g, [&](double z) { return bump(z, c, w); });
        const double lhs = inner_z(core_op(r, beta), r, w2);
        const double rhs = (1.0 - beta / 2.0) * weighted_l2_sq_z(r, wz);
        EXPECT_NEAR(lhs / rhs, 1.0, 1e-8);
    }
}

INSTANTIATE_TEST_SUITE_P(Betas, Coercivity, ::testing::Values(0.5, 1.0));

TEST(MainOperator, HMinusOneIdentity) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(4096, 64, 1e-4, 1e4);
    const double e = 1 + p.lambda / 2;
    const Field g0 = Field::from_function(g, [&](double z, double t) {
        return bump(z, 0.8, 0.7) * std::pow(std::sin(2 * t), e) * (1 + 0.3 * std::sin(4 * t));
    });
    const Field corr = Field::from_function(g, [&](double z, double t) { return bump(z, 0.0, 0.5) * std::pow(std::sin(2 * t), e); });
    const Field f = enforce_moment_condition(g0, corr);
    const Field wk = weight(WeightKind::wK, g, p);
    const double lhs = inner(main_op(f, p), f, wk * wk);
    EXPECT_NEAR(lhs / std::pow(norm_h_minus1(f, p), 2), 1.0, 1e-6);
}

TEST(MainOperator, LinearisedOperatorFlipsBoundaryMoment) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(2048, 64, 1e-5, 1e5);
    const Field G = Field::from_function(g, [](double z, double t) { return bump(z, 0.5, std::sqrt(0.5)) * std::pow(std::sin(2 * t), 1.5); });
    const double m = l_inv_zK_at_zero(G);
    EXPECT_NEAR(l_inv_zK_at_zero(linear_op(G, p)) / m, -1.0, 1e-6);
}

TEST(Remainders, R0ClosedFormAndMoment) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2, 0.05);
    const GridsPtr g = make_grids(GridConfig{});
    const Field a = remainder_R0(g, p);
    const Field b = remainder_R0_definition(g, p);
    EXPECT_LT((a - b).max_abs(), 1e-10 * a.max_abs());
    EXPECT_NEAR(l_inv_zK_at_zero(a), -4 * p.alpha * p.mu / 3, 1e-6 * 4 * p.alpha * p.mu / 3);
}

TEST(Remainders, R0VanishesAtZeroMu) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    EXPECT_EQ(remainder_R0(make_grids(GridConfig{}), p).max_abs(), 0.0);
}

TEST(NullStructure, PairingVanishesForCompactData) {
    const GridsPtr g = grids(8192, 32, 0.1, 10.0);
    const Field f = Field::from_function(g, [](double z, double t) {
        const double x = std::log(z) / 2.0;
        return (std::abs(x) < 1.0 ? std::pow(1 - x * x, 8) : 0.0) * std::sin(2 * t) * (1 + 0.3 * std::sin(4 * t));
    });
    const Field phi = Field::from_function(g, [](double z, double t) {
        const double s = std::log(z);
        return std::exp(-s * s) * std::sin(2 * t) + 0.5 * std::exp(-(s - 1) * (s - 1)) * std::sin(6 * t);
    });
    const NullPairing np = null_pairing(phi, f, 0.03);
    EXPECT_LT(np.normalized, 1e-8);
    EXPECT_GT(np.norm_tf, 0.0);
    const double scale = std::max(v_of(phi).max_abs(), u_of(phi, 0.03).max_abs());
    EXPECT_LT(divergence_identity_residual(phi, 0.03).max_abs() / scale, 1e-8);
}

TEST(WeightIdentities, AngularLogDerivatives) {
    for (double xi : {0.8, 1.003, 1.5})
        for (double t = 0.05; t < 1.55; t += 0.1) {
            const double s = std::sin(t);
            EXPECT_NEAR(wbar_log_dtheta(t, xi), -xi * std::cos(2 * t) + s * s, 1e-13);
        }
    for (double xi : {0.0, 0.5, 2.0})
        for (double t = 0.05; t < 1.55; t += 0.1) {
            const double s = std::sin(t), c2 = std::cos(2 * t);
            EXPECT_NEAR(null_weight_log_dtheta(t, xi) + c2 - s * s, (1 - 2 * xi) * c2, 1e-13);
        }
}

TEST(WeightIdentities, RadialLogDerivativeMatchesFiniteDifference) {
    // d ln(w_z z^{1/2 - 3/(2 alpha)}) / d ln z, compared by central differences.
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    auto lw = [&](double s) {
        const double z = std::exp(s);
        return std::log(weight_factors::w_z(z, p.beta)) + (0.5 - 1.5 / p.alpha) * s;
    };
    for (double z : {1e-3, 0.5, 1.0, 20.0}) {
        const double h = 1e-4, s = std::log(z);
        const double fd = (lw(s + h) - lw(s - h)) / (2 * h);
        EXPECT_NEAR(wbar_log_dz(z, p), fd, 1e-6 * std::abs(fd));
    }
}

TEST(State, SystemStateAtZeroCorrection) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    GridConfig c;
    c.n_z = 128;
    c.n_theta = 32;
    const GridsPtr g = make_grids(c);
    const SystemState s = make_state(p, Field::zeros(g));
    EXPECT_LT((s.F - s.f_star).max_abs(), 1e-300);
    EXPECT_TRUE(remainder_R2(s).all_finite());
}
