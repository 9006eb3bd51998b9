#include <cmath>

#include <gtest/gtest.h>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/spaces.hpp"
#include "ssblow/weights.hpp"

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

Field bump_field(const GridsPtr& g, const ModelParams& p, double shift) {
    return Field::from_function(g, [&](double z, double t) {
        const double s = std::log(z) - shift;
        return std::exp(-s * s / 2) * std::pow(std::sin(2 * t), 1 + p.lambda / 2) * (1 + 0.2 * std::sin(4 * t));
    });
}

}  // namespace

TEST(LInverse, ClosedFormOfGammaStar) {
    for (double gamma : {0.5, 1.0, 1.5}) {
        const GridsPtr g = grids(1024, 8, 1e-8, 1e8);
        const RadialFn li = l_inv_z(gamma_star_fn(g, gamma));
        for (int i = 0; i < g->nz(); ++i) {
            const double z = g->radial.z[i];
            if (z < 1e-4 || z > 1e4) continue;
            EXPECT_NEAR(li.v[i] / l_inv_gamma_star(z, gamma), 1.0, 1e-6) << "gamma " << gamma << " z " << z;
        }
        EXPECT_NEAR(l_inv_z_at_zero(gamma_star_fn(g, gamma)), 2.0, 1e-4);
    }
}

TEST(LInverse, StrictTailRejectsNonDecayingInput) {
    const GridsPtr g = grids(256, 8);
    const RadialFn one = RadialFn::from_function(g, [](double) { return 1.0; });
    EXPECT_THROW(l_inv_z(one), TailError);
    EXPECT_NO_THROW(l_inv_z(one, TailPolicy::lenient));
}

TEST(LInverse, IsLinear) {
    const GridsPtr g = grids(512, 8);
    const RadialFn a = gamma_star_fn(g, 1.0);
    const RadialFn b = gamma_star_fn(g, 0.5);
    const RadialFn lhs = l_inv_z(2.0 * a - b);
    const RadialFn rhs = 2.0 * l_inv_z(a) - l_inv_z(b);
    EXPECT_LT((lhs.v - rhs.v).abs().maxCoeff(), 1e-11);
}

TEST(GTildeKernel, ConstantAndDifferentialIdentity) {
    const GridsPtr g = grids(512, 8);
    for (double alpha : {0.1, 0.025}) {
        const RadialFn one = RadialFn::from_function(g, [](double) { return 1.0; });
        EXPECT_LT((g_tilde_kernel(one, alpha).v - 1.0 / 25.0).abs().maxCoeff(), 1e-10);
        // The kernel inverts L^alpha_z against -(alpha/5) D_z h.
        const RadialFn h = RadialFn::from_function(g, [](double z) { return std::pow(z, 0.7) / (1 + z * z); });
        const RadialFn G = g_tilde_kernel(h, alpha);
        const RadialFn r = -alpha * alpha * d_zz(G) - 5 * alpha * d_z(G) + (alpha / 5) * d_z(h);
        EXPECT_LT(r.v.segment(10, g->nz() - 20).abs().maxCoeff(), 1e-6);
    }
}

TEST(Norms, AbsoluteHomogeneity) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(256, 32);
    const Field f = bump_field(g, p, 0.3);
    for (NormKind k : {NormKind::h_minus1, NormKind::h_k, NormKind::h_k_star, NormKind::e_k, NormKind::h2_eta,
                       NormKind::e2_eta}) {
        const double n1 = norm(f, k, p);
        EXPECT_GT(n1, 0.0);
        EXPECT_NEAR(norm(-2.5 * f, k, p), 2.5 * n1, 1e-12 * n1);
    }
}

TEST(Norms, TriangleInequality) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(256, 32);
    const Field a = bump_field(g, p, 0.3);
    const Field b = bump_field(g, p, -1.0);
    for (NormKind k : {NormKind::h_k, NormKind::e_k, NormKind::h2_eta})
        EXPECT_LE(norm(a + b, k, p), norm(a, k, p) + norm(b, k, p) + 1e-12);
}

TEST(Norms, MomentCorrectionZeroesBoundaryMoment) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(512, 32);
    const Field corrected = enforce_moment_condition(bump_field(g, p, 0.7), bump_field(g, p, 0.0));
    EXPECT_LT(std::abs(l_inv_zK_at_zero(corrected)), 1e-12);
}

TEST(Norms, ComputeNormsIsConsistent) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(256, 32);
    const Field f = enforce_moment_condition(bump_field(g, p, 0.7), bump_field(g, p, 0.0));
    const NormSet n = compute_norms(f, p);
    EXPECT_DOUBLE_EQ(n.h_minus1, norm_h_minus1(f, p));
    EXPECT_DOUBLE_EQ(n.h2_eta, norm_h2_eta(f, p));
    EXPECT_TRUE(to_json(n).contains("h_minus1"));
}

TEST(Weights, FieldMatchesPointwiseValues) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(32, 8, 1e-2, 1e2);
    for (const char* name : {"w_z", "wK", "wEta", "wStarLambda"}) {
        const WeightKind k = parse_weight_kind(name);
        EXPECT_EQ(to_string(k), name);
        const Field w = weight(k, g, p);
        for (int i = 0; i < g->nz(); i += 7)
            for (int j = 0; j < g->nt(); j += 3) {
                const double ref = weight_value(k, g->radial.z[i], g->angular.theta[j], p);
                EXPECT_NEAR(w(i, j), ref, 1e-12 * std::abs(ref));
            }
        EXPECT_GT(w.v.minCoeff(), 0.0);
    }
    EXPECT_THROW(parse_weight_kind("nope"), ConfigError);
}

TEST(Hardy, RadialRatioIsBounded) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const GridsPtr g = grids(1024, 32, 1e-4, 1e4);
    const Field f = enforce_moment_condition(bump_field(g, p, 0.7), bump_field(g, p, 0.0));
    EXPECT_LT(hardy_ratio(f, p), 10.0);
}
