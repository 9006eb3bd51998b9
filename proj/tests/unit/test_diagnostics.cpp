#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ssblow/diagnostics.hpp"
#include "ssblow/errors.hpp"

using namespace ssblow;

namespace {

GridsPtr grids(int nz, int nt) {
    GridConfig c;
    c.n_z = nz;
    c.n_theta = nt;
    return make_grids(c);
}

}  // namespace

TEST(Time, RescaledTimeAndBlowupTime) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    EXPECT_DOUBLE_EQ(t_star(p), 1.0);
    EXPECT_DOUBLE_EQ(t_gamma(0.0, p), 1.0);
    EXPECT_DOUBLE_EQ(t_gamma(0.5, p), 0.5);
    EXPECT_THROW(t_gamma(1.0, p), DomainError);
    EXPECT_THROW(t_gamma(-0.1, p), DomainError);
    const ModelParams q = p.with_mu(0.2);
    EXPECT_NEAR(t_gamma(t_star(q) * (1 - 1e-12), q), 0.0, 1e-10);
}

TEST(Interpolator, ReproducesNodesAndRejectsOutside) {
    const GridsPtr g = grids(64, 16);
    const Field f = Field::from_function(g, [](double z, double t) { return std::log(z) * std::sin(2 * t); });
    const FieldInterpolator I(f);
    for (int i = 0; i < g->nz(); i += 9)
        for (int j = 0; j < g->nt(); j += 5)
            EXPECT_NEAR(I(g->radial.z[i], g->angular.theta[j]), f(i, j), 1e-12);
    EXPECT_NEAR(I(1.0, 0.0), 0.0, 1e-15);
    EXPECT_THROW(I(1e-9, 0.5), DomainError);
}

TEST(Scaling, VorticityIsRescaledProfile) {
    // omega(t, x) = H(x t_gamma^{-beta/alpha}) / t_gamma holds exactly.
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2, 0.1);
    const ProfileFn F = f_star_profile(p);
    for (double t : {0.0, 0.3, 0.6})
        for (auto [r, x3] : {std::pair{0.7, 0.2}, {1.1, 1.4}, {0.01, 0.3}}) {
            const double tg = t_gamma(t, p);
            const double scale = std::pow(tg, -p.beta / p.alpha);
            const double lhs = omega_field(t, r, x3, F, p);
            const double rhs = profile_H(r * scale, x3 * scale, F, p) / tg;
            EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
        }
}

TEST(Blowup, CumulativeVorticityGrowsLogarithmically) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const SystemState s = make_state(p, Field::zeros(grids(256, 48)));
    const BlowupSeries b = sup_omega_series(s, 1e-8, 10);
    EXPECT_NEAR(b.fitted_c / b.sup_F, 1.0, 0.05);
    for (size_t k = 1; k < b.t.size(); ++k) {
        EXPECT_GT(b.t[k], b.t[k - 1]);
        EXPECT_GE(b.cumulative[k], b.cumulative[k - 1]);
    }
    EXPECT_NEAR(sup_sqrt_z_stretching(s), 1.0, 0.05);
}

TEST(Integrability, ThresholdClassification) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    for (double power : {1.0, 1.5, 2.0, 2.5}) {
        const IntegrabilityResult r = velocity_integrability(p, power);
        EXPECT_DOUBLE_EQ(r.threshold, 2.0);
        EXPECT_EQ(r.analytic_finite, power < 2.0);
        EXPECT_EQ(r.numeric_finite, r.analytic_finite) << "p " << power;
        EXPECT_LT(r.max_quadrature_error, 1e-10);
        EXPECT_TRUE(r.report.passed);
    }
}

TEST(Holder, ProfileIsHolderWithBoundedConstant) {
    const ModelParams p = ModelParams::make(0.03, 1.0, 0.2);
    const HolderResult h = holder_check(f_star_profile(p), p, 1e-6, 1e6, 0.0, 2000);
    EXPECT_NEAR(h.exponent, p.alpha / (20 * p.beta), 1e-15);
    EXPECT_GT(h.pairs, 0);
    EXPECT_TRUE(h.report.passed);
    EXPECT_LE(h.report.measured, 10.0);
}
