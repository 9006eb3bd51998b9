#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ssblow/dynamics.hpp"
#include "ssblow/field.hpp"
#include "ssblow/params.hpp"
#include "ssblow/report.hpp"

namespace ssblow {

// Rescaled time t_gamma = 1 - 2 gamma t / (gamma + beta). Throws DomainError
// unless 0 <= t < T*.
double t_gamma(double t, const ModelParams& p);
// Blow-up time T* = 1/2 + beta / (2 gamma).
double t_star(const ModelParams& p);

// Profile F(z, theta) as a callable.
using ProfileFn = std::function<double(double z, double theta)>;

// Bilinear interpolation of a Field in (ln z, theta). The angular range is
// closed with the boundary value 0 at theta = 0 and theta = pi/2; z outside
// the grid throws DomainError.
class FieldInterpolator {
public:
    explicit FieldInterpolator(Field f);
    double operator()(double z, double theta) const;
    double z_min() const;
    double z_max() const;

private:
    Field f_;
    std::vector<double> theta_;  // nodes with both endpoints appended
};

// Closed-form F*_gamma as a ProfileFn.
ProfileFn f_star_profile(const ModelParams& p);

// Vorticity omega(t, r, x3) = F(R / t_gamma^beta, arctan(x3 / r)) / t_gamma with R = |x|^alpha.
double omega_field(double t, double r, double x3, const ProfileFn& F, const ModelParams& p);
// Rescaled profile H(x, y) = F((x^2 + y^2)^{alpha/2}, arctan(y / x)).
double profile_H(double x, double y, const ProfileFn& F, const ModelParams& p);

// Time samples and blow-up quantities along t -> T*.
struct BlowupSeries {
    std::vector<double> t, t_gamma;
    std::vector<double> sup_omega;       // ||omega(t)||_inf
    std::vector<double> cumulative;      // int_0^t ||omega||_inf ds (trapezoid)
    std::vector<double> sup_ur_over_r;   // ||u_r / r (t)||_inf
    std::vector<double> velocity_bound;  // t_gamma^{-1 + beta/2} sup |z^{1/2} R(Phi)|
    double sup_F = 0.0;
    double fitted_c = 0.0;      // least-squares slope of cumulative against (1/2 + beta/(2 gamma)) |ln t_gamma|
    double lower_bound_min = 0.0;  // min_k t_gamma ||omega|| / (alpha / (6 gamma))
};

// Samples `points_per_decade` geometric steps in t_gamma from 1 down to
// t_gamma_min, then fills the series from the solved state.
BlowupSeries sup_omega_series(const SystemState& s, double t_gamma_min = 1e-8, int points_per_decade = 20);
void write_blowup_csv(const BlowupSeries& b, const std::string& path);

// u_r / r = R(Phi) / t_gamma.
Field ur_over_r(double t, const SystemState& s);
// u_3 / |x| = -((cos)^{-1} Phi + 2 cos Phi + alpha cos D_z Phi - sin d_theta Phi) / t_gamma.
Field u3_over_absx(double t, const SystemState& s);
// sup over the grid of |z^{1/2} R(Phi)|.
double sup_sqrt_z_stretching(const SystemState& s);

// Time integrability of t_gamma^{(-1 + beta/2)} against the power p.
struct IntegrabilityResult {
    double p = 0.0;
    double threshold = 0.0;  // 2 / (2 - beta)
    bool analytic_finite = false;
    bool numeric_finite = false;
    std::vector<double> eps, integral, closed_form, increment_ratio;
    double max_quadrature_error = 0.0;  // relative, numeric vs closed form
    Report report;
};

// Integrates s(t)^p with s(t) = bound * t_gamma^{-1 + beta/2} over [0, T* - eps]
// for each eps, and classifies the trend: the integral is divergent when
// successive increments do not shrink (ratio >= 0.9 per decade of eps).
IntegrabilityResult velocity_integrability(const ModelParams& p, double power, double bound = 1.0,
                                           std::vector<double> eps = {1e-1, 1e-2, 1e-3});

// Hoelder and envelope checks on omega_0(x) = F(|x|^alpha, arctan(x3 / r)).
struct HolderResult {
    double exponent = 0.0;
    double max_quotient = 0.0;
    double max_envelope_ratio = 0.0;
    double sup_F = 0.0;
    int pairs = 0;
    Report report;
};

// Samples quasi-random and axis-adjacent pairs with ln z in [ln z_min, ln z_max].
// exponent <= 0 selects alpha / (20 beta).
HolderResult holder_check(const ProfileFn& F, const ModelParams& p, double z_min, double z_max,
                          double exponent = 0.0, int n_pairs = 10000);

}  // namespace ssblow
