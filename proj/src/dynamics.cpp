#include "ssblow/dynamics.hpp"

#include <cmath>
#include <complex>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/weights.hpp"

namespace ssblow {

namespace {

Eigen::ArrayXd sin_sq(const AngularGrid& ag) { return ag.theta.sin().square(); }

// 2 cos(2 theta) - 2 sin^2(theta), the angular factor of V(h sin 2theta) / h.
Eigen::ArrayXd v_factor(const AngularGrid& ag) { return 2.0 * ag.cos2 - 2.0 * sin_sq(ag); }

// D_z F*_gamma and D_theta F*_gamma in closed form.
Field dz_f_star(const GridsPtr& g, const ModelParams& p) {
    const double cs = c_star(p.gamma, p.alpha);
    RadialFn r = RadialFn::from_function(g, [&](double z) { return dz_gamma_star(z, p.gamma, 1); });
    Eigen::ArrayXd a(g->nt());
    for (int j = 0; j < g->nt(); ++j) a[j] = (2.0 * p.alpha / 3.0) * gamma_theta(g->angular.theta[j], p.gamma, p.alpha) / cs;
    return outer(r, a);
}

Field dtheta_f_star(const GridsPtr& g, const ModelParams& p) {
    const double cs = c_star(p.gamma, p.alpha);
    Eigen::ArrayXd a(g->nt());
    for (int j = 0; j < g->nt(); ++j)
        a[j] = (2.0 * p.alpha / 3.0) * dtheta_gamma_theta(g->angular.theta[j], p.gamma, p.alpha, 1) / cs;
    return outer(gamma_star_fn(g, p.gamma), a);
}

}  // namespace

Field u_of(const Field& phi, double alpha) { return -3.0 * phi - alpha * d_z(phi); }

Field v_of(const Field& phi) {
    return partial_theta(phi, AngularBC::dirichlet) - times_angular(phi, phi.grids->angular.tan);
}

Field stretching(const Field& phi, double alpha) {
    return v_of(phi) - times_angular(u_of(phi, alpha), phi.grids->angular.tan);
}

Field u_over_sin2(const PotentialSolution& s, double alpha) {
    const auto& ag = s.phi.grids->angular;
    const RadialFn g = s.g_star + s.g_tilde;
    const RadialFn dg = s.dz_g_star + s.dz_g_tilde;
    const RadialFn main = -3.0 * g - alpha * dg;
    Field rest = times_angular(u_of(s.phi_tilde, alpha), ag.sin2.inverse());
    return rest + outer(main, Eigen::ArrayXd::Ones(ag.n));
}

Field v_of(const PotentialSolution& s) {
    const auto& ag = s.phi.grids->angular;
    return outer(s.g_star + s.g_tilde, v_factor(ag)) + v_of(s.phi_tilde);
}

namespace {

// R(h sin 2theta) = h (2 cos 2theta - 2 sin^2 theta) + 2 sin^2 theta (3 h + alpha D_z h).
Field stretching_sin2(const RadialFn& h, const RadialFn& dz_h, double alpha, const AngularGrid& ag) {
    return outer(h, v_factor(ag)) + outer(3.0 * h + alpha * dz_h, 2.0 * sin_sq(ag));
}

}  // namespace

Field stretching(const PotentialSolution& s, double alpha) {
    const auto& ag = s.phi.grids->angular;
    return stretching_sin2(s.g_star, s.dz_g_star, alpha, ag) + stretching_remainder(s, alpha);
}

Field stretching_remainder(const PotentialSolution& s, double alpha) {
    const auto& ag = s.phi.grids->angular;
    return stretching_sin2(s.g_tilde, s.dz_g_tilde, alpha, ag) + stretching(s.phi_tilde, alpha);
}

Field transport(const PotentialSolution& s, const Field& f, double alpha) {
    return u_over_sin2(s, alpha) * d_theta(f) + alpha * (v_of(s) * d_z(f));
}

Field transport(const Field& phi, const Field& f, double alpha) {
    return u_of(phi, alpha) * partial_theta(f) + alpha * (v_of(phi) * d_z(f));
}

Field divergence_identity_residual(const Field& phi, double alpha) {
    const auto& ag = phi.grids->angular;
    const Eigen::ArrayXd c = ag.theta.cos();
    const Field u = u_of(phi, alpha);
    const Field v = v_of(phi);
    const Field div_theta = times_angular(partial_theta(times_angular(u, c), AngularBC::dirichlet), c.inverse());
    return div_theta + alpha * d_z(v) + 3.0 * v;
}

NullPairing null_pairing(const Field& phi, const Field& f, double alpha) {
    const auto& g = *f.grids;
    const Field t = transport(phi, f, alpha);
    // W dz = z^{3/alpha} cos(theta) d(ln z); rescale by the largest value.
    const Eigen::ArrayXd logw = (3.0 / alpha) * g.radial.s;
    NullPairing out;
    out.log_scale = logw.maxCoeff();
    const Eigen::ArrayXd wz = (logw - out.log_scale).exp() * g.radial.ds_weights;
    const Eigen::ArrayXd wt = g.angular.theta.cos() * g.angular.quad_weights;
    auto quad = [&](const Eigen::ArrayXXd& a) { return wz.matrix().dot(a.matrix() * wt.matrix()); };
    out.pairing = quad(t.v * f.v);
    out.norm_tf = std::sqrt(quad(t.v.square()));
    out.norm_f = std::sqrt(quad(f.v.square()));
    const double den = out.norm_tf * out.norm_f;
    out.normalized = den > 0.0 ? std::abs(out.pairing) / den : 0.0;
    return out;
}

RadialFn core_op(const RadialFn& g, double beta) {
    RadialFn out = g + beta * d_z(g);
    out.v -= l_inv_gamma_star_fn(g.grids, beta).v * g.v;
    return out;
}

Field core_op(const Field& g, const ModelParams& p) {
    return g + p.beta * d_z(g) - times_radial(g, l_inv_gamma_star_fn(g.grids, p.beta));
}

Field main_op(const Field& g, const ModelParams& p, TailPolicy policy) {
    const ModelParams pb = p.with_mu(0.0);
    const Field fs = f_star_field(g.grids, pb);
    return core_op(g, p) - (3.0 / (2.0 * p.alpha)) * times_radial(fs, l_inv_zK(g, policy));
}

Field linear_op(const Field& g, const ModelParams& p, TailPolicy policy) {
    const Field fs = f_star_field(g.grids, p);
    return g + p.beta * d_z(g) - times_radial(g, l_inv_gamma_star_fn(g.grids, p.gamma)) -
           (3.0 / (2.0 * p.alpha)) * times_radial(fs, l_inv_zK(g, policy));
}

Field remainder_R0(const GridsPtr& g, const ModelParams& p) {
    const RadialFn r = RadialFn::from_function(g, [&](double z) {
        const double u = std::pow(z, 1.0 / p.gamma);
        return std::isinf(u) ? -2.0 * p.mu : -2.0 * p.mu * u / (1.0 + u);
    });
    return times_radial(f_star_field(g, p), r);
}

Field remainder_R0_definition(const GridsPtr& g, const ModelParams& p) {
    const double coef = p.gamma - (1.0 + p.mu) * p.beta;
    return -p.mu * f_star_field(g, p) + coef * dz_f_star(g, p);
}

Field remainder_R1(const Field& g, const ModelParams& p) { return -p.mu * g - p.mu * p.beta * d_z(g); }

SystemState make_state(const ModelParams& p, const Field& g, const EllipticSolver& solver) {
    if (solver.alpha() != p.alpha) throw PreconditionError("solver alpha does not match parameters");
    SystemState s;
    s.params = p;
    s.g = g;
    s.f_star = f_star_field(g.grids, p);
    s.F = s.f_star + g;
    s.potential = solver.solve(s.F);
    return s;
}

SystemState make_state(const ModelParams& p, const Field& g) {
    return make_state(p, g, EllipticSolver(g.grids, p.alpha));
}

Field remainder_R2(const SystemState& s, TailPolicy policy) {
    const double a = s.params.alpha;
    const auto& ag = s.F.grids->angular;
    const Field quad = (3.0 / (2.0 * a)) * times_radial(s.g, l_inv_zK(s.g, policy));
    const Field proj = times_angular(times_radial(s.F, bracket_K(s.F)), -1.5 * sin_sq(ag));
    return quad + proj + stretching_remainder(s.potential, a) * s.F;
}

Field transport_term(const SystemState& s) {
    const double a = s.params.alpha;
    const GridsPtr& g = s.F.grids;
    const Field dtheta_f = dtheta_f_star(g, s.params) + d_theta(s.g);
    const Field dz_f = dz_f_star(g, s.params) + d_z(s.g);
    return u_over_sin2(s.potential, a) * dtheta_f + a * (v_of(s.potential) * dz_f);
}

double mu_from_forcing(const Field& r2_minus_t, double alpha, TailPolicy policy) {
    const double mu = (3.0 / (4.0 * alpha)) * l_inv_zK_at_zero(r2_minus_t, policy);
    if (!std::isfinite(mu) || std::abs(mu) >= 1.0)
        throw DivergenceError("mu update left (-1, 1): " + std::to_string(mu));
    return mu;
}

double mu_update(const SystemState& s, TailPolicy policy) {
    return mu_from_forcing(remainder_R2(s, policy) - transport_term(s), s.params.alpha, policy);
}

Field system_residual(const SystemState& s, TailPolicy policy) {
    return linear_op(s.g, s.params, policy) + transport_term(s) - remainder_R0(s.F.grids, s.params) -
           remainder_R1(s.g, s.params) - remainder_R2(s, policy);
}

Field main_equation_residual(const SystemState& s) {
    const auto& p = s.params;
    const Field dz_f = dz_f_star(s.F.grids, p) + d_z(s.g);
    return (1.0 + p.mu) * s.F + (1.0 + p.mu) * p.beta * dz_f + transport_term(s) -
           stretching(s.potential, p.alpha) * s.F;
}

namespace {

constexpr double kStep = 1e-30;
using cd = std::complex<double>;

// d/dx ln f(x) by complex step, with f evaluated as a sum of complex logs.
template <class LogF>
double log_derivative(double x, LogF logf) {
    return std::imag(logf(cd(x, kStep))) / kStep;
}

}  // namespace

double wbar_log_dtheta(double theta, double xi) {
    auto logf = [&](cd t) { return -0.5 * xi * std::log(std::sin(2.0 * t)) - 0.5 * std::log(std::cos(t)); };
    return std::sin(2.0 * theta) * log_derivative(theta, logf);
}

double wbar_log_dz(double z, const ModelParams& p) {
    auto logf = [&](cd x) {
        return std::log(weight_factors::w_z(x, p.beta)) + (0.5 - 1.5 / p.alpha) * std::log(x);
    };
    return z * log_derivative(z, logf);
}

double null_weight_log_dtheta(double theta, double xi) {
    auto logf = [&](cd t) { return -xi * std::log(std::sin(2.0 * t)) - 0.5 * std::log(std::cos(t)); };
    return std::sin(2.0 * theta) * log_derivative(theta, logf);
}

}  // namespace ssblow
