#include "ssblow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>

#include <gsl/gsl_qrng.h>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/quadrature.hpp"

namespace ssblow {

namespace {
constexpr double half_pi = std::numbers::pi / 2.0;

double rate_k(const ModelParams& p) { return 2.0 * p.gamma / (p.gamma + p.beta); }

// log(1 + e^v) without overflow.
double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }
}  // namespace

double t_star(const ModelParams& p) { return 0.5 + p.beta / (2.0 * p.gamma); }

double t_gamma(double t, const ModelParams& p) {
    if (!(t >= 0.0) || t >= t_star(p)) throw DomainError("t must satisfy 0 <= t < T*");
    return 1.0 - rate_k(p) * t;
}

FieldInterpolator::FieldInterpolator(Field f) : f_(std::move(f)) {
    const auto& th = f_.grids->angular.theta;
    theta_.reserve(th.size() + 2);
    theta_.push_back(0.0);
    for (int j = 0; j < th.size(); ++j) theta_.push_back(th[j]);
    theta_.push_back(half_pi);
}

double FieldInterpolator::z_min() const { return f_.grids->radial.z_min; }
double FieldInterpolator::z_max() const { return f_.grids->radial.z_max; }

double FieldInterpolator::operator()(double z, double theta) const {
    const auto& rg = f_.grids->radial;
    const double s = std::log(z);
    const double tol = 1e-12 * (1.0 + std::abs(rg.s[0]));
    if (!(s >= rg.s[0] - tol && s <= rg.s[rg.n - 1] + tol))
        throw DomainError("z = " + std::to_string(z) + " lies outside the radial grid");
    if (!(theta >= 0.0 && theta <= half_pi)) throw DomainError("theta outside [0, pi/2]");
    const double xs = std::clamp((s - rg.s[0]) / rg.h, 0.0, static_cast<double>(rg.n - 1));
    const int i = std::min(static_cast<int>(xs), rg.n - 2);
    const double a = xs - i;
    const int jt = static_cast<int>(std::upper_bound(theta_.begin(), theta_.end(), theta) - theta_.begin()) - 1;
    const int j = std::clamp(jt, 0, static_cast<int>(theta_.size()) - 2);
    const double b = (theta - theta_[j]) / (theta_[j + 1] - theta_[j]);
    const int nt = f_.nt();
    auto val = [&](int ii, int jj) { return (jj == 0 || jj == nt + 1) ? 0.0 : f_.v(ii, jj - 1); };
    return (1 - a) * ((1 - b) * val(i, j) + b * val(i, j + 1)) + a * ((1 - b) * val(i + 1, j) + b * val(i + 1, j + 1));
}

ProfileFn f_star_profile(const ModelParams& p) {
    const double cs = c_star(p.gamma, p.alpha);
    return [p, cs](double z, double theta) { return f_star(z, theta, p, cs); };
}

double omega_field(double t, double r, double x3, const ProfileFn& F, const ModelParams& p) {
    const double tg = t_gamma(t, p);
    const double R = std::pow(std::hypot(r, x3), p.alpha);
    return F(R / std::pow(tg, p.beta), std::atan2(x3, r)) / tg;
}

double profile_H(double x, double y, const ProfileFn& F, const ModelParams& p) {
    return F(std::pow(std::hypot(x, y), p.alpha), std::atan2(y, x));
}

Field ur_over_r(double t, const SystemState& s) {
    return (1.0 / t_gamma(t, s.params)) * stretching(s.potential, s.params.alpha);
}

Field u3_over_absx(double t, const SystemState& s) {
    const double tg = t_gamma(t, s.params);
    const Field& phi = s.potential.phi;
    const Eigen::ArrayXd c = phi.grids->angular.theta.cos();
    const Eigen::ArrayXd sn = phi.grids->angular.theta.sin();
    const Field a = times_angular(phi, c.inverse() + 2.0 * c);
    const Field b = times_angular(s.params.alpha * d_z(phi), c);
    const Field d = times_angular(partial_theta(phi, AngularBC::dirichlet), sn);
    return (-1.0 / tg) * (a + b - d);
}

double sup_sqrt_z_stretching(const SystemState& s) {
    const Field r = stretching(s.potential, s.params.alpha);
    const Eigen::ArrayXd sz = s.g.grids->radial.z.sqrt();
    return (r.v.colwise() * sz).abs().maxCoeff();
}

BlowupSeries sup_omega_series(const SystemState& s, double t_gamma_min, int points_per_decade) {
    if (!(t_gamma_min > 0.0 && t_gamma_min < 1.0) || points_per_decade < 1)
        throw ConfigError("need 0 < t_gamma_min < 1 and points_per_decade >= 1");
    const ModelParams& p = s.params;
    BlowupSeries b;
    b.sup_F = s.F.max_abs();
    const double sup_r = stretching(s.potential, p.alpha).max_abs();
    const double sup_v = sup_sqrt_z_stretching(s);
    const double k = rate_k(p);
    const int n = static_cast<int>(std::ceil(-std::log10(t_gamma_min) * points_per_decade));
    b.lower_bound_min = INFINITY;
    for (int i = 0; i <= n; ++i) {
        const double tg = std::pow(10.0, -std::log10(1.0 / t_gamma_min) * i / n);
        b.t.push_back((1.0 - tg) / k);
        b.t_gamma.push_back(tg);
        b.sup_omega.push_back(b.sup_F / tg);
        b.sup_ur_over_r.push_back(sup_r / tg);
        b.velocity_bound.push_back(std::pow(tg, -1.0 + p.beta / 2.0) * sup_v);
        b.lower_bound_min = std::min(b.lower_bound_min, b.sup_F / (p.alpha / (6.0 * p.gamma)));
        if (i == 0) {
            b.cumulative.push_back(0.0);
        } else {
            const double dt = b.t[i] - b.t[i - 1];
            b.cumulative.push_back(b.cumulative.back() + 0.5 * dt * (b.sup_omega[i] + b.sup_omega[i - 1]));
        }
    }
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = (0.5 + p.beta / (2.0 * p.gamma)) * std::abs(std::log(b.t_gamma[i]));
        sxy += x * b.cumulative[i];
        sxx += x * x;
    }
    b.fitted_c = sxy / sxx;
    return b;
}

void write_blowup_csv(const BlowupSeries& b, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "t,t_gamma,sup_omega,cumulative_omega,sup_ur_over_r,velocity_bound\n";
    os << std::setprecision(17);
    for (size_t i = 0; i < b.t.size(); ++i)
        os << b.t[i] << ',' << b.t_gamma[i] << ',' << b.sup_omega[i] << ',' << b.cumulative[i] << ','
           << b.sup_ur_over_r[i] << ',' << b.velocity_bound[i] << '\n';
}

IntegrabilityResult velocity_integrability(const ModelParams& p, double power, double bound,
                                           std::vector<double> eps) {
    if (!(power > 0.0) || eps.size() < 3) throw ConfigError("need p > 0 and at least three eps values");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    if (!(eps.back() > 0.0) || eps.front() >= t_star(p)) throw ConfigError("eps must lie in (0, T*)");
    IntegrabilityResult out;
    out.p = power;
    out.eps = eps;
    out.threshold = 2.0 / (2.0 - p.beta);
    out.analytic_finite = power * (1.0 - p.beta / 2.0) < 1.0;

    const double ts = t_star(p);
    const double k = rate_k(p);
    const double e = (-1.0 + p.beta / 2.0) * power;  // exponent of t_gamma in s(t)^p
    const double bp = std::pow(bound, power);
    const auto gl = gauss_legendre(10, 0.0, 1.0);
    for (const double ep : eps) {
        // s(t)^p integrated in sigma = ln(T* - t) on unit panels; t_gamma = k (T* - t).
        const double a = std::log(ep), b = std::log(ts);
        const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
        const double w = (b - a) / panels;
        double sum = 0.0;
        for (int m = 0; m < panels; ++m)
            for (int q = 0; q < gl.nodes.size(); ++q) {
                const double tau = std::exp(a + w * (m + gl.nodes[q]));
                sum += w * gl.weights[q] * tau * bp * std::pow(k * tau, e);
            }
        out.integral.push_back(sum);
        const double lo = k * ep;
        const double exact = std::abs(e + 1.0) < 1e-14 ? -std::log(lo) * bp / k
                                                       : bp / k * (1.0 - std::pow(lo, e + 1.0)) / (e + 1.0);
        out.closed_form.push_back(exact);
        out.max_quadrature_error = std::max(out.max_quadrature_error, std::abs(sum - exact) / std::abs(exact));
    }
    out.numeric_finite = true;
    for (size_t i = 2; i < eps.size(); ++i) {
        const double r = (out.integral[i] - out.integral[i - 1]) / (out.integral[i - 1] - out.integral[i - 2]);
        out.increment_ratio.push_back(r);
        if (r >= 0.9) out.numeric_finite = false;
    }
    const int mismatches =
        (out.numeric_finite != out.analytic_finite ? 1 : 0) + (out.max_quadrature_error > 0.01 ? 1 : 0);
    out.report = make_report("velocity_integrability", mismatches, 0.0, 0.0, Comparison::absolute,
                             {{"p", power},
                              {"beta", p.beta},
                              {"threshold", out.threshold},
                              {"analytic_finite", out.analytic_finite},
                              {"numeric_finite", out.numeric_finite},
                              {"eps", out.eps},
                              {"integral", out.integral},
                              {"closed_form", out.closed_form},
                              {"increment_ratio", out.increment_ratio},
                              {"max_quadrature_error", out.max_quadrature_error}});
    return out;
}

HolderResult holder_check(const ProfileFn& F, const ModelParams& p, double z_min, double z_max, double exponent,
                          int n_pairs) {
    if (!(z_min > 0.0 && z_max > z_min) || n_pairs < 2) throw ConfigError("invalid Hoelder sampling range");
    HolderResult out;
    out.exponent = exponent > 0.0 ? exponent : p.alpha / (20.0 * p.beta);
    const double kappa = out.exponent;
    const double s0 = std::log(z_min), s1 = std::log(z_max);
    const double env_a = p.alpha / (2.0 * p.beta) + p.alpha / 2.0;
    const double env_b = p.alpha / (2.0 * p.beta);

    // Points are (s = ln z, theta); ln|x| = s / alpha.
    struct Pt {
        double s, th, w;
    };
    auto make = [&](double s, double th) { return Pt{s, th, F(std::exp(s), th)}; };
    auto envelope = [&](const Pt& x) {
        if (x.w == 0.0) return;
        const double lx = x.s / p.alpha;
        const double lr = std::log(std::abs(x.w)) + env_a * softplus(lx) - env_b * lx;
        out.max_envelope_ratio = std::max(out.max_envelope_ratio, std::exp(lr));
        out.sup_F = std::max(out.sup_F, std::abs(x.w));
    };
    // log |x - y| from the polar coordinates of both points.
    auto log_dist = [&](const Pt& x, const Pt& y) {
        const double lx = x.s / p.alpha, ly = y.s / p.alpha;
        const double dl = ly - lx;
        const double q = std::exp(dl);
        const double sh = std::sin(0.5 * (y.th - x.th));
        const double em = std::expm1(dl);
        return lx + 0.5 * std::log(em * em + 4.0 * q * sh * sh);
    };
    auto pair = [&](const Pt& x, const Pt& y, double ld) {
        const double dw = std::abs(x.w - y.w);
        ++out.pairs;
        if (dw == 0.0) return;
        out.max_quotient = std::max(out.max_quotient, std::exp(std::log(dw) - kappa * ld));
    };

    std::unique_ptr<gsl_qrng, decltype(&gsl_qrng_free)> q(gsl_qrng_alloc(gsl_qrng_sobol, 5), gsl_qrng_free);
    double u[5];
    const int half = n_pairs / 2;
    for (int i = 0; i < n_pairs; ++i) {
        gsl_qrng_get(q.get(), u);
        const Pt x = make(s0 + (s1 - s0) * u[0], half_pi * u[1]);
        envelope(x);
        if (i < half) {
            // Nearby partner at relative scale 10^{-1} .. 10^{-7}.
            const double d = std::pow(10.0, -1.0 - 6.0 * u[2]);
            const double ys = std::clamp(x.s + (u[3] < 0.5 ? -d : d), s0, s1);
            const double yt = std::clamp(x.th + (u[4] < 0.5 ? -d : d), 0.0, half_pi);
            const Pt y = make(ys, yt);
            if (ys == x.s && yt == x.th) continue;
            pair(x, y, log_dist(x, y));
        } else {
            const Pt y = make(s0 + (s1 - s0) * u[2], half_pi * u[3]);
            if (y.s == x.s && y.th == x.th) continue;
            envelope(y);
            pair(x, y, log_dist(x, y));
        }
    }
    // Structured pairs: axis-adjacent points against the boundary values on
    // r = 0 and x3 = 0, and origin-adjacent points against the origin.
    for (int m = 0; m <= 40; ++m) {
        const double s = s0 + (s1 - s0) * m / 40.0;
        for (int e = 1; e <= 8; ++e) {
            const double d = std::pow(10.0, -e);
            for (const double edge : {0.0, half_pi}) {
                const double th = edge == 0.0 ? d : half_pi - d;
                const Pt x = make(s, th);
                const Pt y{s, edge, 0.0};
                envelope(x);
                pair(x, y, log_dist(x, y));
            }
        }
    }
    for (int m = 0; m <= 40; ++m) {
        const Pt x = make(s0 + 0.25 * (s1 - s0) * m / 40.0, half_pi * (m + 0.5) / 41.0);
        envelope(x);
        const Pt origin{0.0, x.th, 0.0};
        pair(x, origin, x.s / p.alpha);
    }

    const double scale = std::max(out.sup_F, 1e-300);
    const double worst = std::max(out.max_quotient, out.max_envelope_ratio) / scale;
    out.report = make_report("holder_check", worst, 10.0, 0.0, Comparison::upper_bound,
                             {{"exponent", kappa},
                              {"max_quotient", out.max_quotient},
                              {"max_envelope_ratio", out.max_envelope_ratio},
                              {"sup_F", out.sup_F},
                              {"pairs", out.pairs}});
    out.report.exact_identity = false;
    if (!std::isfinite(worst)) out.report.passed = false;
    return out;
}

}  // namespace ssblow
