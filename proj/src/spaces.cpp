#include "ssblow/spaces.hpp"

#include <cmath>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/quadrature.hpp"
#include "ssblow/weights.hpp"

namespace ssblow {

namespace {

constexpr int kStencil = 6;

// Weights of int_{s_i}^{s_i + h} exp(kappa (t - s_i - h)) f(t) dt over the
// six-point stencil, for each position `o` of the interval inside the stencil.
std::array<std::array<double, kStencil>, kStencil - 1> interval_weights(double h, double kappa) {
    static const QuadratureRule ref = gauss_legendre(32, 0.0, 1.0);
    std::array<std::array<double, kStencil>, kStencil - 1> out{};
    for (int o = 0; o < kStencil - 1; ++o) {
        Eigen::ArrayXd nodes(kStencil);
        for (int k = 0; k < kStencil; ++k) nodes[k] = static_cast<double>(k - o);
        std::array<double, kStencil> w{};
        for (Eigen::Index q = 0; q < ref.nodes.size(); ++q) {
            const double t = ref.nodes[q];
            const double kern = std::exp(kappa * h * (t - 1.0));
            const Eigen::ArrayXd lw = lagrange_weights(nodes, t);
            for (int k = 0; k < kStencil; ++k) w[k] += ref.weights[q] * kern * lw[k] * h;
        }
        out[o] = w;
    }
    return out;
}

int interval_stencil_start(int i, int n) { return std::clamp(i - 2, 0, n - kStencil); }

void require_stencil(int n) {
    if (n < kStencil) throw ConfigError("radial grid too coarse for cumulative quadrature");
}

// Integral of f over the semi-infinite range beyond one end of the grid,
// modelling f as a power of z there. `at_start` selects the z -> 0 end.
double power_law_closure(const Eigen::ArrayXd& f, const RadialGrid& g, bool at_start, TailPolicy policy) {
    const int n = g.n;
    auto val = [&](int k) { return at_start ? f[k] : f[n - 1 - k]; };
    const double f_end = val(0);
    if (f_end == 0.0) return 0.0;

    // Points within one decade of the end, at least five.
    const int m = std::max(5, std::min(n, static_cast<int>(std::floor(std::log(10.0) / g.h)) + 1));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    double fmax = 0.0;
    for (int k = 0; k < m; ++k) {
        const double v = std::abs(val(k));
        fmax = std::max(fmax, v);
        if (v <= 1e-300) continue;
        const double x = k * g.h;  // distance from the end, inward
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (fmax == 0.0) return 0.0;
    // ln|f| grows inward at rate sigma when f decays outward like exp(-sigma |s|).
    double sigma_fit = -1.0;
    if (cnt >= 3) sigma_fit = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    if (!(sigma_fit > 0.1)) {
        if (policy == TailPolicy::lenient) return 0.0;
        throw TailError("power-law tail fit gives decay exponent " + std::to_string(sigma_fit) +
                        " (need > 0.1)");
    }
    // Local exponent at the very end from a one-sided fourth-order difference
    // of ln|f|; more accurate than the decade fit when f is a perturbed power.
    double sigma = sigma_fit;
    bool same_sign = true;
    for (int k = 0; k < 5; ++k)
        if (!(val(k) * f_end > 0.0)) same_sign = false;
    if (same_sign) {
        static const double c[5] = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25};
        double d = 0.0;
        for (int k = 0; k < 5; ++k) d += c[k] * std::log(std::abs(val(k)));
        const double sigma_end = d / g.h;
        if (sigma_end > 0.1 && std::isfinite(sigma_end)) sigma = sigma_end;
    }
    return f_end / sigma;
}

}  // namespace

RadialFn l_inv_z(const RadialFn& f, TailPolicy policy) {
    const auto& g = f.grids->radial;
    const int n = g.n;
    require_stencil(n);
    static thread_local double cached_h = -1.0;
    static thread_local std::array<std::array<double, kStencil>, kStencil - 1> w{};
    if (cached_h != g.h) {
        w = interval_weights(g.h, 0.0);
        cached_h = g.h;
    }
    RadialFn out = RadialFn::zeros(f.grids);
    out.v[n - 1] = power_law_closure(f.v, g, false, policy);
    for (int i = n - 2; i >= 0; --i) {
        const int st = interval_stencil_start(i, n);
        const auto& wi = w[i - st];
        double acc = 0.0;
        for (int k = 0; k < kStencil; ++k) acc += wi[k] * f.v[st + k];
        out.v[i] = out.v[i + 1] + acc;
    }
    return out;
}

double l_inv_z_at_zero(const RadialFn& f, TailPolicy policy) {
    const RadialFn li = l_inv_z(f, policy);
    return li.v[0] + power_law_closure(f.v, f.grids->radial, true, policy);
}

RadialFn bracket_K(const Field& f) { return inner_theta(f, k_theta_nodes(f.grids)); }

RadialFn l_inv_zK(const Field& f, TailPolicy policy) { return l_inv_z(bracket_K(f), policy); }

double l_inv_zK_at_zero(const Field& f, TailPolicy policy) {
    return l_inv_z_at_zero(bracket_K(f), policy);
}

RadialFn g_tilde_kernel(const RadialFn& h, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    const auto& g = h.grids->radial;
    const int n = g.n;
    require_stencil(n);
    const double kappa = 5.0 / alpha;
    const auto w = interval_weights(g.h, kappa);
    const double decay = std::exp(-kappa * g.h);

    // Below z_min, h is modelled as a power z^a: the exact contribution is h0/(kappa + a).
    double a = 0.0;
    if (h.v[0] != 0.0) {
        bool same_sign = true;
        for (int k = 0; k < 5; ++k)
            if (!(h.v[k] * h.v[0] > 0.0)) same_sign = false;
        if (same_sign) {
            static const double c[5] = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25};
            double d = 0.0;
            for (int k = 0; k < 5; ++k) d += c[k] * std::log(std::abs(h.v[k]));
            d /= g.h;
            if (std::isfinite(d) && d > -0.5 * kappa) a = d;
        }
    }
    RadialFn out = RadialFn::zeros(h.grids);
    double acc = h.v[0] / (kappa + a);
    out.v[0] = acc;
    for (int i = 0; i < n - 1; ++i) {
        const int st = interval_stencil_start(i, n);
        const auto& wi = w[i - st];
        double inc = 0.0;
        for (int k = 0; k < kStencil; ++k) inc += wi[k] * h.v[st + k];
        acc = decay * acc + inc;
        out.v[i + 1] = acc;
    }
    out.v /= 5.0 * alpha;
    return out;
}

RadialFn g_star(const Field& f, double alpha, TailPolicy policy) {
    return (3.0 / (4.0 * alpha)) * l_inv_zK(f, policy);
}

Eigen::ArrayXd k_theta_nodes(const GridsPtr& g) {
    Eigen::ArrayXd k(g->nt());
    for (int j = 0; j < g->nt(); ++j) k[j] = k_theta(g->angular.theta[j]);
    return k;
}

RadialFn gamma_star_fn(const GridsPtr& g, double gamma) {
    return RadialFn::from_function(g, [&](double z) { return gamma_star(z, gamma); });
}

RadialFn l_inv_gamma_star_fn(const GridsPtr& g, double gamma) {
    return RadialFn::from_function(g, [&](double z) { return l_inv_gamma_star(z, gamma); });
}

Field f_star_field(const GridsPtr& g, const ModelParams& p) {
    const double cs = c_star(p.gamma, p.alpha);
    Eigen::ArrayXd ang(g->nt());
    for (int j = 0; j < g->nt(); ++j) ang[j] = gamma_theta(g->angular.theta[j], p.gamma, p.alpha) / cs;
    return outer((2.0 * p.alpha / 3.0) * gamma_star_fn(g, p.gamma), ang);
}

double norm_h_minus1(const Field& f, const ModelParams& p, TailPolicy policy) {
    const double b = p.beta;
    const double cs = c_star(b, p.alpha);
    const Field wk = weight(WeightKind::wK, f.grids, p);
    const RadialFn ell = l_inv_zK(f, policy);
    const RadialFn wz = radial_weight(WeightKind::w_z, f.grids, p);
    const RadialFn gs = gamma_star_fn(f.grids, b);
    const RadialFn lg = l_inv_gamma_star_fn(f.grids, b);
    RadialFn w1 = wz;
    w1.v *= gs.v.sqrt();
    RadialFn w2 = wz;
    w2.v *= (gs.v * lg.v).sqrt();
    const double t0 = 0.5 * (2.0 - b) * weighted_l2_sq(f, wk);
    const double t1 = (1.0 - b) / (2.0 * cs * b) * weighted_l2_sq_z(ell, w1);
    const double t2 = 1.0 / (2.0 * cs * b) * weighted_l2_sq_z(ell, w2);
    return std::sqrt(std::max(0.0, t0 + t1 + t2));
}

namespace {

// D_z^i D_theta^j f for all i + j <= k, indexed [j][i].
std::vector<std::vector<Field>> mixed_derivatives(const Field& f, int k) {
    std::vector<std::vector<Field>> d(k + 1);
    Field th = f;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) th = d_theta(th, j == 1 ? AngularBC::none : AngularBC::dirichlet);
        Field cur = th;
        for (int i = 0; i + j <= k; ++i) {
            if (i > 0) cur = d_z(cur);
            d[j].push_back(cur);
        }
    }
    return d;
}

void check_order(int k) {
    if (k < 0 || k > 4) throw UnsupportedError("norm orders above 4 are not supported");
}

}  // namespace

double norm_h_k(const Field& f, int k, const ModelParams& p, bool starred) {
    check_order(k);
    const Field we = weight(starred ? WeightKind::wStarEta : WeightKind::wEta, f.grids, p);
    const Field wl = weight(starred ? WeightKind::wStarLambda : WeightKind::wLambda, f.grids, p);
    const auto d = mixed_derivatives(f, k);
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += weighted_l2_sq(d[0][i], we);
    for (int j = 1; j <= k; ++j)
        for (int i = 0; i + j <= k; ++i) s += weighted_l2_sq(d[j][i], wl);
    return std::sqrt(s);
}

double norm_e_k(const Field& f, int k, const ModelParams& p) {
    check_order(k);
    const Field wl = weight(WeightKind::wLambda, f.grids, p);
    return std::sqrt(p.alpha * (weighted_l2_sq(f, wl) + weighted_l2_sq(d_z_pow(f, k), wl)));
}

double norm_h2_eta(const Field& f, const ModelParams& p) {
    const double e = 1.0 - p.eta;
    const Field we = weight(WeightKind::wEta, f.grids, p);
    const Field wl = weight(WeightKind::wLambda, f.grids, p);
    const Field dz = d_z(f);
    const Field dt = d_theta(f);
    const Field dzdt = d_z(dt);
    const Field dtt = d_theta(dt, AngularBC::dirichlet);
    const Field dzz = d_z(dz);
    const double s = e * e * (weighted_l2_sq(f, we) + weighted_l2_sq(dz, we) + weighted_l2_sq(dzdt, wl)) +
                     weighted_l2_sq(dt, wl) / (e * e) + weighted_l2_sq(dtt, wl) +
                     std::pow(e, 4) * weighted_l2_sq(dzz, we);
    return std::sqrt(s);
}

double norm_e2_eta(const Field& f, const ModelParams& p) {
    const double e = 1.0 - p.eta;
    const Field wl = weight(WeightKind::wLambda, f.grids, p);
    const double s = p.alpha * e * e * weighted_l2_sq(f, wl) +
                     p.alpha * std::pow(e, 4) * weighted_l2_sq(d_z_pow(f, 2), wl);
    return std::sqrt(s);
}

double norm_h_n_wz(const Field& f, int n, const RadialFn& wz) {
    check_order(n);
    const Field w = outer(wz, Eigen::ArrayXd::Ones(f.nt()));
    const auto d = mixed_derivatives(f, n);
    double s = 0.0;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i + j <= n; ++i) s += weighted_l2_sq(d[j][i], w);
    return std::sqrt(s);
}

double norm(const Field& f, NormKind which, const ModelParams& p, int k) {
    switch (which) {
        case NormKind::h_minus1: return norm_h_minus1(f, p);
        case NormKind::h_k: return norm_h_k(f, k, p, false);
        case NormKind::h_k_star: return norm_h_k(f, k, p, true);
        case NormKind::e_k: return norm_e_k(f, k, p);
        case NormKind::h2_eta: return norm_h2_eta(f, p);
        case NormKind::e2_eta: return norm_e2_eta(f, p);
    }
    return 0.0;
}

NormSet compute_norms(const Field& f, const ModelParams& p, TailPolicy policy) {
    NormSet n;
    n.params = p;
    n.h_minus1 = norm_h_minus1(f, p, policy);
    for (int k = 0; k <= 4; ++k) {
        n.h_k[k] = norm_h_k(f, k, p, false);
        n.h_k_star[k] = norm_h_k(f, k, p, true);
        n.e_k[k] = norm_e_k(f, k, p);
    }
    n.h2_eta = norm_h2_eta(f, p);
    n.e2_eta = norm_e2_eta(f, p);
    return n;
}

nlohmann::json to_json(const NormSet& n) {
    return {{"h_minus1", n.h_minus1},
            {"h_k", n.h_k},
            {"h_k_star", n.h_k_star},
            {"e_k", n.e_k},
            {"h2_eta", n.h2_eta},
            {"e2_eta", n.e2_eta},
            {"params",
             {{"alpha", n.params.alpha},
              {"beta", n.params.beta},
              {"eta", n.params.eta},
              {"lambda", n.params.lambda},
              {"mu", n.params.mu},
              {"gamma", n.params.gamma}}}};
}

Field enforce_moment_condition(const Field& g0, const Field& corrector) {
    const double m0 = l_inv_zK_at_zero(g0);
    const double mc = l_inv_zK_at_zero(corrector);
    if (mc == 0.0) throw NumericError("moment corrector has zero moment");
    return g0 - (m0 / mc) * corrector;
}

double hardy_ratio(const Field& g, const ModelParams& p) {
    const RadialFn ell = l_inv_zK(g);
    const RadialFn wz = radial_weight(WeightKind::w_z, g.grids, p);
    const Field wk = weight(WeightKind::wK, g.grids, p);
    return std::sqrt(weighted_l2_sq_z(ell, wz) / weighted_l2_sq(g, wk));
}

}  // namespace ssblow
