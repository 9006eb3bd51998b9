#pragma once

#include <array>

#include <nlohmann/json.hpp>

#include "ssblow/field.hpp"
#include "ssblow/params.hpp"

namespace ssblow {

// What to do when a power-law end closure cannot be fitted.
enum class TailPolicy {
    strict,   // throw TailError
    lenient,  // drop the closure (treat the truncated remainder as zero)
};

// L^{-1}_z f (z) = int_z^inf f(rho)/rho d rho. Sixth-order cumulative
// quadrature in ln z plus a power-law closure beyond z_max.
RadialFn l_inv_z(const RadialFn& f, TailPolicy policy = TailPolicy::strict);
// The same integral from z = 0, i.e. the extrapolated value L^{-1}_z f (0).
double l_inv_z_at_zero(const RadialFn& f, TailPolicy policy = TailPolicy::strict);

// <f, K>_theta as a radial function.
RadialFn bracket_K(const Field& f);
// L^{-1}_{z,K} f = L^{-1}_z <f, K>_theta and its value at z = 0.
RadialFn l_inv_zK(const Field& f, TailPolicy policy = TailPolicy::strict);
double l_inv_zK_at_zero(const Field& f, TailPolicy policy = TailPolicy::strict);

// (1/(5 alpha)) z^{-5/alpha} int_0^z rho^{5/alpha - 1} h(rho) d rho, evaluated
// as an exponentially weighted cumulative integral in ln z.
RadialFn g_tilde_kernel(const RadialFn& h, double alpha);

// (3/(4 alpha)) L^{-1}_{z,K} f.
RadialFn g_star(const Field& f, double alpha, TailPolicy policy = TailPolicy::strict);

enum class NormKind { h_minus1, h_k, h_k_star, e_k, h2_eta, e2_eta };

double norm_h_minus1(const Field& f, const ModelParams& p, TailPolicy policy = TailPolicy::strict);
double norm_h_k(const Field& f, int k, const ModelParams& p, bool starred = false);
double norm_e_k(const Field& f, int k, const ModelParams& p);
double norm_h2_eta(const Field& f, const ModelParams& p);
double norm_e2_eta(const Field& f, const ModelParams& p);
// sum over i + j <= n of ||D_z^i D_theta^j f W_z||^2, square-rooted.
double norm_h_n_wz(const Field& f, int n, const RadialFn& wz);

double norm(const Field& f, NormKind which, const ModelParams& p, int k = 2);

struct NormSet {
    double h_minus1 = 0.0;
    std::array<double, 5> h_k{};
    std::array<double, 5> h_k_star{};
    std::array<double, 5> e_k{};
    double h2_eta = 0.0;
    double e2_eta = 0.0;
    ModelParams params;
};

NormSet compute_norms(const Field& f, const ModelParams& p, TailPolicy policy = TailPolicy::strict);
nlohmann::json to_json(const NormSet& n);

// Returns g0 - c * corrector with c chosen so that L^{-1}_{z,K}(g)(0) = 0.
Field enforce_moment_condition(const Field& g0, const Field& corrector);

// ||L^{-1}_{z,K}(g) w_z||_{L^2_z} / ||g w^K||_{L^2}.
double hardy_ratio(const Field& g, const ModelParams& p);

// Profile fields on a grid.
Field f_star_field(const GridsPtr& g, const ModelParams& p);
RadialFn gamma_star_fn(const GridsPtr& g, double gamma);
RadialFn l_inv_gamma_star_fn(const GridsPtr& g, double gamma);
Eigen::ArrayXd k_theta_nodes(const GridsPtr& g);

}  // namespace ssblow
