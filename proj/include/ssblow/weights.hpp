#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "ssblow/field.hpp"
#include "ssblow/params.hpp"

namespace ssblow {

enum class WeightKind {
    w_z,
    w_z_star,
    w_z_2star,
    wK_theta,
    wEta_theta,
    wLambda_theta,
    wK,
    wEta,
    wLambda,
    wStarEta,
    wStarLambda,
};

WeightKind parse_weight_kind(const std::string& name);
std::string to_string(WeightKind k);

// Pointwise weight factors. Templated so that complex-step differentiation
// can be applied to them.
namespace weight_factors {

template <class T>
T w_z(T z, double beta) {
    using std::pow;
    const T a = pow(z, -1.0 / beta);
    return (1.0 + a) * (1.0 + a);
}

template <class T>
T w_z_star(T z, double beta) {
    using std::pow;
    return pow(z, -0.25) * (1.0 + pow(z, -1.0 / beta));
}

template <class T>
T w_z_2star(T z, double beta) {
    using std::pow;
    return 1.0 + pow(z, -(1.0 / beta + 0.25));
}

template <class T>
T sin2_pow(T theta, double e) {
    using std::pow;
    using std::sin;
    return pow(sin(2.0 * theta), e);
}

template <class T>
T wK_theta(T theta, const ModelParams& p) {
    using std::cos;
    using std::pow;
    using std::sin;
    const T k = sin(theta) * cos(theta) * cos(theta);
    return pow(k, 0.5 * (1.0 - p.alpha / (3.0 * p.beta)));
}

}  // namespace weight_factors

// Pointwise value of any weight at (z, theta); radial weights ignore theta
// and angular weights ignore z.
double weight_value(WeightKind k, double z, double theta, const ModelParams& p);

// Weight sampled on the grids (broadcast to a full field).
Field weight(WeightKind k, const GridsPtr& g, const ModelParams& p);
RadialFn radial_weight(WeightKind k, const GridsPtr& g, const ModelParams& p);
Eigen::ArrayXd angular_weight(WeightKind k, const GridsPtr& g, const ModelParams& p);

bool is_radial(WeightKind k);
bool is_angular(WeightKind k);

}  // namespace ssblow
