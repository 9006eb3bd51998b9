#include "ssblow/weights.hpp"

#include "ssblow/errors.hpp"

namespace ssblow {

namespace wf = weight_factors;

WeightKind parse_weight_kind(const std::string& name) {
    static const std::pair<const char*, WeightKind> table[] = {
        {"w_z", WeightKind::w_z},
        {"w_z_star", WeightKind::w_z_star},
        {"w_z_2star", WeightKind::w_z_2star},
        {"wK_theta", WeightKind::wK_theta},
        {"wEta_theta", WeightKind::wEta_theta},
        {"wLambda_theta", WeightKind::wLambda_theta},
        {"wK", WeightKind::wK},
        {"wEta", WeightKind::wEta},
        {"wLambda", WeightKind::wLambda},
        {"wStarEta", WeightKind::wStarEta},
        {"wStarLambda", WeightKind::wStarLambda},
    };
    for (const auto& [n, k] : table)
        if (name == n) return k;
    throw ConfigError("unknown weight kind '" + name + "'");
}

std::string to_string(WeightKind k) {
    switch (k) {
        case WeightKind::w_z: return "w_z";
        case WeightKind::w_z_star: return "w_z_star";
        case WeightKind::w_z_2star: return "w_z_2star";
        case WeightKind::wK_theta: return "wK_theta";
        case WeightKind::wEta_theta: return "wEta_theta";
        case WeightKind::wLambda_theta: return "wLambda_theta";
        case WeightKind::wK: return "wK";
        case WeightKind::wEta: return "wEta";
        case WeightKind::wLambda: return "wLambda";
        case WeightKind::wStarEta: return "wStarEta";
        case WeightKind::wStarLambda: return "wStarLambda";
    }
    return "?";
}

bool is_radial(WeightKind k) {
    return k == WeightKind::w_z || k == WeightKind::w_z_star || k == WeightKind::w_z_2star;
}

bool is_angular(WeightKind k) {
    return k == WeightKind::wK_theta || k == WeightKind::wEta_theta || k == WeightKind::wLambda_theta;
}

namespace {

double radial_factor(WeightKind k, double z, const ModelParams& p) {
    switch (k) {
        case WeightKind::w_z:
        case WeightKind::wK:
        case WeightKind::wEta:
        case WeightKind::wLambda: return wf::w_z(z, p.beta);
        case WeightKind::w_z_star:
        case WeightKind::wStarEta:
        case WeightKind::wStarLambda: return wf::w_z_star(z, p.beta);
        case WeightKind::w_z_2star: return wf::w_z_2star(z, p.beta);
        default: return 1.0;
    }
}

double angular_factor(WeightKind k, double theta, const ModelParams& p) {
    switch (k) {
        case WeightKind::wK_theta:
        case WeightKind::wK: return wf::wK_theta(theta, p);
        case WeightKind::wEta_theta:
        case WeightKind::wEta:
        case WeightKind::wStarEta: return wf::sin2_pow(theta, -0.5 * p.eta);
        case WeightKind::wLambda_theta:
        case WeightKind::wLambda:
        case WeightKind::wStarLambda: return wf::sin2_pow(theta, -0.5 * p.lambda);
        default: return 1.0;
    }
}

}  // namespace

double weight_value(WeightKind k, double z, double theta, const ModelParams& p) {
    return radial_factor(k, z, p) * angular_factor(k, theta, p);
}

RadialFn radial_weight(WeightKind k, const GridsPtr& g, const ModelParams& p) {
    RadialFn r = RadialFn::zeros(g);
    for (int i = 0; i < g->nz(); ++i) r.v[i] = radial_factor(k, g->radial.z[i], p);
    return r;
}

Eigen::ArrayXd angular_weight(WeightKind k, const GridsPtr& g, const ModelParams& p) {
    Eigen::ArrayXd a(g->nt());
    for (int j = 0; j < g->nt(); ++j) a[j] = angular_factor(k, g->angular.theta[j], p);
    return a;
}

Field weight(WeightKind k, const GridsPtr& g, const ModelParams& p) {
    return outer(radial_weight(k, g, p), angular_weight(k, g, p));
}

}  // namespace ssblow
