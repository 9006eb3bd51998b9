#include "ssblow/operators.hpp"

#include "ssblow/errors.hpp"

namespace ssblow {

namespace {

void check_nan(const Eigen::ArrayXXd& a) {
    if (!a.allFinite()) throw NumericError("non-finite values in quadrature input");
}

}  // namespace

Field d_z(const Field& f) {
    return Field(f.grids, (f.grids->radial.d1 * f.v.matrix()).array());
}

RadialFn d_z(const RadialFn& f) {
    return RadialFn(f.grids, (f.grids->radial.d1 * f.v.matrix()).array());
}

Field d_zz(const Field& f) {
    return Field(f.grids, (f.grids->radial.d2 * f.v.matrix()).array());
}

RadialFn d_zz(const RadialFn& f) {
    return RadialFn(f.grids, (f.grids->radial.d2 * f.v.matrix()).array());
}

Field d_z_pow(const Field& f, int k) {
    Field out = f;
    for (int i = 0; i < k; ++i) out = d_z(out);
    return out;
}

RadialFn d_z_pow(const RadialFn& f, int k) {
    RadialFn out = f;
    for (int i = 0; i < k; ++i) out = d_z(out);
    return out;
}

Field partial_theta(const Field& f, AngularBC bc) {
    const auto& ag = f.grids->angular;
    const Eigen::MatrixXd& d = bc == AngularBC::dirichlet ? ag.d_dirichlet : ag.d_free;
    return Field(f.grids, (f.v.matrix() * d.transpose()).array());
}

Field partial_theta2(const Field& f) {
    return Field(f.grids, (f.v.matrix() * f.grids->angular.d2_dirichlet.transpose()).array());
}

Field d_theta(const Field& f, AngularBC bc) {
    return times_angular(partial_theta(f, bc), f.grids->angular.sin2);
}

Field d_theta_pow(const Field& f, int k, AngularBC bc) {
    Field out = f;
    for (int i = 0; i < k; ++i) out = d_theta(out, i == 0 ? bc : AngularBC::dirichlet);
    return out;
}

double inner(const Field& f, const Field& g, const Field& w2) {
    require_same_grid(f, g);
    require_same_grid(f, w2);
    const Eigen::ArrayXXd prod = f.v * g.v * w2.v;
    check_nan(prod);
    const auto& qz = f.grids->radial.quad_weights;
    const auto& qt = f.grids->angular.quad_weights;
    return qz.matrix().dot(prod.matrix() * qt.matrix());
}

double inner(const Field& f, const Field& g) {
    require_same_grid(f, g);
    const Eigen::ArrayXXd prod = f.v * g.v;
    check_nan(prod);
    const auto& qz = f.grids->radial.quad_weights;
    const auto& qt = f.grids->angular.quad_weights;
    return qz.matrix().dot(prod.matrix() * qt.matrix());
}

double inner_z(const RadialFn& f, const RadialFn& g, const RadialFn& w2) {
    const Eigen::ArrayXd prod = f.v * g.v * w2.v;
    if (!prod.allFinite()) throw NumericError("non-finite values in quadrature input");
    return (prod * f.grids->radial.quad_weights).sum();
}

double inner_z(const RadialFn& f, const RadialFn& g) {
    const Eigen::ArrayXd prod = f.v * g.v;
    if (!prod.allFinite()) throw NumericError("non-finite values in quadrature input");
    return (prod * f.grids->radial.quad_weights).sum();
}

RadialFn inner_theta(const Field& f, const Eigen::ArrayXd& g) {
    const Eigen::ArrayXd w = f.grids->angular.quad_weights * g;
    return RadialFn(f.grids, (f.v.matrix() * w.matrix()).array());
}

double inner_theta(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g, const AngularGrid& ag) {
    return (f * g * ag.quad_weights).sum();
}

double weighted_l2_sq(const Field& f, const Field& w) {
    require_same_grid(f, w);
    const Eigen::ArrayXXd fw = f.v * w.v;
    check_nan(fw);
    const auto& qz = f.grids->radial.quad_weights;
    const auto& qt = f.grids->angular.quad_weights;
    return qz.matrix().dot(fw.square().matrix() * qt.matrix());
}

double weighted_l2_sq_z(const RadialFn& f, const RadialFn& w) {
    const Eigen::ArrayXd fw = f.v * w.v;
    if (!fw.allFinite()) throw NumericError("non-finite values in quadrature input");
    return (fw.square() * f.grids->radial.quad_weights).sum();
}

}  // namespace ssblow
