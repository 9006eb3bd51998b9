#include "ssblow/field.hpp"

#include "ssblow/errors.hpp"

namespace ssblow {

Field::Field(GridsPtr g, Eigen::ArrayXXd values) : grids(std::move(g)), v(std::move(values)) {
    if (!grids) throw DomainError("field without grids");
    if (v.rows() != grids->nz() || v.cols() != grids->nt())
        throw DomainError("field shape does not match its grids");
}

Field Field::zeros(GridsPtr g) {
    const int nz = g->nz(), nt = g->nt();
    return Field(std::move(g), Eigen::ArrayXXd::Zero(nz, nt));
}

Field Field::from_function(GridsPtr g, const std::function<double(double, double)>& f) {
    Field out = zeros(g);
    for (int j = 0; j < g->nt(); ++j)
        for (int i = 0; i < g->nz(); ++i) out.v(i, j) = f(g->radial.z[i], g->angular.theta[j]);
    return out;
}

void require_same_grid(const Field& a, const Field& b) {
    if (a.v.rows() != b.v.rows() || a.v.cols() != b.v.cols())
        throw DomainError("fields live on different grids");
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o);
    v += o.v;
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o);
    v -= o.v;
    return *this;
}

Field& Field::operator*=(double c) {
    v *= c;
    return *this;
}

RadialFn::RadialFn(GridsPtr g, Eigen::ArrayXd values) : grids(std::move(g)), v(std::move(values)) {
    if (!grids) throw DomainError("radial function without grids");
    if (v.size() != grids->nz()) throw DomainError("radial function shape does not match its grid");
}

RadialFn RadialFn::zeros(GridsPtr g) {
    const int nz = g->nz();
    return RadialFn(std::move(g), Eigen::ArrayXd::Zero(nz));
}

RadialFn RadialFn::from_function(GridsPtr g, const std::function<double(double)>& f) {
    RadialFn out = zeros(g);
    for (int i = 0; i < g->nz(); ++i) out.v[i] = f(g->radial.z[i]);
    return out;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field operator*(const Field& a, const Field& b) {
    require_same_grid(a, b);
    return Field(a.grids, a.v * b.v);
}

RadialFn operator+(RadialFn a, const RadialFn& b) {
    a.v += b.v;
    return a;
}
RadialFn operator-(RadialFn a, const RadialFn& b) {
    a.v -= b.v;
    return a;
}
RadialFn operator*(double c, RadialFn a) {
    a.v *= c;
    return a;
}

Field times_radial(const Field& f, const RadialFn& r) {
    return Field(f.grids, f.v.colwise() * r.v);
}

Field times_angular(const Field& f, const Eigen::ArrayXd& a) {
    return Field(f.grids, f.v.rowwise() * a.transpose());
}

Field outer(const RadialFn& r, const Eigen::ArrayXd& a) {
    return Field(r.grids, (r.v.matrix() * a.matrix().transpose()).array());
}

}  // namespace ssblow
