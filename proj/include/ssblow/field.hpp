#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ssblow/grid.hpp"

namespace ssblow {

// Samples on RadialGrid x AngularGrid, stored as an (n_z, n_theta) array.
struct Field {
    GridsPtr grids;
    Eigen::ArrayXXd v;

    Field() = default;
    Field(GridsPtr g, Eigen::ArrayXXd values);

    static Field zeros(GridsPtr g);
    static Field from_function(GridsPtr g, const std::function<double(double z, double theta)>& f);

    int nz() const { return static_cast<int>(v.rows()); }
    int nt() const { return static_cast<int>(v.cols()); }
    double operator()(int i, int j) const { return v(i, j); }
    double& operator()(int i, int j) { return v(i, j); }

    bool all_finite() const { return v.allFinite(); }
    double max_abs() const { return v.abs().maxCoeff(); }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double c);
};

// Samples on RadialGrid only.
struct RadialFn {
    GridsPtr grids;
    Eigen::ArrayXd v;

    RadialFn() = default;
    RadialFn(GridsPtr g, Eigen::ArrayXd values);

    static RadialFn zeros(GridsPtr g);
    static RadialFn from_function(GridsPtr g, const std::function<double(double z)>& f);

    int nz() const { return static_cast<int>(v.size()); }
    double operator()(int i) const { return v[i]; }
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);
Field operator*(const Field& a, const Field& b);  // pointwise
RadialFn operator+(RadialFn a, const RadialFn& b);
RadialFn operator-(RadialFn a, const RadialFn& b);
RadialFn operator*(double c, RadialFn a);

// f(z, theta) * r(z)
Field times_radial(const Field& f, const RadialFn& r);
// f(z, theta) * a(theta)
Field times_angular(const Field& f, const Eigen::ArrayXd& a);
// r(z) * a(theta)
Field outer(const RadialFn& r, const Eigen::ArrayXd& a);

void require_same_grid(const Field& a, const Field& b);

}  // namespace ssblow
