#include "ssblow/grid.hpp"

#include <cmath>
#include <numbers>

#include "ssblow/errors.hpp"
#include "ssblow/quadrature.hpp"

namespace ssblow {

Eigen::ArrayXd fd_weights(double x0, const Eigen::ArrayXd& x, int m) {
    const int n = static_cast<int>(x.size()) - 1;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(m).array();
}

namespace {

// Stencil of `width` consecutive indices containing i, centred when possible.
int stencil_start(int i, int width, int n) {
    int start = i - width / 2;
    if (width % 2 == 0) start = i - width / 2 + 1;
    return std::clamp(start, 0, n - width);
}

Eigen::SparseMatrix<double> fd_matrix(int n, double h, int m, int width, int shift = 0) {
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        int w = width;
        // Boundary rows use one extra point to keep the order for m = 2.
        const int start0 = i - width / 2;
        if (m == 2 && (start0 < 0 || start0 + width > n)) w = width + 1;
        const int start = std::clamp(stencil_start(i, w, n) - shift, 0, n - w);
        Eigen::ArrayXd nodes(w);
        for (int k = 0; k < w; ++k) nodes[k] = (start + k - i) * h;
        const Eigen::ArrayXd wts = fd_weights(0.0, nodes, m);
        for (int k = 0; k < w; ++k)
            if (wts[k] != 0.0) t.emplace_back(i, start + k, wts[k]);
    }
    Eigen::SparseMatrix<double> d(n, n);
    d.setFromTriplets(t.begin(), t.end());
    return d;
}

}  // namespace

RadialGrid make_radial_grid(int n, double z_min, double z_max) {
    if (n < 8) throw ConfigError("n_z must be at least 8");
    if (!(z_min > 0.0 && z_min < 1.0 && z_max > 1.0)) throw ConfigError("need 0 < z_min < 1 < z_max");
    RadialGrid g;
    g.n = n;
    g.z_min = z_min;
    g.z_max = z_max;
    const double s0 = std::log(z_min);
    const double s1 = std::log(z_max);
    g.h = (s1 - s0) / (n - 1);
    g.s = Eigen::ArrayXd::LinSpaced(n, s0, s1);
    g.s[n - 1] = s1;
    g.z = g.s.exp();
    g.z[0] = z_min;
    g.z[n - 1] = z_max;
    // Fourth-order end-corrected trapezoid weights.
    g.ds_weights = Eigen::ArrayXd::Constant(n, g.h);
    const double corr[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int k = 0; k < 3; ++k) {
        g.ds_weights[k] = corr[k] * g.h;
        g.ds_weights[n - 1 - k] = corr[k] * g.h;
    }
    g.quad_weights = g.ds_weights * g.z;
    g.d1 = fd_matrix(n, g.h, 1, 5);
    g.d2 = fd_matrix(n, g.h, 2, 5);
    g.d1_upwind = fd_matrix(n, g.h, 1, 5, 1);
    return g;
}

AngularGrid make_angular_grid(int n, int refinement) {
    if (n < 8) throw ConfigError("n_theta must be at least 8");
    if (refinement < 0 || refinement > 3) throw ConfigError("endpoint_refinement must be in 0..3");
    constexpr double pi = std::numbers::pi;
    const auto gl = gauss_legendre(n, -1.0, 1.0);

    // Map m_r(s) with m_0 = s and m_r = sin(pi m_{r-1} / 2), with derivatives.
    auto map = [&](double s, double& d1, double& d2) {
        double m = s, m1 = 1.0, m2 = 0.0;
        for (int r = 0; r < refinement; ++r) {
            const double a = 0.5 * pi * m;
            const double nm = std::sin(a);
            const double nm1 = std::cos(a) * 0.5 * pi * m1;
            const double nm2 = -std::sin(a) * 0.25 * pi * pi * m1 * m1 + std::cos(a) * 0.5 * pi * m2;
            m = nm;
            m1 = nm1;
            m2 = nm2;
        }
        d1 = 0.25 * pi * m1;
        d2 = 0.25 * pi * m2;
        return 0.25 * pi * (1.0 + m);
    };

    AngularGrid g;
    g.n = n;
    g.refinement = refinement;
    g.theta.resize(n);
    g.quad_weights.resize(n);
    Eigen::ArrayXd j1(n), j2(n);
    for (int i = 0; i < n; ++i) {
        g.theta[i] = map(gl.nodes[i], j1[i], j2[i]);
        g.quad_weights[i] = gl.weights[i] * j1[i];
    }
    g.sin2 = (2.0 * g.theta).sin();
    g.cos2 = (2.0 * g.theta).cos();
    g.tan = g.theta.tan();

    const Eigen::MatrixXd ds_free = differentiation_matrix(gl.nodes);
    Eigen::ArrayXd aug(n + 2);
    aug[0] = -1.0;
    aug.segment(1, n) = gl.nodes;
    aug[n + 1] = 1.0;
    const Eigen::MatrixXd ds_aug = differentiation_matrix(aug);
    const Eigen::MatrixXd ds_dir = ds_aug.block(1, 1, n, n);
    const Eigen::MatrixXd d2s_dir = (ds_aug * ds_aug).block(1, 1, n, n);

    const Eigen::VectorXd inv_j1 = (1.0 / j1).matrix();
    g.d_free = inv_j1.asDiagonal() * ds_free;
    g.d_dirichlet = inv_j1.asDiagonal() * ds_dir;
    const Eigen::VectorXd ratio = (j2 / j1).matrix();
    const Eigen::VectorXd inv_j1sq = (1.0 / (j1 * j1)).matrix();
    g.d2_dirichlet = inv_j1sq.asDiagonal() * (d2s_dir - ratio.asDiagonal() * ds_dir);
    return g;
}

GridsPtr make_grids(const GridConfig& cfg) {
    auto g = std::make_shared<Grids>();
    g->config = cfg;
    g->radial = make_radial_grid(cfg.n_z, cfg.z_min, cfg.z_max);
    g->angular = make_angular_grid(cfg.n_theta, cfg.endpoint_refinement);
    return g;
}

void check_resolution(const RadialGrid& g, double beta, double threshold) {
    if (std::pow(g.z_min, 1.0 / beta) > threshold || std::pow(g.z_max, -1.0 / beta) > threshold)
        throw ConfigError("radial truncation too tight to resolve the w_z transitions");
}

}  // namespace ssblow
