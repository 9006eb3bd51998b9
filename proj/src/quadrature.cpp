#include "ssblow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gsl/gsl_integration.h>

#include "ssblow/errors.hpp"

namespace ssblow {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_legendre needs at least one node");
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
    if (table == nullptr) throw NumericError("cannot allocate Gauss-Legendre table");
    QuadratureRule q{Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
    for (int i = 0; i < n; ++i) {
        double xi = 0.0;
        double wi = 0.0;
        gsl_integration_glfixed_point(a, b, static_cast<size_t>(i), &xi, &wi, table);
        q.nodes[i] = xi;
        q.weights[i] = wi;
    }
    gsl_integration_glfixed_table_free(table);
    // GSL orders points symmetrically in pairs; sort ascending.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int l, int r) { return q.nodes[l] < q.nodes[r]; });
    QuadratureRule sorted{Eigen::ArrayXd(n), Eigen::ArrayXd(n)};
    for (int i = 0; i < n; ++i) {
        sorted.nodes[i] = q.nodes[idx[i]];
        sorted.weights[i] = q.weights[idx[i]];
    }
    return sorted;
}

QuadratureRule composite_gauss_legendre(int points_per_panel, int levels, double a, double b) {
    // Panel breakpoints: geometric toward a and b, uniform in the middle.
    std::vector<double> bp;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::vector<double> left;
    double d = half;
    for (int l = 0; l < levels; ++l) {
        d *= 0.5;
        left.push_back(a + d);
    }
    bp.push_back(a);
    for (auto it = left.rbegin(); it != left.rend(); ++it) bp.push_back(*it);
    bp.push_back(mid);
    for (double x : left) bp.push_back(b - (x - a));
    std::sort(bp.begin(), bp.end());

    const auto ref = gauss_legendre(points_per_panel, -1.0, 1.0);
    const int np = static_cast<int>(bp.size()) - 1;
    QuadratureRule q{Eigen::ArrayXd(np * points_per_panel), Eigen::ArrayXd(np * points_per_panel)};
    for (int p = 0; p < np; ++p) {
        const double c = 0.5 * (bp[p] + bp[p + 1]);
        const double r = 0.5 * (bp[p + 1] - bp[p]);
        for (int k = 0; k < points_per_panel; ++k) {
            q.nodes[p * points_per_panel + k] = c + r * ref.nodes[k];
            q.weights[p * points_per_panel + k] = r * ref.weights[k];
        }
    }
    return q;
}

double integrate(const QuadratureRule& q, const std::function<double(double)>& f) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
    return s;
}

Eigen::ArrayXd barycentric_weights(const Eigen::ArrayXd& x) {
    const Eigen::Index n = x.size();
    // Scale by the interval length to keep the products representable.
    const double scale = 4.0 / (x.maxCoeff() - x.minCoeff());
    Eigen::ArrayXd w = Eigen::ArrayXd::Ones(n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            if (k != j) w[j] /= scale * (x[j] - x[k]);
    return w;
}

Eigen::MatrixXd differentiation_matrix(const Eigen::ArrayXd& x) {
    const Eigen::Index n = x.size();
    const Eigen::ArrayXd w = barycentric_weights(x);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double diag = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            d(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
            diag -= d(i, j);
        }
        d(i, i) = diag;
    }
    return d;
}

Eigen::ArrayXd lagrange_weights(const Eigen::ArrayXd& x, double t) {
    const Eigen::Index n = x.size();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (t == x[k]) {
            out[k] = 1.0;
            return out;
        }
    }
    const Eigen::ArrayXd w = barycentric_weights(x);
    double denom = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        out[k] = w[k] / (t - x[k]);
        denom += out[k];
    }
    return out / denom;
}

}  // namespace ssblow
