#pragma once

namespace ssblow {

// Constants of the smallness ordering alpha <= c1 (1 - eta) <= c2 beta.
struct Ordering {
    double c1 = 0.2;
    double c2 = 0.5;
};

// Parameter tuple of the construction. lambda and gamma are always derived,
// never set independently.
struct ModelParams {
    double alpha = 0.03;
    double beta = 1.0;
    double eta = 0.8;
    double lambda = 1.0 + 0.03 / 10.0;
    double mu = 0.0;
    double gamma = 1.0;

    // Validates ranges and, unless `unchecked`, the smallness ordering.
    static ModelParams make(double alpha, double beta, double one_minus_eta, double mu = 0.0,
                            bool unchecked = false, Ordering ord = {});

    // Same parameters with a new mu (gamma follows).
    ModelParams with_mu(double new_mu) const;

    double one_minus_eta() const { return 1.0 - eta; }
};

double lambda_of(double alpha, double beta);
double gamma_of(double mu, double beta);

}  // namespace ssblow
