#include "ssblow/params.hpp"

#include <cmath>
#include <string>

#include "ssblow/errors.hpp"

namespace ssblow {

double lambda_of(double alpha, double beta) { return 1.0 + alpha / (10.0 * beta); }

double gamma_of(double mu, double beta) { return (1.0 + mu) / (1.0 - mu) * beta; }

ModelParams ModelParams::make(double alpha, double beta, double one_minus_eta, double mu,
                              bool unchecked, Ordering ord) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be positive");
    if (!(beta > 0.0 && beta <= 1.0))
        throw DomainError("beta must lie in (0, 1]");
    if (!(one_minus_eta > 0.0 && one_minus_eta < 1.0))
        throw DomainError("1 - eta must lie in (0, 1)");
    if (!(std::abs(mu) < 1.0))
        throw DomainError("|mu| must be below 1");
    if (!unchecked) {
        const double mid = ord.c1 * one_minus_eta;
        if (alpha > mid || mid > ord.c2 * beta)
            throw ConfigError("smallness ordering alpha <= " + std::to_string(ord.c1) +
                              "(1-eta) <= " + std::to_string(ord.c2) +
                              " beta violated (pass unchecked to override)");
    }
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.eta = 1.0 - one_minus_eta;
    p.lambda = lambda_of(alpha, beta);
    p.mu = mu;
    p.gamma = gamma_of(mu, beta);
    return p;
}

ModelParams ModelParams::with_mu(double new_mu) const {
    if (!(std::abs(new_mu) < 1.0))
        throw DivergenceError("|mu| reached 1; the construction is invalid");
    ModelParams p = *this;
    p.mu = new_mu;
    p.gamma = gamma_of(new_mu, beta);
    return p;
}

}  // namespace ssblow
