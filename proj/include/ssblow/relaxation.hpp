#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssblow/dynamics.hpp"

namespace ssblow {

enum class TimeScheme {
    rk4,   // classical explicit Runge-Kutta
    imex,  // implicit Euler on g + beta D_z g, explicit Euler on the rest
};
TimeScheme parse_time_scheme(const std::string& s);
std::string to_string(TimeScheme s);

struct RelaxOptions {
    double dtau = 0.02;
    int max_steps = 2000;
    double stop_tol = 1e-6;
    TimeScheme scheme = TimeScheme::rk4;
    double mu_damping = 0.5;  // mu <- (1 - k) mu + k mu_target
    // Steer mu so that the boundary moment L^{-1}_{z,K}(g)(0) relaxes at unit
    // rate; without it the moment grows like exp(tau).
    bool moment_feedback = true;
    bool zero_forcing = false;  // drop T and the remainders (g stays 0)
    bool upwind = true;         // backward-biased stencil for the radial advection
    int history_every = 1;
    // Window over which the late-stage decay of ||d_tau g|| is monitored.
    int monotone_window = 50;
    // When false, instability ends the run with stop_reason "instability"
    // instead of throwing, so the history can be inspected.
    bool throw_on_instability = true;
};

struct HistoryEntry {
    int step = 0;
    double tau = 0.0;
    double h_minus1 = 0.0;
    double h2_eta = 0.0;
    double e2_eta = 0.0;
    double abs_mu = 0.0;
    double dg_norm = 0.0;  // ||d_tau g||_{H^{-1}}
    double moment = 0.0;   // L^{-1}_{z,K}(g)(0)
};

struct RelaxationState {
    double tau = 0.0;
    Field g;
    double mu = 0.0;
    double gamma = 1.0;
    ModelParams params;
    std::vector<HistoryEntry> history;
    int steps = 0;
    bool converged = false;
    bool monotone_tail = true;  // late-stage decay of ||d_tau g|| was monotone
    std::string stop_reason;
};

// Integrates d_tau g + L_Gamma(g) = -T + R0 + R1 + R2 from g = 0.
// Throws InstabilityError when ||g||_{H^2_eta} exceeds 10 alpha and
// DivergenceError when |mu| reaches 1.
RelaxationState relax(const ModelParams& p, const GridsPtr& grids, const RelaxOptions& opt = {});

// Right-hand side -(L_Gamma g + T - R0 - R1 - R2) for the given state. With `upwind` the radial
// advection (1 + mu) beta D_z g is evaluated with the backward-biased stencil, which damps the
// grid modes that the centred stencil transports toward z_min.
Field relaxation_rhs(const SystemState& s, bool zero_forcing = false, bool upwind = true);

// ||L_Gamma(g) + T - R0 - R1 - R2||_{H^{-1}} at the final state.
double steady_residual(const RelaxationState& st, TailPolicy policy = TailPolicy::lenient);

// Result of integrating the core dynamics d_tau g + L^beta(g) = 0.
struct CoreDecay {
    std::vector<double> tau;
    std::vector<double> energy;  // ||g w_z||^2
    double rate = 0.0;           // fitted -d ln(energy)/d tau
    double expected = 0.0;       // 2 (1 - beta/2)
};
CoreDecay core_decay(const RadialFn& g0, double beta, double dtau, int steps);

void write_history_csv(const RelaxationState& st, const std::string& path);
nlohmann::json relaxation_metadata(const RelaxationState& st, const RelaxOptions& opt);

}  // namespace ssblow
