#include "ssblow/relaxation.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include <Eigen/SparseLU>

#include "ssblow/errors.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/weights.hpp"

namespace ssblow {

TimeScheme parse_time_scheme(const std::string& s) {
    if (s == "rk4") return TimeScheme::rk4;
    if (s == "imex") return TimeScheme::imex;
    throw ConfigError("unknown time scheme '" + s + "' (expected rk4 or imex)");
}

std::string to_string(TimeScheme s) { return s == TimeScheme::rk4 ? "rk4" : "imex"; }

Field relaxation_rhs(const SystemState& s, bool zero_forcing, bool upwind) {
    Field out = zero_forcing ? -1.0 * linear_op(s.g, s.params, TailPolicy::lenient)
                             : -1.0 * system_residual(s, TailPolicy::lenient);
    if (upwind) {
        const auto& rg = s.g.grids->radial;
        const double c = (1.0 + s.params.mu) * s.params.beta;
        out.v += c * ((rg.d1 - rg.d1_upwind) * s.g.v.matrix()).array();
    }
    return out;
}

namespace {

void pin_inflow(Field& g) { g.v.row(0).setZero(); }

// (1 + dt) g + dt beta D_z g, with the inflow row replaced by g = 0.
void imex_factor(const Eigen::SparseMatrix<double>& d1, double beta, double dt,
                 Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu) {
    const int n = static_cast<int>(d1.rows());
    Eigen::SparseMatrix<double> m(n, n);
    m.setIdentity();
    m *= (1.0 + dt);
    m += dt * beta * d1;
    m.prune([](int row, int, double) { return row != 0; });
    m.coeffRef(0, 0) = 1.0;
    m.makeCompressed();
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw SolverError("IMEX factorisation failed");
}

double moment_of(const Field& g) { return l_inv_zK_at_zero(g, TailPolicy::lenient); }

}  // namespace

RelaxationState relax(const ModelParams& p, const GridsPtr& grids, const RelaxOptions& opt) {
    if (!(opt.dtau > 0.0) || opt.max_steps < 0) throw ConfigError("invalid relaxation options");
    const EllipticSolver solver(grids, p.alpha);
    RelaxationState st;
    st.params = p;
    st.mu = p.mu;
    st.gamma = p.gamma;
    st.g = Field::zeros(grids);
    const double dt = opt.dtau;
    const double a43 = 4.0 * p.alpha / 3.0;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    const Eigen::SparseMatrix<double>& d1_adv = opt.upwind ? grids->radial.d1_upwind : grids->radial.d1;
    if (opt.scheme == TimeScheme::imex) imex_factor(d1_adv, p.beta, dt, lu);

    auto rhs_at = [&](const Field& g) {
        return relaxation_rhs(make_state(st.params, g, solver), opt.zero_forcing, opt.upwind);
    };

    st.stop_reason = "max_steps";
    for (int step = 0; step < opt.max_steps; ++step) {
        // Lagged, damped mu update.
        if (!opt.zero_forcing) {
            const SystemState s0 = make_state(st.params, st.g, solver);
            const double mu_upd = mu_update(s0, TailPolicy::lenient);
            double target = mu_upd;
            if (opt.moment_feedback) {
                const double m = moment_of(st.g);
                target = (a43 * mu_upd + 2.0 * m) / (a43 + m);
            }
            const double mu_new = (1.0 - opt.mu_damping) * st.mu + opt.mu_damping * target;
            if (!std::isfinite(mu_new) || std::abs(mu_new) >= 1.0)
                throw DivergenceError("mu left (-1, 1) at step " + std::to_string(step));
            st.mu = mu_new;
            st.params = st.params.with_mu(mu_new);
            st.gamma = st.params.gamma;
        }

        Field g_new;
        if (opt.scheme == TimeScheme::rk4) {
            Field k1 = rhs_at(st.g);
            Field g2 = st.g + (0.5 * dt) * k1;
            pin_inflow(g2);
            Field k2 = rhs_at(g2);
            Field g3 = st.g + (0.5 * dt) * k2;
            pin_inflow(g3);
            Field k3 = rhs_at(g3);
            Field g4 = st.g + dt * k3;
            pin_inflow(g4);
            Field k4 = rhs_at(g4);
            g_new = st.g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // Explicit part excludes g + beta D_z g, which is taken implicitly.
            Field ex = rhs_at(st.g) + st.g + p.beta * Field(grids, (d1_adv * st.g.v.matrix()).array());
            Field rhs = st.g + dt * ex;
            rhs.v.row(0).setZero();
            g_new = Field(grids, lu.solve(rhs.v.matrix()).array());
        }
        pin_inflow(g_new);
        if (!g_new.all_finite()) throw InstabilityError("non-finite perturbation at step " + std::to_string(step));

        const Field dg = (1.0 / dt) * (g_new - st.g);
        st.g = std::move(g_new);
        st.tau += dt;
        st.steps = step + 1;

        HistoryEntry h;
        h.step = st.steps;
        h.tau = st.tau;
        h.dg_norm = norm_h_minus1(dg, st.params, TailPolicy::lenient);
        h.abs_mu = std::abs(st.mu);
        h.moment = moment_of(st.g);
        const bool record = opt.history_every <= 1 || st.steps % opt.history_every == 0;
        const bool done = h.dg_norm < opt.stop_tol;
        if (record || done || st.steps == opt.max_steps) {
            h.h_minus1 = norm_h_minus1(st.g, st.params, TailPolicy::lenient);
            h.h2_eta = norm_h2_eta(st.g, st.params);
            h.e2_eta = norm_e2_eta(st.g, st.params);
            st.history.push_back(h);
            if (h.h2_eta > 10.0 * p.alpha || !std::isfinite(h.h2_eta)) {
                if (!opt.throw_on_instability) {
                    st.stop_reason = "instability";
                    break;
                }
                throw InstabilityError("||g||_{H^2_eta} = " + std::to_string(h.h2_eta) + " exceeds 10 alpha at tau = " +
                                       std::to_string(st.tau));
            }
        }
        if (done) {
            st.converged = true;
            st.stop_reason = "stop_tol";
            break;
        }
    }

    // Late-stage monotonicity of ||d_tau g|| over the configured window.
    const auto& hist = st.history;
    const int w = opt.monotone_window;
    const int start = static_cast<int>(hist.size()) / 2;
    for (int i = start; i + w < static_cast<int>(hist.size()); ++i)
        if (hist[i + w].dg_norm > hist[i].dg_norm) st.monotone_tail = false;
    return st;
}

double steady_residual(const RelaxationState& st, TailPolicy policy) {
    const SystemState s = make_state(st.params, st.g);
    return norm_h_minus1(system_residual(s, policy), st.params, policy);
}

CoreDecay core_decay(const RadialFn& g0, double beta, double dtau, int steps) {
    CoreDecay out;
    out.expected = 2.0 * (1.0 - beta / 2.0);
    ModelParams p;
    p.beta = beta;
    const RadialFn wz = radial_weight(WeightKind::w_z, g0.grids, p);
    auto rhs = [&](const RadialFn& g) { return -1.0 * core_op(g, beta); };
    auto pin = [](RadialFn& g) { g.v[0] = 0.0; };
    RadialFn g = g0;
    for (int k = 0; k <= steps; ++k) {
        out.tau.push_back(k * dtau);
        out.energy.push_back(weighted_l2_sq_z(g, wz));
        if (k == steps) break;
        RadialFn k1 = rhs(g);
        RadialFn g2 = g + (0.5 * dtau) * k1;
        pin(g2);
        RadialFn k2 = rhs(g2);
        RadialFn g3 = g + (0.5 * dtau) * k2;
        pin(g3);
        RadialFn k3 = rhs(g3);
        RadialFn g4 = g + dtau * k3;
        pin(g4);
        RadialFn k4 = rhs(g4);
        g = g + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        pin(g);
    }
    // Least-squares slope of ln(energy) against tau.
    const int n = static_cast<int>(out.tau.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = 0; i < n; ++i) {
        const double y = std::log(out.energy[i]);
        st += out.tau[i];
        sy += y;
        stt += out.tau[i] * out.tau[i];
        sty += out.tau[i] * y;
    }
    out.rate = -(n * sty - st * sy) / (n * stt - st * st);
    return out;
}

void write_history_csv(const RelaxationState& st, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "step,tau,h_minus1,h2_eta,e2_eta,abs_mu,dg_norm,moment\n";
    os << std::setprecision(17);
    for (const auto& h : st.history)
        os << h.step << ',' << h.tau << ',' << h.h_minus1 << ',' << h.h2_eta << ',' << h.e2_eta << ',' << h.abs_mu
           << ',' << h.dg_norm << ',' << h.moment << '\n';
}

nlohmann::json relaxation_metadata(const RelaxationState& st, const RelaxOptions& opt) {
    const auto& p = st.params;
    return {{"params",
             {{"alpha", p.alpha}, {"beta", p.beta}, {"eta", p.eta}, {"lambda", p.lambda}, {"mu", p.mu}, {"gamma", p.gamma}}},
            {"options",
             {{"dtau", opt.dtau},
              {"max_steps", opt.max_steps},
              {"stop_tol", opt.stop_tol},
              {"scheme", to_string(opt.scheme)},
              {"mu_damping", opt.mu_damping},
              {"moment_feedback", opt.moment_feedback},
              {"zero_forcing", opt.zero_forcing}}},
            {"steps", st.steps},
            {"tau", st.tau},
            {"converged", st.converged},
            {"monotone_tail", st.monotone_tail},
            {"stop_reason", st.stop_reason}};
}

}  // namespace ssblow
