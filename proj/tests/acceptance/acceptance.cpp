// Acceptance run: one pass/fail line per criterion.
//
// The process exits nonzero when any hard criterion fails. The full
// relaxation scaling criterion is exploratory; its failure is printed as
// "FAIL (soft)" and does not change the exit status.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ssblow/diagnostics.hpp"
#include "ssblow/elliptic.hpp"
#include "ssblow/errors.hpp"
#include "ssblow/io.hpp"
#include "ssblow/operators.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/relaxation.hpp"
#include "ssblow/spaces.hpp"
#include "ssblow/verify.hpp"

using namespace ssblow;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string summary;
    nlohmann::json detail = nlohmann::json::object();
};

struct Criterion {
    int id;
    std::string title;
    double budget_s;  // runtime allowance; <= 0 means unbounded
    bool soft;
    std::function<Outcome()> run;
};

ModelParams defaults() { return ModelParams::make(0.03, 1.0, 0.2); }

GridsPtr grids(int nz, int nt, double zmin, double zmax, int refinement = 0) {
    GridConfig c;
    c.n_z = nz;
    c.n_theta = nt;
    c.z_min = zmin;
    c.z_max = zmax;
    c.endpoint_refinement = refinement;
    return make_grids(c);
}

// Runs the named suite checks and passes when all of them pass.
Outcome suite(const ModelParams& p, const std::vector<std::string>& names, const GridConfig& g = {}) {
    SuiteOptions opt;
    opt.selection = names;
    Outcome o;
    o.passed = true;
    for (const Report& r : run_suite(p, g, opt)) {
        o.passed = o.passed && r.passed;
        if (!o.summary.empty()) o.summary += "; ";
        o.summary += fmt::format("{} {:.2e}", r.name, r.measured);
        o.detail[r.name] = to_json(r);
    }
    return o;
}

Outcome merge(std::vector<Outcome> parts) {
    Outcome o;
    o.passed = true;
    for (auto& p : parts) {
        o.passed = o.passed && p.passed;
        if (!o.summary.empty()) o.summary += "; ";
        o.summary += p.summary;
        o.detail.update(p.detail);
    }
    return o;
}

// Discrete D_z in the fundamental ODE: sup residual on a sequence of grids.
Outcome discrete_ode_order() {
    std::vector<double> err;
    for (int n : {201, 401, 801}) {
        const GridsPtr g = grids(n, 8, 1e-4, 1e4);
        double e = 0.0;
        for (double gamma : {0.5, 1.0, 1.5}) {
            const RadialFn G = gamma_star_fn(g, gamma);
            const RadialFn dG = d_z(G);
            for (int i = 0; i < n; ++i) {
                const double z = g->radial.z[i];
                e = std::max(e, std::abs(G.v[i] + gamma * dG.v[i] - l_inv_gamma_star(z, gamma) * G.v[i]));
            }
        }
        err.push_back(e);
    }
    const double order = std::log2(err[1] / err[2]);
    Outcome o;
    o.passed = order >= 3.5 && std::log2(err[0] / err[1]) >= 3.5;
    o.summary = fmt::format("discrete D_z residual {:.2e} -> {:.2e} -> {:.2e}, observed order {:.2f}", err[0], err[1],
                            err[2], order);
    o.detail["discrete_residuals"] = err;
    o.detail["observed_order"] = order;
    return o;
}

Outcome criterion_coercivity() {
    std::vector<Outcome> parts;
    for (double beta : {0.5, 1.0}) {
        Outcome o = suite(ModelParams::make(0.03, beta, 0.2), {"coercivity_identity"});
        o.summary = fmt::format("beta {}: {}", beta, o.summary);
        o.detail = {{fmt::format("beta_{}", beta), o.detail}};
        parts.push_back(o);
    }
    return merge(parts);
}

Outcome divergence_refinement() {
    // The divergence residual is evaluated with the same discrete operators on
    // several grids; it must stay at rounding level on each.
    std::vector<double> res;
    for (int n : {256, 512, 1024}) {
        const GridsPtr g = grids(n, 32, 0.1, 10.0);
        const Field phi = Field::from_function(g, [](double z, double t) {
            const double s = std::log(z);
            return std::exp(-s * s) * std::sin(2 * t) + 0.5 * std::exp(-(s - 1) * (s - 1)) * std::sin(6 * t);
        });
        const double scale = std::max(v_of(phi).max_abs(), u_of(phi, 0.03).max_abs());
        res.push_back(divergence_identity_residual(phi, 0.03).max_abs() / scale);
    }
    Outcome o;
    o.passed = *std::max_element(res.begin(), res.end()) < 1e-8;
    o.summary = fmt::format("rescaled divergence residual {:.1e}/{:.1e}/{:.1e} on n_z 256/512/1024", res[0], res[1],
                            res[2]);
    o.detail["divergence_refinement"] = res;
    return o;
}

// Manufactured potential phi = sin(4 theta) z^2 / (1 + z)^4.
double phi_exact(double z, double t) { return std::sin(4 * t) * z * z / std::pow(1 + z, 4); }

double rhs_exact(double z, double t, double a) {
    const double f = z * z / std::pow(1 + z, 4);
    const double q = 2 - 4 * z / (1 + z);
    const double d1 = f * q;
    const double d2 = d1 * q + f * (-4 * z / ((1 + z) * (1 + z)));
    const double s4 = std::sin(4 * t), c = std::cos(t);
    return (-a * a * d2 - 5 * a * d1) * s4 + f * (10 * s4 + s4 / (c * c) + 4 * std::tan(t) * std::cos(4 * t));
}

Outcome criterion_elliptic() {
    const double alpha = 0.03;
    std::vector<double> err;
    for (auto [nz, nt] : {std::pair{96, 16}, {192, 32}, {384, 64}, {768, 128}}) {
        const GridsPtr g = grids(nz, nt, 1e-6, 1e6);
        const Field F = Field::from_function(g, [&](double z, double t) { return rhs_exact(z, t, alpha); });
        const Field d = solve_potential(F, alpha).phi - Field::from_function(g, phi_exact);
        const Field ex = Field::from_function(g, phi_exact);
        err.push_back(std::sqrt(inner(d, d) / inner(ex, ex)));
    }
    double worst_ratio = INFINITY;
    for (size_t k = 1; k < err.size(); ++k) worst_ratio = std::min(worst_ratio, err[k - 1] / err[k]);

    double worst_res = 0.0;
    for (double mu : {0.0, 0.2}) {
        const ModelParams p = defaults().with_mu(mu);
        worst_res = std::max(worst_res, solve_potential(f_star_field(make_grids(GridConfig{}), p), p.alpha).residual_norm);
    }
    Outcome o;
    o.passed = worst_ratio >= 4.0 && worst_res < 1e-6;
    o.summary = fmt::format("manufactured error {:.2e} -> {:.2e}, min reduction {:.1f}x per doubling; F* residual {:.2e}",
                            err.front(), err.back(), worst_ratio, worst_res);
    o.detail = {{"errors", err}, {"min_reduction", worst_ratio}, {"f_star_residual", worst_res}};
    return o;
}

Outcome criterion_core_decay() {
    Outcome o;
    o.passed = true;
    const GridsPtr g = grids(1024, 8, 1e-6, 1e6);
    const RadialFn g0 = RadialFn::from_function(g, [](double z) {
        const double s = std::log(z);
        return std::exp(-s * s / 2);
    });
    for (double beta : {0.5, 1.0}) {
        const CoreDecay d = core_decay(g0, beta, 0.01, 200);
        const double rel = std::abs(d.rate / d.expected - 1.0);
        o.passed = o.passed && rel < 0.02;
        if (!o.summary.empty()) o.summary += "; ";
        o.summary += fmt::format("beta {}: rate {:.4f} vs {:.4f} ({:.2f}%)", beta, d.rate, d.expected, 100 * rel);
        o.detail[fmt::format("beta_{}", beta)] = {{"rate", d.rate}, {"expected", d.expected}};
    }
    return o;
}

struct RelaxRun {
    double alpha = 0.0;
    double norm_sum = 0.0, abs_mu = 0.0, residual = 0.0;
    std::string stop_reason;
    int steps = 0;
    double tau = 0.0;
};

Outcome criterion_relaxation(const fs::path& out, int max_steps) {
    std::vector<RelaxRun> runs;
    nlohmann::json detail = nlohmann::json::array();
    for (double alpha : {0.1, 0.05, 0.025}) {
        const ModelParams p = ModelParams::make(alpha, 1.0, 0.2, 0.0, true);
        RelaxOptions opt;
        opt.dtau = 0.01;
        opt.max_steps = max_steps;
        opt.throw_on_instability = false;
        RelaxRun r;
        r.alpha = alpha;
        try {
            const RelaxationState st = relax(p, grids(128, 64, 1e-6, 1e6, 2), opt);
            const HistoryEntry& h = st.history.back();
            r.norm_sum = h.h_minus1 + h.h2_eta;
            r.abs_mu = std::abs(st.mu);
            r.residual = steady_residual(st);
            r.stop_reason = st.stop_reason;
            r.steps = st.steps;
            r.tau = st.tau;
            const std::string tag = fmt::format("relax_alpha_{}", alpha);
            write_history_csv(st, (out / (tag + "_history.csv")).string());
            write_field_binary(st.g, (out / (tag + "_g.bin")).string());
        } catch (const NumericError& e) {
            r.stop_reason = std::string("error: ") + e.what();
        }
        runs.push_back(r);
        detail.push_back({{"alpha", r.alpha},
                          {"norm_sum", r.norm_sum},
                          {"abs_mu", r.abs_mu},
                          {"steady_residual", r.residual},
                          {"stop_reason", r.stop_reason},
                          {"steps", r.steps},
                          {"tau", r.tau}});
    }
    // Scaling between consecutive alpha (halving): norms by 4, mu by 2, each within a factor 3.
    auto within3 = [](double ratio, double target) { return ratio >= target / 3 && ratio <= target * 3; };
    auto pair_ok = [&](const RelaxRun& a, const RelaxRun& b) {
        return a.stop_reason == "stop_tol" && b.stop_reason == "stop_tol" && within3(a.norm_sum / b.norm_sum, 4.0) &&
               within3(a.abs_mu / b.abs_mu, 2.0) && a.residual < 1e-4 && b.residual < 1e-4;
    };
    Outcome o;
    o.passed = pair_ok(runs[1], runs[2]);
    for (const auto& r : runs) {
        if (!o.summary.empty()) o.summary += "; ";
        o.summary += fmt::format("alpha {}: {} after {} steps, |g| {:.2e}, |mu| {:.3e}, residual {:.1e}", r.alpha,
                                 r.stop_reason, r.steps, r.norm_sum, r.abs_mu, r.residual);
    }
    o.detail["runs"] = detail;
    return o;
}

Outcome criterion_blowup() {
    const ModelParams p = defaults();
    GridConfig gc;
    gc.n_z = 256;
    gc.n_theta = 48;
    const SystemState s = make_state(p, Field::zeros(make_grids(gc)));
    const BlowupSeries b = sup_omega_series(s);
    const double rel = std::abs(b.fitted_c / b.sup_F - 1.0);
    Outcome o;
    o.passed = rel < 0.05;
    o.summary = fmt::format("g = 0 fallback, fitted c {:.4e} vs sup|F| {:.4e} ({:.2f}%)", b.fitted_c, b.sup_F, 100 * rel);
    o.detail = {{"fitted_c", b.fitted_c}, {"sup_F", b.sup_F}};
    const double bound = sup_sqrt_z_stretching(s);
    for (double power : {1.0, 1.5, 2.5}) {
        const IntegrabilityResult r = velocity_integrability(p, power, bound);
        const bool ok = r.analytic_finite == (power < 2.0) && r.numeric_finite == r.analytic_finite;
        o.passed = o.passed && ok;
        o.summary += fmt::format("; p {}: {}", power, r.numeric_finite ? "finite" : "divergent");
        o.detail[fmt::format("p_{}", power)] = {{"analytic_finite", r.analytic_finite},
                                                {"numeric_finite", r.numeric_finite},
                                                {"increment_ratio", r.increment_ratio}};
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string out_dir = "acceptance_out";
    int relax_steps = 1500;
    bool skip_relaxation = false;
    app.add_option("--out", out_dir, "directory for the JSON summary and relaxation histories");
    app.add_option("--relax-steps", relax_steps, "step budget per alpha for the relaxation criterion");
    app.add_flag("--skip-relaxation", skip_relaxation, "skip the exploratory relaxation criterion");
    CLI11_PARSE(app, argc, argv);
    const fs::path out(out_dir);
    fs::create_directories(out);

    const ModelParams p = defaults();
    const std::vector<Criterion> criteria = {
        {1, "trig integral", 1, false, [&] { return suite(p, {"trig_integral"}); }},
        {2, "fundamental ODE", 1, false,
         [&] { return merge({suite(p, {"fundamental_ode"}), discrete_ode_order()}); }},
        {3, "L^-1 closed form", 1, false, [&] { return suite(p, {"l_inv_closed_form"}); }},
        {4, "coercivity identity", 5, false, criterion_coercivity},
        {5, "H^-1 identity", 10, false, [&] { return suite(p, {"h_minus1_identity"}); }},
        {6, "null structure", 10, false,
         [&] { return merge({suite(p, {"null_pairing", "divergence_identity"}), divergence_refinement()}); }},
        {7, "weight identities", 1, false,
         [&] { return suite(p, {"weight_identity_eta", "weight_identity_lambda", "null_weight_identity"}); }},
        {8, "elliptic solver", 60, false, criterion_elliptic},
        {9, "R0 bookkeeping", 1, false, [&] { return suite(p, {"r0_closed_form", "r0_moment"}); }},
        {10, "linearised decay", 30, false, criterion_core_decay},
        {11, "relaxation scaling", 0, true, [&] { return criterion_relaxation(out, relax_steps); }},
        {12, "blow-up diagnostics", 30, false, criterion_blowup},
        {13, "parameter stability", 5, false, [&] { return suite(p, {"parameter_stability"}); }},
    };

    bool hard_ok = true;
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& c : criteria) {
        if (c.id == 11 && skip_relaxation) {
            fmt::print("criterion {:2} SKIP        {}\n", c.id, c.title);
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.passed = false;
            o.summary = std::string("error: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_s <= 0 || dt <= c.budget_s;
        const bool passed = o.passed && in_time;
        if (!passed && !c.soft) hard_ok = false;
        const std::string status = passed ? "PASS" : (c.soft ? "FAIL (soft)" : "FAIL");
        const std::string budget = c.budget_s > 0 ? fmt::format("{:.2f}s of {:g}s", dt, c.budget_s) : fmt::format("{:.1f}s", dt);
        fmt::print("criterion {:2} {:<11} {}: {} [{}{}]\n", c.id, status, c.title, o.summary, budget,
                   in_time ? "" : ", over budget");
        std::fflush(stdout);
        summary.push_back({{"criterion", c.id},
                           {"title", c.title},
                           {"passed", passed},
                           {"soft", c.soft},
                           {"seconds", dt},
                           {"summary", o.summary},
                           {"detail", o.detail}});
    }
    std::ofstream(out / "acceptance.json") << summary.dump(2) << '\n';
    return hard_ok ? 0 : 1;
}
