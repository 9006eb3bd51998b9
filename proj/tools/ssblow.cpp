// Command-line driver: verify, profile, solve-potential, relax, blowup.
//
// Exit codes: 0 success, 1 numeric failure, 2 usage or configuration error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fmt/format.h>
#include <fmt/os.h>
#include <nlohmann/json.hpp>

#include "ssblow/diagnostics.hpp"
#include "ssblow/errors.hpp"
#include "ssblow/io.hpp"
#include "ssblow/profiles.hpp"
#include "ssblow/relaxation.hpp"
#include "ssblow/spaces.hpp"
#include "ssblow/verify.hpp"

namespace fs = std::filesystem;
using namespace ssblow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;
constexpr int kSchemaVersion = 1;

struct RunConfig {
    double alpha = 0.03, beta = 1.0, one_minus_eta = 0.2, mu = 0.0;
    bool unchecked = false;
    GridConfig grid;
    RelaxOptions relax;
    std::uint64_t seed = SuiteOptions{}.seed;
    std::string out = "out";
};

// Reads "key = value" lines; '#' starts a comment. Unknown keys and a missing
// or unsupported schema_version are configuration errors.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key = value", path, lineno));
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    const auto sv = kv.find("schema_version");
    if (sv == kv.end()) throw ConfigError(path + ": schema_version is required");
    if (sv->second != std::to_string(kSchemaVersion))
        throw ConfigError(fmt::format("{}: unsupported schema_version {}", path, sv->second));
    return kv;
}

template <class T>
T convert(const std::string& key, const std::string& s) {
    T v{};
    if (!CLI::detail::lexical_cast(s, v)) throw ConfigError("config key " + key + ": cannot parse '" + s + "'");
    return v;
}

struct Cli {
    CLI::App app{"Self-similar blow-up profile toolkit"};
    RunConfig cfg;
    std::string config_path;
    std::string scheme = "rk4";
    std::vector<std::string> checks;
    std::string field_path, state_path;
    int points_per_decade = 20;
    double t_gamma_min = 1e-8;
    std::map<std::string, CLI::Option*> keyed;  // config key -> flag

    template <class T>
    void opt(const std::string& key, const std::string& flag, T& target, const std::string& help) {
        keyed[key] = app.add_option(flag, target, help)->capture_default_str();
    }

    Cli() {
        app.fallthrough();
        app.require_subcommand(1);
        app.add_option("--config", config_path, "key = value config file (schema_version = 1 required)");
        opt("alpha", "--alpha", cfg.alpha, "alpha");
        opt("beta", "--beta", cfg.beta, "beta in (0, 1]");
        opt("one_minus_eta", "--one-minus-eta", cfg.one_minus_eta, "1 - eta");
        opt("mu", "--mu", cfg.mu, "initial mu (relax) or fixed mu (blowup, profile)");
        opt("nz", "--nz", cfg.grid.n_z, "radial grid points");
        opt("ntheta", "--ntheta", cfg.grid.n_theta, "angular grid points");
        opt("zmin", "--zmin", cfg.grid.z_min, "smallest z");
        opt("zmax", "--zmax", cfg.grid.z_max, "largest z");
        opt("endpoint_refinement", "--endpoint-refinement", cfg.grid.endpoint_refinement,
            "angular endpoint clustering passes");
        opt("dtau", "--dtau", cfg.relax.dtau, "pseudo-time step");
        opt("max_steps", "--max-steps", cfg.relax.max_steps, "relaxation step limit");
        opt("stop_tol", "--stop-tol", cfg.relax.stop_tol, "stop when ||d_tau g||_{H^-1} falls below");
        opt("scheme", "--scheme", scheme, "time scheme: rk4 or imex");
        opt("seed", "--seed", cfg.seed, "seed for randomized checks");
        opt("out", "--out", cfg.out, "output directory");
        keyed["unchecked"] = app.add_flag("--unchecked", cfg.unchecked, "skip the smallness ordering check");

        auto* verify = app.add_subcommand("verify", "run the verification suite");
        verify->add_option("--check", checks, "run only the named checks")
            ->check(CLI::IsMember(suite_check_names()));
        auto* profile = app.add_subcommand("profile", "tabulate Gamma*, L^{-1} Gamma*, F* and derivatives");
        profile->add_option("--points-per-decade", points_per_decade, "z samples per decade")
            ->check(CLI::PositiveNumber);
        auto* potential = app.add_subcommand("solve-potential", "solve for the stream function");
        potential->add_option("--field", field_path, "binary Field file for F (default: F* on the grid)")
            ->check(CLI::ExistingFile);
        app.add_subcommand("relax", "pseudo-time relaxation for the profile correction g");
        auto* blowup = app.add_subcommand("blowup", "blow-up diagnostics for a profile");
        blowup->add_option("--state", state_path, "binary Field file for g (default: g = 0)")
            ->check(CLI::ExistingFile);
        blowup->add_option("--t-gamma-min", t_gamma_min, "smallest rescaled time sampled")
            ->check(CLI::Range(1e-300, 1.0));
        blowup->add_option("--points-per-decade", points_per_decade, "time samples per decade")
            ->check(CLI::PositiveNumber);
    }

    // Config values fill every setting whose flag was not given.
    void apply_config() {
        if (config_path.empty()) return;
        for (const auto& [key, value] : read_config(config_path)) {
            if (key == "schema_version") continue;
            const auto it = keyed.find(key);
            if (it == keyed.end()) throw ConfigError("unknown config key '" + key + "'");
            if (it->second->count() > 0) continue;
            if (key == "alpha") cfg.alpha = convert<double>(key, value);
            else if (key == "beta") cfg.beta = convert<double>(key, value);
            else if (key == "one_minus_eta") cfg.one_minus_eta = convert<double>(key, value);
            else if (key == "mu") cfg.mu = convert<double>(key, value);
            else if (key == "nz") cfg.grid.n_z = convert<int>(key, value);
            else if (key == "ntheta") cfg.grid.n_theta = convert<int>(key, value);
            else if (key == "zmin") cfg.grid.z_min = convert<double>(key, value);
            else if (key == "zmax") cfg.grid.z_max = convert<double>(key, value);
            else if (key == "endpoint_refinement") cfg.grid.endpoint_refinement = convert<int>(key, value);
            else if (key == "dtau") cfg.relax.dtau = convert<double>(key, value);
            else if (key == "max_steps") cfg.relax.max_steps = convert<int>(key, value);
            else if (key == "stop_tol") cfg.relax.stop_tol = convert<double>(key, value);
            else if (key == "scheme") scheme = value;
            else if (key == "seed") cfg.seed = convert<std::uint64_t>(key, value);
            else if (key == "out") cfg.out = value;
            else if (key == "unchecked") cfg.unchecked = convert<bool>(key, value);
        }
    }
};

void apply_thread_cap() {
    const char* env = std::getenv("SSBLOW_THREADS");
    if (env == nullptr) return;
    int n = 0;
    if (!CLI::detail::lexical_cast(std::string(env), n) || n < 1)
        throw ConfigError("SSBLOW_THREADS must be a positive integer");
    Eigen::setNbThreads(n);
}

ModelParams params_of(const RunConfig& c) {
    return ModelParams::make(c.alpha, c.beta, c.one_minus_eta, c.mu, c.unchecked);
}

void write_json(const nlohmann::json& j, const fs::path& path) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) throw ConfigError("cannot write " + path.string());
}

nlohmann::json params_json(const ModelParams& p) {
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"eta", p.eta}, {"lambda", p.lambda}, {"mu", p.mu},
            {"gamma", p.gamma}};
}

nlohmann::json grid_json(const GridConfig& g) {
    return {{"n_z", g.n_z},
            {"n_theta", g.n_theta},
            {"z_min", g.z_min},
            {"z_max", g.z_max},
            {"endpoint_refinement", g.endpoint_refinement}};
}

int cmd_verify(const Cli& cli, const fs::path& out) {
    const ModelParams p = params_of(cli.cfg);
    SuiteOptions opt;
    opt.selection = cli.checks;
    opt.seed = cli.cfg.seed;
    const auto reports = run_suite(p, cli.cfg.grid, opt);
    for (const auto& r : reports)
        fmt::print("{:<24} {:<4} measured {:.3e} reference {:.3e}{}\n", r.name, r.passed ? "ok" : "FAIL", r.measured,
                   r.reference, r.exact_identity ? "" : " (inequality)");
    write_json(to_json(reports), out / "verify.json");
    const bool ok = exact_checks_passed(reports);
    fmt::print("{} of {} checks passed; report in {}\n",
               std::count_if(reports.begin(), reports.end(), [](const Report& r) { return r.passed; }),
               reports.size(), (out / "verify.json").string());
    return ok ? kExitOk : kExitNumeric;
}

int cmd_profile(const Cli& cli, const fs::path& out) {
    const ModelParams p = params_of(cli.cfg);
    const double g = p.gamma;
    const int ppd = cli.points_per_decade;
    // Sample indices k give z = 10^(k / ppd), so z = 1 is always a row.
    const long k_lo = std::lround(std::ceil(std::log10(cli.cfg.grid.z_min) * ppd - 1e-9));
    const long k_hi = std::lround(std::floor(std::log10(cli.cfg.grid.z_max) * ppd + 1e-9));
    {
        auto f = fmt::output_file((out / "profile.csv").string());
        f.print("z,gamma_star,l_inv_gamma_star,dz_gamma_star,dz2_gamma_star\n");
        for (long k = k_lo; k <= k_hi; ++k) {
            const double z = std::pow(10.0, static_cast<double>(k) / ppd);
            f.print("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", z, gamma_star(z, g), l_inv_gamma_star(z, g),
                    dz_gamma_star(z, g, 1), dz_gamma_star(z, g, 2));
        }
    }
    const GridsPtr grids = make_grids(cli.cfg.grid);
    write_field_csv(f_star_field(grids, p), (out / "f_star.csv").string());
    {
        auto f = fmt::output_file((out / "gamma_theta.csv").string());
        f.print("theta,gamma_theta,dtheta_gamma_theta\n");
        for (int j = 0; j < grids->nt(); ++j) {
            const double t = grids->angular.theta[j];
            f.print("{:.17g},{:.17g},{:.17g}\n", t, gamma_theta(t, g, p.alpha), dtheta_gamma_theta(t, g, p.alpha, 1));
        }
    }
    fmt::print("gamma = {}, c* = {:.12g}; wrote profile.csv, f_star.csv, gamma_theta.csv to {}\n", g,
               c_star(g, p.alpha), out.string());
    return kExitOk;
}

int cmd_solve_potential(const Cli& cli, const fs::path& out) {
    const ModelParams p = params_of(cli.cfg);
    const Field F = cli.field_path.empty() ? f_star_field(make_grids(cli.cfg.grid), p) : read_field_binary(cli.field_path);
    const PotentialSolution s = solve_potential(F, p.alpha);
    write_potential_solution(s, (out / "potential_").string());
    const int modes = std::max(2, F.nt() / 2);
    const nlohmann::json report = {{"params", params_json(p)},
                                   {"grid", grid_json(F.grids->config)},
                                   {"source", cli.field_path.empty() ? "f_star" : cli.field_path},
                                   {"residual", s.residual_norm},
                                   {"mode1_identity_residual", mode1_identity_residual(s.phi_tilde, modes)}};
    write_json(report, out / "potential_report.json");
    fmt::print("potential solved on {}x{}; relative residual {:.3e}\n", F.nz(), F.nt(), s.residual_norm);
    return kExitOk;
}

int cmd_relax(Cli& cli, const fs::path& out) {
    const ModelParams p = params_of(cli.cfg);
    RelaxOptions opt = cli.cfg.relax;
    opt.scheme = parse_time_scheme(cli.scheme);
    opt.throw_on_instability = false;
    const RelaxationState st = relax(p, make_grids(cli.cfg.grid), opt);
    write_field_binary(st.g, (out / "g.bin").string());
    write_history_csv(st, (out / "history.csv").string());
    nlohmann::json meta = relaxation_metadata(st, opt);
    meta["grid"] = grid_json(cli.cfg.grid);
    write_json(meta, out / "metadata.json");
    fmt::print("relaxation stopped after {} steps (tau = {:.3f}): {}; mu = {:.6g}\n", st.steps, st.tau,
               st.stop_reason, st.mu);
    const bool failed = st.stop_reason == "instability" || st.stop_reason == "divergence";
    return failed ? kExitNumeric : kExitOk;
}

int cmd_blowup(const Cli& cli, const fs::path& out) {
    const ModelParams p = params_of(cli.cfg);
    const Field g = cli.state_path.empty() ? Field::zeros(make_grids(cli.cfg.grid)) : read_field_binary(cli.state_path);
    const SystemState s = make_state(p, g);
    const BlowupSeries b = sup_omega_series(s, cli.t_gamma_min, cli.points_per_decade);
    write_blowup_csv(b, (out / "blowup.csv").string());

    const double bound = sup_sqrt_z_stretching(s);
    nlohmann::json integrability = nlohmann::json::array();
    for (double power : {1.0, 1.5, 2.0, 2.5}) {
        const IntegrabilityResult r = velocity_integrability(p, power, bound);
        integrability.push_back({{"p", r.p},
                                 {"threshold", r.threshold},
                                 {"analytic_finite", r.analytic_finite},
                                 {"numeric_finite", r.numeric_finite},
                                 {"eps", r.eps},
                                 {"integral", r.integral},
                                 {"increment_ratio", r.increment_ratio},
                                 {"report", to_json(r.report)}});
    }
    const HolderResult h = holder_check(FieldInterpolator(s.F), p, s.F.grids->radial.z_min, s.F.grids->radial.z_max);
    const nlohmann::json report = {{"params", params_json(p)},
                                   {"t_star", t_star(p)},
                                   {"sup_F", b.sup_F},
                                   {"fitted_c", b.fitted_c},
                                   {"fitted_c_relative_error", std::abs(b.fitted_c / b.sup_F - 1.0)},
                                   {"lower_bound_min", b.lower_bound_min},
                                   {"velocity_bound_constant", bound},
                                   {"integrability", integrability},
                                   {"holder", {{"exponent", h.exponent},
                                               {"max_quotient", h.max_quotient},
                                               {"max_envelope_ratio", h.max_envelope_ratio},
                                               {"pairs", h.pairs},
                                               {"report", to_json(h.report)}}}};
    write_json(report, out / "blowup.json");
    fmt::print("T* = {:.12g}; fitted c = {:.6g} vs sup|F| = {:.6g}; wrote blowup.csv and blowup.json to {}\n",
               t_star(p), b.fitted_c, b.sup_F, out.string());
    return kExitOk;
}

void dump_failure(const fs::path& out, const std::string& command, const std::exception& e) {
    try {
        write_json({{"command", command}, {"error", e.what()}}, out / "error.json");
    } catch (const std::exception&) {
        // The failure itself is already reported on stderr.
    }
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    try {
        cli.app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    fs::path out;
    try {
        cli.apply_config();
        apply_thread_cap();
        (void)parse_time_scheme(cli.scheme);
        (void)params_of(cli.cfg);
        if (cli.points_per_decade < 1) throw ConfigError("points per decade must be positive");
        out = cli.cfg.out;
        fs::create_directories(out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const std::string command = cli.app.get_subcommands().front()->get_name();
    try {
        if (command == "verify") return cmd_verify(cli, out);
        if (command == "profile") return cmd_profile(cli, out);
        if (command == "solve-potential") return cmd_solve_potential(cli, out);
        if (command == "relax") return cmd_relax(cli, out);
        return cmd_blowup(cli, out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        dump_failure(out, command, e);
        return kExitNumeric;
    }
}
