#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

// Runs the CLI and returns its exit status.
int run(const std::string& args) {
    const std::string cmd = std::string(SSBLOW_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ssblow_cli_" + name);
    fs::remove_all(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("frobnicate"), 2);
    EXPECT_EQ(run("verify --check no_such_check"), 2);
    EXPECT_EQ(run("verify --alpha 0.5 --out " + fresh_dir("ordering").string()), 2);
    const fs::path dir = fresh_dir("config");
    fs::create_directories(dir);
    std::ofstream(dir / "noversion.cfg") << "alpha = 0.03\n";
    EXPECT_EQ(run("verify --config " + (dir / "noversion.cfg").string()), 2);
    std::ofstream(dir / "unknown.cfg") << "schema_version = 1\nwidth = 3\n";
    EXPECT_EQ(run("verify --config " + (dir / "unknown.cfg").string()), 2);
}

TEST(Cli, VerifySelectedChecks) {
    const fs::path dir = fresh_dir("verify");
    EXPECT_EQ(run("verify --check trig_integral --check fundamental_ode --out " + dir.string()), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["name"], "trig_integral");
    EXPECT_TRUE(j[1]["passed"].get<bool>());
}

TEST(Cli, ProfileContainsUnitRow) {
    const fs::path dir = fresh_dir("profile");
    EXPECT_EQ(run("profile --out " + dir.string()), 0);
    EXPECT_NE(slurp(dir / "profile.csv").find("\n1,0.5,1,"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "f_star.csv"));
}

TEST(Cli, ConfigValuesAndFlagOverrides) {
    const fs::path dir = fresh_dir("override");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "# coarse run\nschema_version = 1\nnz = 96\nntheta = 16\nmu = 0.2\n";
    EXPECT_EQ(run("solve-potential --config " + (dir / "run.cfg").string() + " --nz 128 --out " + dir.string()), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "potential_report.json"));
    EXPECT_EQ(j["grid"]["n_z"], 128);
    EXPECT_EQ(j["grid"]["n_theta"], 16);
    EXPECT_DOUBLE_EQ(j["params"]["mu"].get<double>(), 0.2);
    EXPECT_TRUE(fs::exists(dir / "potential_phi.bin"));
}

TEST(Cli, RelaxThenBlowupFromState) {
    const fs::path dir = fresh_dir("relax");
    EXPECT_EQ(run("relax --nz 96 --ntheta 16 --max-steps 5 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "g.bin"));
    EXPECT_TRUE(fs::exists(dir / "history.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    EXPECT_EQ(meta["stop_reason"], "max_steps");
    EXPECT_EQ(run("blowup --state " + (dir / "g.bin").string() + " --t-gamma-min 1e-4 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "blowup.csv"));
}

TEST(Cli, BlowupAtZeroMuHasUnitBlowupTime) {
    const fs::path dir = fresh_dir("blowup");
    EXPECT_EQ(run("blowup --nz 128 --ntheta 24 --t-gamma-min 1e-4 --out " + dir.string()), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "blowup.json"));
    EXPECT_DOUBLE_EQ(j["t_star"].get<double>(), 1.0);
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
    const fs::path a = fresh_dir("repeat_a"), b = fresh_dir("repeat_b");
    for (const auto& d : {a, b}) ASSERT_EQ(run("relax --nz 96 --ntheta 16 --max-steps 3 --out " + d.string()), 0);
    EXPECT_EQ(slurp(a / "g.bin"), slurp(b / "g.bin"));
    EXPECT_EQ(slurp(a / "history.csv"), slurp(b / "history.csv"));
}
