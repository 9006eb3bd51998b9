#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssblow/grid.hpp"
#include "ssblow/params.hpp"
#include "ssblow/report.hpp"

namespace ssblow {

struct SuiteOptions {
    std::vector<std::string> selection;  // check names; empty selects every check
    std::uint64_t seed = 20240917;
};

// Names of all checks in declaration order.
const std::vector<std::string>& suite_check_names();

// Runs the selected checks and returns one Report per check, in declaration
// order. Checks that need a particular resolution build their own grids;
// `grid` is used for the production-resolution checks. Unknown names throw
// ConfigError.
std::vector<Report> run_suite(const ModelParams& p, const GridConfig& grid, const SuiteOptions& opt = {});

// True when every exact-identity Report passed.
bool exact_checks_passed(const std::vector<Report>& reports);
nlohmann::json to_json(const std::vector<Report>& reports);

// Angular test functions a s^q + b s^q cos(2 theta) with s = sin(2 theta),
// together with their first two theta-derivatives.
struct AngularTestFn {
    double a = 1.0, b = 0.0, q = 2.0;
    double value(double theta) const;
    double d1(double theta) const;
    double d2(double theta) const;
};

// Ratio of the two sides of the weighted angular Hardy inequality
//   int f^2 / s^{xi + 2n}  vs  prod_j (xi + 2(n - j) - 1)^{-2} int (d^n f)^2 / s^xi
// for n in {1, 2}.
double angular_hardy_ratio(const AngularTestFn& f, int n, double xi);
// Empirical constant C in
//   int f^2 / s^{xi+2} <= (xi + 1)^{-2} int (f')^2 / s^xi + C ||f||_{H^1}^2.
double angular_hardy_remainder(const AngularTestFn& f, double xi);

}  // namespace ssblow
