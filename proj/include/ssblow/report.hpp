#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ssblow {

// How `measured` is compared with `reference`.
enum class Comparison {
    absolute,     // |measured - reference| <= tolerance
    relative,     // |measured - reference| <= tolerance * |reference|
    upper_bound,  // measured <= reference + tolerance
};

struct Report {
    std::string name;
    double measured = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::absolute;
    bool exact_identity = true;  // false for inequality spot-checks
    bool passed = false;
    nlohmann::json context = nlohmann::json::object();

    // Recomputes `passed` from the other fields.
    Report& evaluate();
};

Report make_report(std::string name, double measured, double reference, double tolerance,
                   Comparison cmp, nlohmann::json context = nlohmann::json::object());

nlohmann::json to_json(const Report& r);

}  // namespace ssblow
