#include "ssblow/report.hpp"

#include <cmath>

namespace ssblow {

Report& Report::evaluate() {
    const double diff = measured - reference;
    switch (comparison) {
        case Comparison::absolute: passed = std::abs(diff) <= tolerance; break;
        case Comparison::relative: passed = std::abs(diff) <= tolerance * std::abs(reference); break;
        case Comparison::upper_bound: passed = measured <= reference + tolerance; break;
    }
    if (!std::isfinite(measured)) passed = false;
    return *this;
}

Report make_report(std::string name, double measured, double reference, double tolerance,
                   Comparison cmp, nlohmann::json context) {
    Report r;
    r.name = std::move(name);
    r.measured = measured;
    r.reference = reference;
    r.tolerance = tolerance;
    r.comparison = cmp;
    r.context = std::move(context);
    r.evaluate();
    return r;
}

nlohmann::json to_json(const Report& r) {
    const char* cmp = r.comparison == Comparison::absolute   ? "absolute"
                      : r.comparison == Comparison::relative ? "relative"
                                                             : "upper_bound";
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    return {{"name", r.name},
            {"measured", num(r.measured)},
            {"reference", num(r.reference)},
            {"tolerance", r.tolerance},
            {"comparison", cmp},
            {"exact_identity", r.exact_identity},
            {"passed", r.passed},
            {"context", r.context}};
}

}  // namespace ssblow
