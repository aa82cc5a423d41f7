#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace cmcforge {

struct CheckResult {
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail;
    double seconds{0};
};

// Invariant suites; ids 1..12, addressable by number or name.
struct Suite {
    int id;
    std::string name;
    CheckResult (*run)();
};
const std::vector<Suite>& suites();

// "all", a suite number or a suite name.
std::vector<CheckResult> run_suites(const std::string& which);

CheckResult check_trace_law();
CheckResult check_schwarzian();
CheckResult check_c_derivative();
CheckResult check_duality();
CheckResult check_table1();
CheckResult check_jm();
CheckResult check_normalization();
CheckResult check_period_linearization();
CheckResult check_total_curvature();
CheckResult check_minimal_limit();
CheckResult check_commutant();
CheckResult check_structural();

nlohmann::json results_json(const std::vector<CheckResult>& r);

} // namespace cmcforge
