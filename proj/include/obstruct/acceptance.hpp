#pragma once

// The acceptance suite: twelve exact checks with per-criterion time limits.

#include <string>
#include <vector>

#include <json.hpp>

namespace obstruct {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double limit = 0;
    std::string detail;
};

/// Number of criteria; ids run from 1 to this value.
int acceptance_count();

/// Runs the selected criteria (all when `only` is empty) on up to `jobs` threads. A criterion
/// passes when every check holds and it finishes within its limit.
std::vector<CriterionResult> run_acceptance(int jobs = 1, std::vector<int> const& only = {});

/// One line per criterion: "[PASS]  3  name  (0.12 s / 5 s)  detail".
std::string format_acceptance(std::vector<CriterionResult> const& results);
nlohmann::json acceptance_to_json(std::vector<CriterionResult> const& results);

} // namespace obstruct
