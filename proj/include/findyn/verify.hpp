#pragma once

#include <string>
#include <vector>

namespace findyn {

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    std::vector<CriterionResult> results;
    bool all_pass() const;
};

std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

// Runs one named verification bundle; "all" runs every registered criterion.
SuiteReport run_suite(const std::string& name);

} // namespace findyn
