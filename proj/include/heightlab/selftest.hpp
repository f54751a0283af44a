#pragma once

// Acceptance suite shared by the `selftest` subcommand and the test binary.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace heightlab {

struct Check {
    std::string name;
    bool passed = false;
    std::string expected;
    std::string actual;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<std::string> tags;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const;
};

/// Reference constants. Built-in values are used for keys missing from the
/// golden file.
std::map<std::string, double> default_golden();
std::map<std::string, double> load_golden(const std::string& path);
/// tests/golden/constants.json of the source tree, or "" when absent.
std::string default_golden_path();

struct SelftestOptions {
    std::string filter;        ///< id, name or tag substring; empty runs all
    std::string golden_path;   ///< empty: built-in constants only
};

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts);

/// One line per criterion, failed checks listed underneath.
void print_table(std::ostream& os, const std::vector<CriterionResult>& results);
nlohmann::json results_to_json(const std::vector<CriterionResult>& results);

} // namespace heightlab
