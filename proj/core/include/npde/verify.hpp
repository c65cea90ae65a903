#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace npde::verify {

struct Check {
    std::string name;
    double measured = 0.0;
    /// Human-readable bound, e.g. "<= 1e-12" or "in [3.2, 4.8]".
    std::string bound;
    bool passed = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    /// Wall-clock budget for the criterion.
    double budget_seconds = 0.0;

    bool passed() const;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id);

/// Criterion ids run by a suite: stencils, equivalence, gradients, oracles, all.
/// Throws std::invalid_argument for any other name.
std::vector<int> suite_criteria(const std::string& suite);

/// "PASS <criterion>: <check> measured=<x> tolerance <bound>" per check.
void print_checks(std::ostream& out, const CriterionResult& result);

/// Runs every criterion of the suite and prints each check. True iff all pass.
bool run_suite(const std::string& suite, std::ostream& out);

} // namespace npde::verify
