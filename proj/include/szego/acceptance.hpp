#pragma once

#include <functional>
#include <string>
#include <vector>

namespace szego {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the twelve built-in acceptance criteria in order. `on_result`, when
/// set, sees each result as soon as it is available.
std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& on_result = {});

/// One line per criterion, e.g. "[PASS] 3 borodin-okounkov ... (1.2 s)".
std::string format_result(const CriterionResult& r);

}  // namespace szego
