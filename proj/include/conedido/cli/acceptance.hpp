#pragma once
//
// The acceptance battery: eleven numbered criteria, each with pinned
// tolerances and a wall-clock budget.
//

#include <string>
#include <vector>

#include <json.hpp>

namespace conedido::cli {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    nlohmann::ordered_json data;  // measured values, deterministic for a fixed preset
};

struct SuiteOptions {
    bool quick = false;  // reduced sample counts and grids; budgets still apply
    int threads = 1;
    std::vector<int> only;  // empty: all criteria
};

constexpr int criterion_count = 11;

/// Runs one criterion; exceptions are caught and reported as failures.
CriterionResult run_criterion(int id, bool quick);

/// Runs the selected criteria on a pool of `threads` workers; results are in id order.
std::vector<CriterionResult> run_suite(const SuiteOptions& opts);

/// Worker count from CONEDIDO_THREADS (default 1, clamped to [1, 64]).
int threads_from_env();

/// "criterion 3 PASS  Isoperimetric property ... (12.3 s / 300 s)"
std::string format_line(const CriterionResult& r);

} // namespace conedido::cli
