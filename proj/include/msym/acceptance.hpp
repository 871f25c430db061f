#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace msym {

enum class VerifyLevel { quick, full };

struct AcceptanceOptions {
    VerifyLevel level = VerifyLevel::full;
    std::optional<std::filesystem::path> cache_dir;
    int jobs = 0;
    std::set<std::string> only;  // empty: every criterion the level includes
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    bool skipped = false;
    double seconds = 0;
    double budget_seconds = 0;
    std::string summary;
    nlohmann::json detail = nlohmann::json::object();
};

// Runs A1..A10. The quick level runs A1-A3, A9 and A10.
// Progress lines go to log when given.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream* log = nullptr);

nlohmann::json acceptance_report(const std::vector<CriterionResult>& results, VerifyLevel level);

// "A3 PASS  <summary>  (12.3 s)"
std::string format_result_line(const CriterionResult& r, bool known_red = false);

// coefficient cache path for a curve under a cache dir, keyed by a hash of the curve data
std::filesystem::path coefficient_cache_path(const std::filesystem::path& cache_dir, const std::string& curve_label,
                                             long n_max);

}  // namespace msym
