#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellpred/dataset.hpp"
#include "smellpred/evaluation.hpp"

namespace smellpred {

// Deterministic report emission. CSV carries the table-shaped view
// (measures at four decimals); JSON carries full precision plus details.

std::string experiment_results_csv(const std::vector<RunResult>& results);
nlohmann::json experiment_results_json(const std::vector<RunResult>& results);

std::string study_results_csv(const StudyResult& study);
nlohmann::json study_results_json(const StudyResult& study);

nlohmann::json join_report_json(const JoinReport& report);

/// Human-oriented one-line summary of the best (highest F-measure) cell.
std::string best_cell_summary(const std::vector<RunResult>& results);

} // namespace smellpred
