#pragma once

#include <ostream>
#include <string>

#include "smellpred/config.hpp"
#include "smellpred/error.hpp"

namespace smellpred {

// Command implementations shared by the CLI front end and the test suites.
// Each returns the process exit code: 0 success, 2 input/parse failure,
// 3 pipeline precondition failure, 4 total experiment/study failure.
// Diagnostics go to `err`, summaries to `out`.

int exit_code_for(const Error& error);

/// Reads a whole file; throws IoFailure when it cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes a whole file, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

int cmd_ingest(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// Parses the three inputs, applies the generated-code filter, merges,
/// labels, and writes the three dataset variants plus the build report.
/// When filtering is active an unfiltered combined dataset is written too
/// (for before/after plots).
int cmd_build(const PipelineConfig& config, std::ostream& out, std::ostream& err);

int cmd_balance(const PipelineConfig& config, const std::string& input_csv,
                const std::string& output_csv, std::ostream& out, std::ostream& err);

int cmd_select(const PipelineConfig& config, const std::string& input_csv, FsKind method,
               ModelKind classifier, const std::string& output_json, std::ostream& out,
               std::ostream& err);

int cmd_experiment(const PipelineConfig& config, std::ostream& out, std::ostream& err);

int cmd_study(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// Scatter plot of two dataset columns; `y` may also be "total_issues"
/// (the sum of the 11 warning categories) when those features are present.
int cmd_plot(const PipelineConfig& config, const std::string& input_csv,
             const std::string& x_metric, const std::string& y_metric,
             const std::string& output_svg, std::ostream& out, std::ostream& err);

int cmd_synth(const PipelineConfig& config, const std::string& out_dir, std::ostream& out,
              std::ostream& err);

// Canonical artifact locations under the configured output directory.
std::string dataset_path(const PipelineConfig& config, SourceMix mix);
std::string prefilter_dataset_path(const PipelineConfig& config);
std::string report_path(const PipelineConfig& config, const std::string& name);

} // namespace smellpred
