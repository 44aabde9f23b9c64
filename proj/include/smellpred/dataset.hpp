#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smellpred/types.hpp"

namespace smellpred {

inline constexpr const char* kDefaultDefectPattern = R"((?i)\b(fix|fixes|fixed|defect|bug)\b)";

/// Rule describing automatically generated code to drop before analysis.
/// At least one of the two criteria must be present.
struct GeneratedCodeRule {
    std::vector<std::string> path_globs;
    std::optional<std::int64_t> loc_threshold; // removed when loc > threshold (strict)
};

/// How change messages are recognized as defect fixes. The pattern is an
/// ECMAScript regular expression, searched (not anchored) in the message;
/// a leading "(?i)" makes it case-insensitive.
struct DefectLinkConfig {
    std::string defect_pattern = kDefaultDefectPattern;
};

/// True when the message references a defect according to the config.
/// Throws InvalidPattern when the expression does not compile.
bool message_matches_defect(const std::string& message, const DefectLinkConfig& config);

/// Sums per-class warning counts into per-file counts. Output is sorted by
/// case-folded path; the first-seen spelling of each path is kept.
std::vector<FileWarningCounts> aggregate_warnings_to_files(
    const std::vector<ClassWarningRecord>& class_records);

struct FilterGeneratedResult {
    FileMetricTable kept;
    FileMetricTable removed;
};

/// Splits records into kept/removed. A record is removed when its path
/// matches any glob, or when a loc threshold is present and loc exceeds it
/// strictly. Input order is preserved on both sides.
FilterGeneratedResult filter_generated(const FileMetricTable& input, const GeneratedCodeRule& rule);

struct MergedRow {
    std::string file_path;
    std::vector<double> features;
};

struct JoinReport {
    std::size_t matched = 0;
    std::vector<std::string> unmatched_file_metrics;
    std::vector<std::string> unmatched_warnings;
};

/// Feature table keyed by file, pre-labeling.
struct MergedTable {
    std::vector<std::string> feature_names;
    std::vector<MergedRow> rows;
    SourceMix source_mix = SourceMix::combined;
    JoinReport report;
};

/// Joins the two sources at file granularity. COMBINED inner-joins on the
/// case-folded path and appends the 11 category counts after the file
/// metrics; the single-source mixes pass one side through. Rows come out
/// sorted by case-folded path.
MergedTable merge_sources(const FileMetricTable& file_metrics,
                          const std::vector<FileWarningCounts>& file_warnings,
                          SourceMix mix);

/// Labels a row defect-prone iff its path appears in the files of at least
/// one change whose message matches the defect pattern.
LabeledDataset label_defect_prone(const MergedTable& merged,
                                  const std::vector<ChangeRecord>& changes,
                                  const DefectLinkConfig& config);

/// Partitions into n datasets of near-equal size (difference at most one).
/// Records are grouped by top-level directory first; groups are ordered by
/// a seeded shuffle and the concatenation is sliced, so directories spill
/// across partitions only at slice boundaries. Deterministic per seed.
std::vector<LabeledDataset> partition_submodules(const LabeledDataset& dataset, std::size_t n,
                                                 std::uint64_t seed);

// LabeledDataset CSV: header `file_path,<feature names...>,label`,
// label written as 1 (defect_prone) or 0 (clean).
std::string write_dataset_csv(const LabeledDataset& dataset);
LabeledDataset read_dataset_csv(std::string_view text);

} // namespace smellpred
