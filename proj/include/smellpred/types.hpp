#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smellpred {

/// The closed set of warning categories reported by the code-analysis source,
/// in canonical (report) order.
enum class WarningCategory : int {
    design = 0,
    globalization,
    interoperability,
    maintainability,
    mobility,
    naming,
    performance,
    portability,
    reliability,
    security,
    usage,
};

inline constexpr std::size_t kWarningCategoryCount = 11;

const std::array<std::string_view, kWarningCategoryCount>& warning_category_names();
std::string_view warning_category_name(WarningCategory category);
std::optional<WarningCategory> warning_category_from_name(std::string_view name);

/// Per-file (or per-class) counts, indexed by WarningCategory.
using WarningCounts = std::array<std::int64_t, kWarningCategoryCount>;

enum class Label : int { clean = 0, defect_prone = 1 };

inline std::string_view label_name(Label label) {
    return label == Label::defect_prone ? "defect_prone" : "clean";
}

/// One source file's metric vector. Values are parallel to the owning
/// table's metric_names.
struct FileMetricRecord {
    std::string file_path;
    std::vector<double> values;
};

/// All records from one per-file metrics parse. Every record shares the
/// same ordered metric-name list; "loc" is always among the metrics.
struct FileMetricTable {
    std::vector<std::string> metric_names;
    std::size_t loc_index = 0;
    std::vector<FileMetricRecord> records;

    double loc_of(const FileMetricRecord& record) const { return record.values[loc_index]; }
};

/// One code-level class's warning counts across the 11 categories.
struct ClassWarningRecord {
    std::string file_path;
    std::string class_name;
    WarningCounts counts{};
};

/// One change-log entry (check-in).
struct ChangeRecord {
    std::string change_id;
    std::string message;
    std::vector<std::string> files;
};

/// Warning counts aggregated up to file granularity.
struct FileWarningCounts {
    std::string file_path;
    WarningCounts counts{};

    std::int64_t total() const;
};

enum class SourceMix { file_metrics_only, warnings_only, combined };

std::string_view source_mix_name(SourceMix mix);
std::optional<SourceMix> source_mix_from_name(std::string_view name);

struct DatasetRecord {
    std::string file_path;
    std::vector<double> features;
    Label label = Label::clean;
};

/// Merged feature matrix with per-record binary defect labels.
struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<DatasetRecord> records;
    SourceMix source_mix = SourceMix::combined;
    bool filtered_generated = false;

    std::size_t count(Label label) const;
    std::size_t feature_count() const { return feature_names.size(); }
    std::size_t size() const { return records.size(); }
};

/// Checks structural invariants (vector lengths, finite values, unique
/// paths); throws errc::invalid_dataset on violation.
void validate_dataset(const LabeledDataset& dataset);

} // namespace smellpred
