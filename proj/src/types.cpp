#include "smellpred/types.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "smellpred/error.hpp"
#include "smellpred/paths.hpp"

namespace smellpred {

const std::array<std::string_view, kWarningCategoryCount>& warning_category_names() {
    static const std::array<std::string_view, kWarningCategoryCount> names = {
        "Design",      "Globalization", "Interoperability", "Maintainability",
        "Mobility",    "Naming",        "Performance",      "Portability",
        "Reliability", "Security",      "Usage",
    };
    return names;
}

std::string_view warning_category_name(WarningCategory category) {
    return warning_category_names()[static_cast<std::size_t>(category)];
}

std::optional<WarningCategory> warning_category_from_name(std::string_view name) {
    const auto& names = warning_category_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<WarningCategory>(i);
    }
    return std::nullopt;
}

std::int64_t FileWarningCounts::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::string_view source_mix_name(SourceMix mix) {
    switch (mix) {
        case SourceMix::file_metrics_only: return "file_metrics_only";
        case SourceMix::warnings_only: return "warnings_only";
        case SourceMix::combined: return "combined";
    }
    return "combined";
}

std::optional<SourceMix> source_mix_from_name(std::string_view name) {
    if (name == "file_metrics_only") return SourceMix::file_metrics_only;
    if (name == "warnings_only") return SourceMix::warnings_only;
    if (name == "combined") return SourceMix::combined;
    return std::nullopt;
}

std::size_t LabeledDataset::count(Label label) const {
    std::size_t n = 0;
    for (const auto& record : records) {
        if (record.label == label) ++n;
    }
    return n;
}

void validate_dataset(const LabeledDataset& dataset) {
    std::unordered_set<std::string> seen;
    seen.reserve(dataset.records.size());
    for (const auto& record : dataset.records) {
        if (record.file_path.empty()) {
            raise(errc::invalid_dataset, "record with empty file_path");
        }
        if (record.features.size() != dataset.feature_names.size()) {
            raise(errc::invalid_dataset,
                  "feature vector length mismatch for '" + record.file_path + "'");
        }
        for (double value : record.features) {
            if (!std::isfinite(value)) {
                raise(errc::invalid_dataset, "non-finite feature for '" + record.file_path + "'");
            }
        }
        if (!seen.insert(path_key(record.file_path)).second) {
            raise(errc::invalid_dataset, "duplicate file_path '" + record.file_path + "'");
        }
    }
}

} // namespace smellpred
