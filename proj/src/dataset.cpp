#include "smellpred/dataset.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "smellpred/error.hpp"
#include "smellpred/glob.hpp"
#include "smellpred/paths.hpp"
#include "smellpred/rng.hpp"
#include "smellpred/text.hpp"

namespace smellpred {

namespace {

std::regex compile_defect_pattern(const std::string& pattern) {
    std::string body = pattern;
    auto flags = std::regex::ECMAScript;
    if (body.rfind("(?i)", 0) == 0) {
        body = body.substr(4);
        flags |= std::regex::icase;
    }
    try {
        return std::regex(body, flags);
    } catch (const std::regex_error& e) {
        raise(errc::invalid_pattern, "cannot compile defect pattern '" + pattern + "': " + e.what());
    }
}

} // namespace

bool message_matches_defect(const std::string& message, const DefectLinkConfig& config) {
    const std::regex re = compile_defect_pattern(config.defect_pattern);
    return std::regex_search(message, re);
}

std::vector<FileWarningCounts> aggregate_warnings_to_files(
    const std::vector<ClassWarningRecord>& class_records) {
    std::map<std::string, FileWarningCounts> by_file; // keyed by case-folded path, sorted
    for (const auto& record : class_records) {
        const std::string key = path_key(record.file_path);
        auto [it, inserted] = by_file.try_emplace(key);
        if (inserted) it->second.file_path = record.file_path;
        for (std::size_t c = 0; c < kWarningCategoryCount; ++c) {
            it->second.counts[c] += record.counts[c];
        }
    }
    std::vector<FileWarningCounts> out;
    out.reserve(by_file.size());
    for (auto& [key, counts] : by_file) out.push_back(std::move(counts));
    return out;
}

FilterGeneratedResult filter_generated(const FileMetricTable& input, const GeneratedCodeRule& rule) {
    if (rule.path_globs.empty() && !rule.loc_threshold) {
        raise(errc::invalid_config, "generated-code rule needs path globs or a loc threshold");
    }
    std::vector<PathGlob> globs;
    globs.reserve(rule.path_globs.size());
    for (const auto& pattern : rule.path_globs) globs.emplace_back(pattern);

    FilterGeneratedResult result;
    result.kept.metric_names = input.metric_names;
    result.kept.loc_index = input.loc_index;
    result.removed.metric_names = input.metric_names;
    result.removed.loc_index = input.loc_index;
    for (const auto& record : input.records) {
        bool remove = rule.loc_threshold &&
                      input.loc_of(record) > static_cast<double>(*rule.loc_threshold);
        if (!remove) {
            for (const auto& glob : globs) {
                if (glob.matches(record.file_path)) {
                    remove = true;
                    break;
                }
            }
        }
        (remove ? result.removed : result.kept).records.push_back(record);
    }
    return result;
}

MergedTable merge_sources(const FileMetricTable& file_metrics,
                          const std::vector<FileWarningCounts>& file_warnings, SourceMix mix) {
    MergedTable merged;
    merged.source_mix = mix;

    if (mix == SourceMix::warnings_only) {
        for (const auto& name : warning_category_names()) merged.feature_names.emplace_back(name);
        for (const auto& file : file_warnings) {
            MergedRow row;
            row.file_path = file.file_path;
            row.features.assign(file.counts.begin(), file.counts.end());
            merged.rows.push_back(std::move(row));
        }
        std::sort(merged.rows.begin(), merged.rows.end(),
                  [](const MergedRow& a, const MergedRow& b) {
                      return path_key(a.file_path) < path_key(b.file_path);
                  });
        merged.report.matched = merged.rows.size();
        return merged;
    }

    if (mix == SourceMix::file_metrics_only) {
        merged.feature_names = file_metrics.metric_names;
        for (const auto& record : file_metrics.records) {
            merged.rows.push_back({record.file_path, record.values});
        }
        std::sort(merged.rows.begin(), merged.rows.end(),
                  [](const MergedRow& a, const MergedRow& b) {
                      return path_key(a.file_path) < path_key(b.file_path);
                  });
        merged.report.matched = merged.rows.size();
        return merged;
    }

    // COMBINED: inner join on case-folded path.
    merged.feature_names = file_metrics.metric_names;
    for (const auto& name : warning_category_names()) merged.feature_names.emplace_back(name);

    std::unordered_map<std::string, const FileWarningCounts*> warnings_by_key;
    warnings_by_key.reserve(file_warnings.size());
    for (const auto& file : file_warnings) warnings_by_key.emplace(path_key(file.file_path), &file);

    std::unordered_set<std::string> joined;
    for (const auto& record : file_metrics.records) {
        const std::string key = path_key(record.file_path);
        const auto it = warnings_by_key.find(key);
        if (it == warnings_by_key.end()) {
            merged.report.unmatched_file_metrics.push_back(record.file_path);
            continue;
        }
        joined.insert(key);
        MergedRow row;
        row.file_path = record.file_path;
        row.features = record.values;
        row.features.insert(row.features.end(), it->second->counts.begin(),
                            it->second->counts.end());
        merged.rows.push_back(std::move(row));
    }
    for (const auto& file : file_warnings) {
        if (!joined.count(path_key(file.file_path))) {
            merged.report.unmatched_warnings.push_back(file.file_path);
        }
    }
    std::sort(merged.rows.begin(), merged.rows.end(), [](const MergedRow& a, const MergedRow& b) {
        return path_key(a.file_path) < path_key(b.file_path);
    });
    std::sort(merged.report.unmatched_file_metrics.begin(),
              merged.report.unmatched_file_metrics.end());
    std::sort(merged.report.unmatched_warnings.begin(), merged.report.unmatched_warnings.end());
    merged.report.matched = merged.rows.size();
    if (merged.rows.empty()) {
        raise(errc::empty_join, "no file paths common to both metric sources");
    }
    return merged;
}

LabeledDataset label_defect_prone(const MergedTable& merged,
                                  const std::vector<ChangeRecord>& changes,
                                  const DefectLinkConfig& config) {
    const std::regex re = compile_defect_pattern(config.defect_pattern);
    std::unordered_set<std::string> defect_keys;
    for (const auto& change : changes) {
        if (!std::regex_search(change.message, re)) continue;
        for (const auto& file : change.files) defect_keys.insert(path_key(file));
    }

    LabeledDataset dataset;
    dataset.feature_names = merged.feature_names;
    dataset.source_mix = merged.source_mix;
    dataset.records.reserve(merged.rows.size());
    for (const auto& row : merged.rows) {
        DatasetRecord record;
        record.file_path = row.file_path;
        record.features = row.features;
        record.label = defect_keys.count(path_key(row.file_path)) ? Label::defect_prone
                                                                  : Label::clean;
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

std::vector<LabeledDataset> partition_submodules(const LabeledDataset& dataset, std::size_t n,
                                                 std::uint64_t seed) {
    if (n == 0 || n > dataset.records.size()) {
        raise(errc::too_many_partitions,
              "cannot split " + std::to_string(dataset.records.size()) + " records into " +
                  std::to_string(n) + " partitions");
    }

    // Group by top-level directory, records sorted by path within a group.
    std::map<std::string, std::vector<const DatasetRecord*>> groups;
    for (const auto& record : dataset.records) {
        const std::string key = path_key(record.file_path);
        groups[std::string(top_level_dir(key))].push_back(&record);
    }
    std::vector<std::vector<const DatasetRecord*>> ordered;
    ordered.reserve(groups.size());
    for (auto& [dir, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const DatasetRecord* a, const DatasetRecord* b) {
                      return path_key(a->file_path) < path_key(b->file_path);
                  });
        ordered.push_back(std::move(members));
    }
    Rng rng(derive_seed(seed, 0x7061727469ULL));
    rng.shuffle(ordered);

    std::vector<const DatasetRecord*> sequence;
    sequence.reserve(dataset.records.size());
    for (const auto& group : ordered) {
        sequence.insert(sequence.end(), group.begin(), group.end());
    }

    const std::size_t base = sequence.size() / n;
    const std::size_t remainder = sequence.size() % n;
    std::vector<LabeledDataset> partitions;
    partitions.reserve(n);
    std::size_t cursor = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t size = base + (p < remainder ? 1 : 0);
        LabeledDataset part;
        part.feature_names = dataset.feature_names;
        part.source_mix = dataset.source_mix;
        part.filtered_generated = dataset.filtered_generated;
        part.records.reserve(size);
        for (std::size_t i = 0; i < size; ++i) part.records.push_back(*sequence[cursor++]);
        partitions.push_back(std::move(part));
    }
    return partitions;
}

std::string write_dataset_csv(const LabeledDataset& dataset) {
    std::string out = "file_path";
    for (const auto& name : dataset.feature_names) {
        out += ',';
        out += name;
    }
    out += ",label\n";
    for (const auto& record : dataset.records) {
        out += record.file_path;
        for (double value : record.features) {
            out += ',';
            out += format_double(value);
        }
        out += record.label == Label::defect_prone ? ",1\n" : ",0\n";
    }
    return out;
}

LabeledDataset read_dataset_csv(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t header_line = 0;
    std::vector<std::string_view> header;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!trim(lines[i]).empty()) {
            header = split(lines[i], ',');
            header_line = i + 1;
            break;
        }
    }
    if (header.size() < 3 || trim(header.front()) != "file_path" || trim(header.back()) != "label") {
        raise(errc::missing_column, "dataset header must be file_path,<features...>,label");
    }
    LabeledDataset dataset;
    for (std::size_t c = 1; c + 1 < header.size(); ++c) {
        dataset.feature_names.emplace_back(trim(header[c]));
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = header_line; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto cells = split(lines[i], ',');
        if (cells.size() != header.size()) {
            raise(errc::ragged_row, "row width differs from header", i + 1);
        }
        DatasetRecord record;
        record.file_path = normalize_path(trim(cells.front()));
        if (record.file_path.empty()) raise(errc::invalid_value, "empty file_path", i + 1);
        if (!seen.insert(path_key(record.file_path)).second) {
            raise(errc::duplicate_file, "duplicate file_path '" + record.file_path + "'", i + 1);
        }
        for (std::size_t c = 1; c + 1 < cells.size(); ++c) {
            const auto value = parse_double(cells[c]);
            if (!value) {
                raise(errc::non_numeric_value,
                      "cell '" + std::string(trim(cells[c])) + "' is not a finite real", i + 1);
            }
            record.features.push_back(*value);
        }
        const std::string_view label = trim(cells.back());
        if (label == "1") record.label = Label::defect_prone;
        else if (label == "0") record.label = Label::clean;
        else raise(errc::invalid_value, "label must be 0 or 1, got '" + std::string(label) + "'", i + 1);
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

} // namespace smellpred
