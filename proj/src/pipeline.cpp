#include "smellpred/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "smellpred/glob.hpp"
#include "smellpred/ingest.hpp"
#include "smellpred/paths.hpp"
#include "smellpred/report.hpp"
#include "smellpred/rng.hpp"
#include "smellpred/svg_plot.hpp"

namespace smellpred {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kPartitionSalt = 0x504152545354ULL;
constexpr std::uint64_t kStudySalt = 0x5354554459ULL;
constexpr std::uint64_t kBalanceSalt = 0x42414C4ULL;
constexpr std::uint64_t kSelectSalt = 0x53454C4543ULL;

int classify(errc code) {
    switch (code) {
        case errc::missing_column:
        case errc::duplicate_column:
        case errc::non_numeric_value:
        case errc::invalid_value:
        case errc::duplicate_file:
        case errc::ragged_row:
        case errc::unknown_category:
        case errc::malformed_document:
        case errc::negative_count:
        case errc::malformed_line:
        case errc::invalid_config:
        case errc::invalid_model:
        case errc::io_failure:
            return 2;
        default:
            return 3;
    }
}

template <typename Fn>
auto parse_input(const std::string& path, Fn&& parser) {
    const std::string text = read_text_file(path);
    try {
        return parser(text);
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what(), e.line());
    }
}

struct Inputs {
    FileMetricTable file_metrics;
    std::vector<ClassWarningRecord> warnings;
    std::vector<ChangeRecord> changes;
};

Inputs load_inputs(const PipelineConfig& config) {
    Inputs inputs;
    inputs.file_metrics = parse_input(config.file_metrics_path, parse_file_metrics);
    inputs.warnings = parse_input(config.warnings_path, parse_class_warnings);
    inputs.changes = parse_input(config.change_log_path, parse_change_log);
    return inputs;
}

nlohmann::json label_counts_json(const LabeledDataset& dataset) {
    return {{"rows", dataset.records.size()},
            {"defect_prone", dataset.count(Label::defect_prone)},
            {"clean", dataset.count(Label::clean)}};
}

LabeledDataset load_dataset(const std::string& path, SourceMix mix) {
    const std::string text = read_text_file(path);
    try {
        LabeledDataset dataset = read_dataset_csv(text);
        dataset.source_mix = mix;
        return dataset;
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what(), e.line());
    }
}

std::string dump_json(const nlohmann::json& document) { return document.dump(2) + "\n"; }

} // namespace

int exit_code_for(const Error& error) { return classify(error.code()); }

std::string read_text_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        raise(errc::io_failure, "cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) {
        raise(errc::io_failure, "cannot open '" + path + "' for writing");
    }
    stream << content;
    if (!stream) {
        raise(errc::io_failure, "failed writing '" + path + "'");
    }
}

std::string dataset_path(const PipelineConfig& config, SourceMix mix) {
    return config.output_dir + "/datasets/" + std::string(source_mix_name(mix)) + ".csv";
}

std::string prefilter_dataset_path(const PipelineConfig& config) {
    return config.output_dir + "/datasets/combined_prefilter.csv";
}

std::string report_path(const PipelineConfig& config, const std::string& name) {
    return config.output_dir + "/reports/" + name;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.require_seed();
        const Inputs inputs = load_inputs(config);
        std::unordered_set<std::string> warned_files;
        for (const auto& record : inputs.warnings) warned_files.insert(path_key(record.file_path));

        nlohmann::json report = {
            {"file_metrics",
             {{"records", inputs.file_metrics.records.size()},
              {"metric_names", inputs.file_metrics.metric_names}}},
            {"warnings",
             {{"class_records", inputs.warnings.size()}, {"files", warned_files.size()}}},
            {"change_log", {{"records", inputs.changes.size()}}},
        };
        write_text_file(report_path(config, "ingest_report.json"), dump_json(report));
        out << "file metrics: " << inputs.file_metrics.records.size() << " records, "
            << inputs.file_metrics.metric_names.size() << " metrics\n"
            << "warnings: " << inputs.warnings.size() << " class records across "
            << warned_files.size() << " files\n"
            << "change log: " << inputs.changes.size() << " records\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

namespace {

struct BuildArtifacts {
    LabeledDataset combined;
    LabeledDataset file_metrics_only;
    LabeledDataset warnings_only;
    JoinReport join;
};

BuildArtifacts build_variants(const FileMetricTable& metrics,
                              const std::vector<ClassWarningRecord>& warnings,
                              const std::vector<ChangeRecord>& changes,
                              const DefectLinkConfig& link, bool filtered) {
    BuildArtifacts artifacts;
    const auto per_file = aggregate_warnings_to_files(warnings);

    MergedTable combined = merge_sources(metrics, per_file, SourceMix::combined);
    artifacts.join = combined.report;
    artifacts.combined = label_defect_prone(combined, changes, link);
    artifacts.file_metrics_only =
        label_defect_prone(merge_sources(metrics, per_file, SourceMix::file_metrics_only),
                           changes, link);
    artifacts.warnings_only = label_defect_prone(
        merge_sources(metrics, per_file, SourceMix::warnings_only), changes, link);
    artifacts.combined.filtered_generated = filtered;
    artifacts.file_metrics_only.filtered_generated = filtered;
    artifacts.warnings_only.filtered_generated = filtered;
    return artifacts;
}

} // namespace

int cmd_build(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.require_seed();
        const Inputs inputs = load_inputs(config);

        FileMetricTable metrics = inputs.file_metrics;
        std::vector<ClassWarningRecord> warnings = inputs.warnings;
        nlohmann::json filter_report = {{"active", false}};
        const bool filtering = config.generated_code.has_value();
        if (filtering) {
            auto filtered = filter_generated(inputs.file_metrics, *config.generated_code);
            std::unordered_set<std::string> removed_keys;
            std::vector<std::string> removed_paths;
            for (const auto& record : filtered.removed.records) {
                removed_keys.insert(path_key(record.file_path));
                removed_paths.push_back(record.file_path);
            }
            // Warnings for removed files (and glob matches without a metrics
            // row) leave the analysis with them.
            std::vector<PathGlob> globs;
            for (const auto& pattern : config.generated_code->path_globs) {
                globs.emplace_back(pattern);
            }
            std::vector<ClassWarningRecord> kept_warnings;
            for (const auto& record : warnings) {
                bool removed = removed_keys.count(path_key(record.file_path)) > 0;
                for (auto it = globs.begin(); !removed && it != globs.end(); ++it) {
                    removed = it->matches(record.file_path);
                }
                if (!removed) kept_warnings.push_back(record);
            }
            filter_report = {{"active", true},
                             {"kept", filtered.kept.records.size()},
                             {"removed", filtered.removed.records.size()},
                             {"removed_paths", removed_paths},
                             {"class_records_kept", kept_warnings.size()},
                             {"class_records_removed", warnings.size() - kept_warnings.size()}};
            metrics = std::move(filtered.kept);
            warnings = std::move(kept_warnings);
        }

        const BuildArtifacts artifacts =
            build_variants(metrics, warnings, inputs.changes, config.defect_link, filtering);

        write_text_file(dataset_path(config, SourceMix::combined),
                        write_dataset_csv(artifacts.combined));
        write_text_file(dataset_path(config, SourceMix::file_metrics_only),
                        write_dataset_csv(artifacts.file_metrics_only));
        write_text_file(dataset_path(config, SourceMix::warnings_only),
                        write_dataset_csv(artifacts.warnings_only));
        if (filtering) {
            const BuildArtifacts unfiltered = build_variants(
                inputs.file_metrics, inputs.warnings, inputs.changes, config.defect_link, false);
            write_text_file(prefilter_dataset_path(config),
                            write_dataset_csv(unfiltered.combined));
        }

        nlohmann::json report = {
            {"filter", filter_report},
            {"join", join_report_json(artifacts.join)},
            {"variants",
             {{"combined", label_counts_json(artifacts.combined)},
              {"file_metrics_only", label_counts_json(artifacts.file_metrics_only)},
              {"warnings_only", label_counts_json(artifacts.warnings_only)}}},
        };
        write_text_file(report_path(config, "build_report.json"), dump_json(report));

        out << "combined: " << artifacts.combined.records.size() << " rows ("
            << artifacts.combined.count(Label::defect_prone) << " defect-prone)\n"
            << "file_metrics_only: " << artifacts.file_metrics_only.records.size() << " rows\n"
            << "warnings_only: " << artifacts.warnings_only.records.size() << " rows\n";
        if (!artifacts.join.unmatched_file_metrics.empty() ||
            !artifacts.join.unmatched_warnings.empty()) {
            err << "join mismatches: " << artifacts.join.unmatched_file_metrics.size()
                << " metric-only paths, " << artifacts.join.unmatched_warnings.size()
                << " warning-only paths\n";
        }
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_balance(const PipelineConfig& config, const std::string& input_csv,
                const std::string& output_csv, std::ostream& out, std::ostream& err) {
    try {
        LabeledDataset dataset = load_dataset(input_csv, SourceMix::combined);
        SmoteConfig smote_config = config.smote;
        smote_config.seed = derive_seed(config.require_seed(), kBalanceSalt);
        const SmoteResult result = smote(dataset, smote_config);
        for (const auto& warning : result.warnings) err << "warning: " << warning << "\n";
        write_text_file(output_csv, write_dataset_csv(result.dataset));
        out << "balanced: " << result.dataset.records.size() << " rows ("
            << result.synthetic_count << " synthetic)\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_select(const PipelineConfig& config, const std::string& input_csv, FsKind method,
               ModelKind classifier, const std::string& output_json, std::ostream& out,
               std::ostream& err) {
    try {
        if (method == FsKind::none) {
            raise(errc::invalid_config, "select needs --method elimination or annealing");
        }
        const LabeledDataset dataset = load_dataset(input_csv, SourceMix::combined);
        WrapperEvaluator evaluator;
        evaluator.classifier.kind = classifier;
        evaluator.classifier.forest = config.forest;
        evaluator.classifier.pnn = config.pnn;
        evaluator.split_fraction = config.fs_split_fraction;
        evaluator.score = config.fs_score;
        evaluator.seed = derive_seed(config.require_seed(), kSelectSalt);
        evaluator.classifier.forest.seed = derive_seed(evaluator.seed, 1);

        FeatureMask mask;
        if (method == FsKind::elimination) {
            mask = backward_elimination(dataset, evaluator);
        } else {
            AnnealingSchedule schedule = config.annealing;
            schedule.seed = derive_seed(config.require_seed(), kSelectSalt + 1);
            mask = simulated_annealing_select(dataset, evaluator, schedule);
        }
        write_text_file(output_json,
                        dump_json(mask_to_json(mask, dataset.feature_names)));
        out << "selected " << mask.count() << " of " << mask.size() << " features\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_experiment(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const LabeledDataset with_smells =
            load_dataset(dataset_path(config, SourceMix::combined), SourceMix::combined);
        const LabeledDataset without_smells = load_dataset(
            dataset_path(config, SourceMix::file_metrics_only), SourceMix::file_metrics_only);

        ExperimentPlan plan = config.plan;
        plan.smote = config.smote;
        plan.forest = config.forest;
        plan.pnn = config.pnn;
        plan.annealing = config.annealing;
        plan.split_fraction = config.fs_split_fraction;
        plan.fs_score = config.fs_score;
        plan.smote_train_only = config.smote_train_only;
        plan.master_seed = config.require_seed();

        const auto results = run_experiment_matrix(with_smells, without_smells, plan, config.jobs);
        write_text_file(report_path(config, "experiment.csv"), experiment_results_csv(results));
        write_text_file(report_path(config, "experiment.json"),
                        dump_json(experiment_results_json(results)));

        std::size_t failed = 0;
        for (const auto& cell : results) {
            if (!cell.ok) {
                ++failed;
                err << "cell failed: " << model_kind_name(cell.classifier) << "/"
                    << smote_option_name(cell.smote) << "/" << fs_kind_name(cell.fs) << "/"
                    << smells_option_name(cell.smells) << ": " << cell.error << "\n";
            }
        }
        if (failed == results.size()) {
            err << "every experiment cell failed\n";
            return 4;
        }
        out << best_cell_summary(results) << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

namespace {

/// Slices `variant` down to the given path keys, in the partition's order.
LabeledDataset slice_by_paths(const LabeledDataset& variant,
                              const std::vector<std::string>& keys_in_order) {
    std::unordered_map<std::string, const DatasetRecord*> by_key;
    by_key.reserve(variant.records.size());
    for (const auto& record : variant.records) by_key.emplace(path_key(record.file_path), &record);
    LabeledDataset out;
    out.feature_names = variant.feature_names;
    out.source_mix = variant.source_mix;
    out.filtered_generated = variant.filtered_generated;
    for (const auto& key : keys_in_order) {
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            raise(errc::invalid_dataset, "variant datasets disagree on path '" + key + "'");
        }
        out.records.push_back(*it->second);
    }
    return out;
}

} // namespace

int cmd_study(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const LabeledDataset combined =
            load_dataset(dataset_path(config, SourceMix::combined), SourceMix::combined);
        const LabeledDataset file_metrics = load_dataset(
            dataset_path(config, SourceMix::file_metrics_only), SourceMix::file_metrics_only);
        const LabeledDataset warnings =
            load_dataset(dataset_path(config, SourceMix::warnings_only), SourceMix::warnings_only);

        // Partition the paths common to all three variants, so every
        // submodule carries the same files in each of its datasets.
        std::unordered_set<std::string> in_file_metrics, in_warnings;
        for (const auto& record : file_metrics.records) {
            in_file_metrics.insert(path_key(record.file_path));
        }
        for (const auto& record : warnings.records) in_warnings.insert(path_key(record.file_path));
        LabeledDataset common;
        common.feature_names = combined.feature_names;
        common.source_mix = combined.source_mix;
        for (const auto& record : combined.records) {
            const std::string key = path_key(record.file_path);
            if (in_file_metrics.count(key) && in_warnings.count(key)) {
                common.records.push_back(record);
            }
        }

        // A submodule below two records can never survive balancing and
        // splitting, so the partition count is capped up front.
        if (common.records.size() < 2 * config.n_submodules) {
            raise(errc::too_many_partitions,
                  "cannot form " + std::to_string(config.n_submodules) +
                      " submodules of at least two records from " +
                      std::to_string(common.records.size()) + " common records");
        }
        const std::uint64_t seed = config.require_seed();
        const auto partitions = partition_submodules(common, config.n_submodules,
                                                     derive_seed(seed, kPartitionSalt));

        std::vector<SubmoduleTriple> submodules;
        submodules.reserve(partitions.size());
        for (std::size_t p = 0; p < partitions.size(); ++p) {
            std::vector<std::string> keys;
            keys.reserve(partitions[p].records.size());
            for (const auto& record : partitions[p].records) {
                keys.push_back(path_key(record.file_path));
            }
            SubmoduleTriple triple;
            triple.name = "submodule_" + std::to_string(p + 1);
            triple.file_metrics_only = slice_by_paths(file_metrics, keys);
            triple.warnings_only = slice_by_paths(warnings, keys);
            triple.combined = slice_by_paths(combined, keys);
            submodules.push_back(std::move(triple));
        }

        StudyConfig study_config;
        study_config.selector = config.study_selector;
        study_config.smote = config.smote;
        study_config.forest = config.forest;
        study_config.annealing = config.annealing;
        study_config.split_fraction = config.fs_split_fraction;
        study_config.fs_score = config.fs_score;
        study_config.fs_on_full = config.plan.fs_on_full;
        study_config.smote_train_only = config.smote_train_only;
        study_config.master_seed = derive_seed(seed, kStudySalt);

        const StudyResult study = run_submodule_study(submodules, study_config, config.jobs);
        write_text_file(report_path(config, "study.csv"), study_results_csv(study));
        write_text_file(report_path(config, "study.json"), dump_json(study_results_json(study)));

        bool any_empty = false;
        for (const auto& condition : study.conditions) {
            if (condition.failed > 0) {
                err << source_mix_name(condition.variant) << "/"
                    << (condition.with_fs ? "with_fs" : "without_fs") << ": " << condition.failed
                    << " submodules failed\n";
            }
            if (condition.per_submodule.empty()) any_empty = true;
        }
        if (any_empty) {
            err << "a study condition has no successful submodules\n";
            return 4;
        }
        out << "study complete: " << submodules.size() << " submodules x "
            << study.conditions.size() << " conditions\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_plot(const PipelineConfig& config, const std::string& input_csv,
             const std::string& x_metric, const std::string& y_metric,
             const std::string& output_svg, std::ostream& out, std::ostream& err) {
    try {
        config.require_seed();
        const LabeledDataset dataset = load_dataset(input_csv, SourceMix::combined);
        const auto column_of = [&](const std::string& name) -> std::vector<double> {
            const auto it =
                std::find(dataset.feature_names.begin(), dataset.feature_names.end(), name);
            if (it != dataset.feature_names.end()) {
                const std::size_t index =
                    static_cast<std::size_t>(it - dataset.feature_names.begin());
                std::vector<double> column;
                column.reserve(dataset.records.size());
                for (const auto& record : dataset.records) {
                    column.push_back(record.features[index]);
                }
                return column;
            }
            if (name == "total_issues") {
                std::vector<std::size_t> category_indices;
                for (const auto& category : warning_category_names()) {
                    const auto cit = std::find(dataset.feature_names.begin(),
                                               dataset.feature_names.end(), category);
                    if (cit == dataset.feature_names.end()) break;
                    category_indices.push_back(
                        static_cast<std::size_t>(cit - dataset.feature_names.begin()));
                }
                if (category_indices.size() == kWarningCategoryCount) {
                    std::vector<double> column;
                    column.reserve(dataset.records.size());
                    for (const auto& record : dataset.records) {
                        double sum = 0.0;
                        for (std::size_t index : category_indices) sum += record.features[index];
                        column.push_back(sum);
                    }
                    return column;
                }
            }
            raise(errc::unknown_metric, "metric '" + name + "' not present in the dataset");
        };

        const std::vector<double> xs = column_of(x_metric);
        const std::vector<double> ys = column_of(y_metric);
        std::vector<std::pair<double, double>> points;
        points.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) points.emplace_back(xs[i], ys[i]);
        write_text_file(output_svg,
                        scatter_plot_svg(points, x_metric, y_metric,
                                         y_metric + " vs " + x_metric));
        out << "plotted " << points.size() << " points to " << output_svg << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_synth(const PipelineConfig& config, const std::string& out_dir, std::ostream& out,
              std::ostream& err) {
    try {
        const SynthCorpus corpus = generate_synthetic_corpus(config.synth, config.require_seed());
        const std::string base = out_dir.empty() ? config.output_dir + "/synth" : out_dir;
        write_text_file(base + "/file_metrics.csv", corpus.file_metrics_csv);
        write_text_file(base + "/warnings.xml", corpus.warnings_xml);
        write_text_file(base + "/change_log.jsonl", corpus.change_log_jsonl);
        out << "synthesized " << config.synth.n_files << " files ("
            << corpus.defect_file_count << " defect-prone) into " << base << "\n";
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e);
    }
}

} // namespace smellpred
