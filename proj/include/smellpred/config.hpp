#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellpred/dataset.hpp"
#include "smellpred/evaluation.hpp"
#include "smellpred/synth.hpp"

namespace smellpred {

/// Everything a pipeline run needs. Loaded from one JSON document; every
/// field can be overridden on the command line with --set key.path=value.
/// The master seed is mandatory for commands that use randomness — there is
/// no wall-clock fallback.
struct PipelineConfig {
    // inputs
    std::string file_metrics_path;
    std::string warnings_path;
    std::string change_log_path;

    std::string output_dir = "out";
    std::optional<std::uint64_t> seed;

    std::optional<GeneratedCodeRule> generated_code;
    DefectLinkConfig defect_link;

    SmoteConfig smote;
    bool smote_train_only = false;

    double fs_split_fraction = 0.5;
    ScoreKind fs_score = ScoreKind::f_measure;
    AnnealingSchedule annealing;

    ForestConfig forest;
    PnnConfig pnn;

    ExperimentPlan plan; // classifier/smote/fs/smells option lists + fs_on_full

    std::size_t n_submodules = 20;
    FsKind study_selector = FsKind::elimination;

    std::size_t jobs = 1;

    SynthSpec synth;

    /// Seed, required. Throws InvalidConfig when absent.
    std::uint64_t require_seed() const;
};

/// Parses the JSON document into a config; unknown keys are ignored.
/// Throws InvalidConfig on wrong types or out-of-range values.
PipelineConfig config_from_json(const nlohmann::json& document);

/// Applies `key.path=value` overrides onto the raw document. Values parse
/// as JSON when possible and fall back to strings.
void apply_config_overrides(nlohmann::json& document, const std::vector<std::string>& overrides);

nlohmann::json default_config_json();

} // namespace smellpred
