#include "smellpred/config.hpp"

#include "smellpred/error.hpp"

namespace smellpred {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) { raise(errc::invalid_config, message); }

template <typename T>
T get_as(const json& node, const char* where) {
    try {
        return node.get<T>();
    } catch (const json::exception&) {
        bad(std::string("wrong type for '") + where + "'");
    }
}

template <typename T>
void read(const json& object, const char* key, T& into) {
    if (object.contains(key)) into = get_as<T>(object.at(key), key);
}

ScoreKind score_from_string(const std::string& text) {
    if (text == "f_measure") return ScoreKind::f_measure;
    if (text == "accuracy") return ScoreKind::accuracy;
    bad("score must be 'f_measure' or 'accuracy', got '" + text + "'");
}

} // namespace

std::uint64_t PipelineConfig::require_seed() const {
    if (!seed) {
        bad("a numeric 'seed' is required; wall-clock seeding is not supported");
    }
    return *seed;
}

PipelineConfig config_from_json(const json& document) {
    if (!document.is_object()) bad("config document must be a JSON object");
    PipelineConfig config;

    if (document.contains("inputs")) {
        const auto& inputs = document.at("inputs");
        read(inputs, "file_metrics", config.file_metrics_path);
        read(inputs, "warnings", config.warnings_path);
        read(inputs, "change_log", config.change_log_path);
    }
    read(document, "output_dir", config.output_dir);
    if (document.contains("seed")) {
        config.seed = get_as<std::uint64_t>(document.at("seed"), "seed");
    }
    read(document, "jobs", config.jobs);
    if (config.jobs == 0) bad("jobs must be at least 1");

    if (document.contains("generated_code") && !document.at("generated_code").is_null()) {
        const auto& node = document.at("generated_code");
        GeneratedCodeRule rule;
        read(node, "path_globs", rule.path_globs);
        if (node.contains("loc_threshold") && !node.at("loc_threshold").is_null()) {
            const auto threshold = get_as<std::int64_t>(node.at("loc_threshold"), "loc_threshold");
            if (threshold <= 0) bad("loc_threshold must be positive");
            rule.loc_threshold = threshold;
        }
        if (rule.path_globs.empty() && !rule.loc_threshold) {
            bad("generated_code needs path_globs or loc_threshold (or omit the key)");
        }
        config.generated_code = std::move(rule);
    }
    read(document, "defect_pattern", config.defect_link.defect_pattern);

    if (document.contains("smote")) {
        const auto& node = document.at("smote");
        read(node, "k_neighbors", config.smote.k_neighbors);
        read(node, "target_ratio", config.smote.target_ratio);
        read(node, "train_only", config.smote_train_only);
        if (config.smote.k_neighbors < 1) bad("smote.k_neighbors must be at least 1");
        if (!(config.smote.target_ratio > 0.0 && config.smote.target_ratio <= 1.0)) {
            bad("smote.target_ratio must be in (0, 1]");
        }
    }

    if (document.contains("feature_selection")) {
        const auto& node = document.at("feature_selection");
        read(node, "split_fraction", config.fs_split_fraction);
        if (!(config.fs_split_fraction > 0.0 && config.fs_split_fraction < 1.0)) {
            bad("feature_selection.split_fraction must be in (0, 1)");
        }
        if (node.contains("score")) {
            config.fs_score = score_from_string(get_as<std::string>(node.at("score"), "score"));
        }
        if (node.contains("annealing")) {
            const auto& annealing = node.at("annealing");
            read(annealing, "initial_temperature", config.annealing.initial_temperature);
            read(annealing, "cooling_rate", config.annealing.cooling_rate);
            read(annealing, "iterations", config.annealing.iterations);
            if (!(config.annealing.initial_temperature > 0.0)) {
                bad("annealing.initial_temperature must be positive");
            }
            if (!(config.annealing.cooling_rate > 0.0 && config.annealing.cooling_rate < 1.0)) {
                bad("annealing.cooling_rate must be in (0, 1)");
            }
        }
    }

    if (document.contains("classifiers")) {
        const auto& node = document.at("classifiers");
        if (node.contains("random_forest")) {
            const auto& forest = node.at("random_forest");
            read(forest, "n_trees", config.forest.n_trees);
            read(forest, "max_depth", config.forest.max_depth);
            read(forest, "min_split", config.forest.min_split);
            read(forest, "features_per_split", config.forest.features_per_split);
            if (config.forest.n_trees == 0) bad("random_forest.n_trees must be at least 1");
            if (config.forest.min_split < 2) bad("random_forest.min_split must be at least 2");
        }
        if (node.contains("pnn")) {
            const auto& pnn = node.at("pnn");
            read(pnn, "bandwidth", config.pnn.bandwidth);
            read(pnn, "standardize", config.pnn.standardize);
            if (!(config.pnn.bandwidth > 0.0)) bad("pnn.bandwidth must be positive");
        }
    }

    if (document.contains("experiment")) {
        const auto& node = document.at("experiment");
        if (node.contains("classifiers")) {
            config.plan.classifiers.clear();
            for (const auto& entry : node.at("classifiers")) {
                const auto kind = model_kind_from_name(get_as<std::string>(entry, "classifiers"));
                if (!kind) bad("unknown classifier in experiment.classifiers");
                config.plan.classifiers.push_back(*kind);
            }
            if (config.plan.classifiers.empty()) bad("experiment.classifiers is empty");
        }
        if (node.contains("smote")) {
            config.plan.smote_options.clear();
            for (const auto& entry : node.at("smote")) {
                const auto text = get_as<std::string>(entry, "smote");
                if (text == "with") config.plan.smote_options.push_back(SmoteOption::with_smote);
                else if (text == "without") config.plan.smote_options.push_back(SmoteOption::without);
                else bad("experiment.smote entries must be 'with' or 'without'");
            }
            if (config.plan.smote_options.empty()) bad("experiment.smote is empty");
        }
        if (node.contains("feature_selection")) {
            config.plan.fs_options.clear();
            for (const auto& entry : node.at("feature_selection")) {
                const auto kind = fs_kind_from_name(get_as<std::string>(entry, "feature_selection"));
                if (!kind) bad("unknown method in experiment.feature_selection");
                config.plan.fs_options.push_back(*kind);
            }
            if (config.plan.fs_options.empty()) bad("experiment.feature_selection is empty");
        }
        if (node.contains("smells")) {
            config.plan.smells_options.clear();
            for (const auto& entry : node.at("smells")) {
                const auto text = get_as<std::string>(entry, "smells");
                if (text == "present") config.plan.smells_options.push_back(SmellsOption::present);
                else if (text == "absent") config.plan.smells_options.push_back(SmellsOption::absent);
                else bad("experiment.smells entries must be 'present' or 'absent'");
            }
            if (config.plan.smells_options.empty()) bad("experiment.smells is empty");
        }
        read(node, "fs_on_full", config.plan.fs_on_full);
    }

    if (document.contains("study")) {
        const auto& node = document.at("study");
        read(node, "n_submodules", config.n_submodules);
        if (config.n_submodules < 2) bad("study.n_submodules must be at least 2");
        if (node.contains("selector")) {
            const auto kind =
                fs_kind_from_name(get_as<std::string>(node.at("selector"), "selector"));
            if (!kind || *kind == FsKind::none) {
                bad("study.selector must be 'elimination' or 'annealing'");
            }
            config.study_selector = *kind;
        }
    }

    if (document.contains("synth")) {
        const auto& node = document.at("synth");
        read(node, "n_files", config.synth.n_files);
        read(node, "n_file_metrics", config.synth.n_file_metrics);
        read(node, "n_informative_file_metrics", config.synth.n_informative_file_metrics);
        read(node, "n_informative_warning_categories",
             config.synth.n_informative_warning_categories);
        read(node, "noise_rate", config.synth.noise_rate);
        read(node, "minority_fraction", config.synth.minority_fraction);
    }

    return config;
}

void apply_config_overrides(json& document, const std::vector<std::string>& overrides) {
    for (const auto& entry : overrides) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            bad("override '" + entry + "' must look like key.path=value");
        }
        std::string path = "/" + entry.substr(0, eq);
        for (char& c : path) {
            if (c == '.') c = '/';
        }
        const std::string raw = entry.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // not valid JSON: keep as a string
        }
        try {
            document[json::json_pointer(path)] = value;
        } catch (const json::exception& e) {
            bad("cannot apply override '" + entry + "': " + e.what());
        }
    }
}

nlohmann::json default_config_json() {
    return json{
        {"inputs", {{"file_metrics", ""}, {"warnings", ""}, {"change_log", ""}}},
        {"output_dir", "out"},
        {"jobs", 1},
        {"defect_pattern", kDefaultDefectPattern},
        {"generated_code", {{"path_globs", json::array()}, {"loc_threshold", 1000}}},
        {"smote", {{"k_neighbors", 5}, {"target_ratio", 1.0}, {"train_only", false}}},
        {"feature_selection",
         {{"split_fraction", 0.5},
          {"score", "f_measure"},
          {"annealing",
           {{"initial_temperature", 1.0}, {"cooling_rate", 0.95}, {"iterations", 200}}}}},
        {"classifiers",
         {{"random_forest",
           {{"n_trees", 100}, {"max_depth", 0}, {"min_split", 2}, {"features_per_split", 0}}},
          {"pnn", {{"bandwidth", 1.0}, {"standardize", true}}}}},
        {"experiment",
         {{"classifiers", {"naive_bayes", "pnn", "random_forest"}},
          {"smote", {"without", "with"}},
          {"feature_selection", {"annealing", "elimination", "none"}},
          {"smells", {"absent", "present"}},
          {"fs_on_full", false}}},
        {"study", {{"n_submodules", 20}, {"selector", "elimination"}}},
        {"synth",
         {{"n_files", 2000},
          {"n_file_metrics", 15},
          {"n_informative_file_metrics", 3},
          {"n_informative_warning_categories", 4},
          {"noise_rate", 0.1},
          {"minority_fraction", 0.1}}},
    };
}

} // namespace smellpred
