#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smellpred/pipeline.hpp"

namespace {

using smellpred::PipelineConfig;

struct GlobalArgs {
    std::string config_path;
    std::vector<std::string> overrides; // key.path=value, applied in order
};

// Dedicated flags are sugar for --set; they are pushed after the --set list
// so explicit flags always win.
void add_common_options(CLI::App* app, GlobalArgs& args) {
    app->add_option("-c,--config", args.config_path, "JSON configuration file");
    app->add_option("--set", args.overrides, "Override a config field: key.path=value")
        ->take_all();
    const auto alias = [app, &args](const std::string& flag, const std::string& key,
                                    const std::string& help) {
        app->add_option_function<std::string>(
               flag, [&args, key](const std::string& value) { args.overrides.push_back(key + "=" + value); },
               help)
            ->type_name("VALUE");
    };
    alias("--seed", "seed", "Master seed (required for pipeline commands)");
    alias("--out-dir", "output_dir", "Output directory");
    alias("--jobs", "jobs", "Worker parallelism for matrix/study cells");
    alias("--file-metrics", "inputs.file_metrics", "Per-file metrics CSV");
    alias("--warnings", "inputs.warnings", "Per-class warnings XML");
    alias("--change-log", "inputs.change_log", "Change log JSONL");
    alias("--defect-pattern", "defect_pattern", "Regex marking defect-fix messages");
    alias("--loc-threshold", "generated_code.loc_threshold", "Generated-code LOC threshold");
    alias("--k-neighbors", "smote.k_neighbors", "SMOTE neighbor count");
    alias("--target-ratio", "smote.target_ratio", "SMOTE minority/majority target");
    alias("--n-trees", "classifiers.random_forest.n_trees", "Random forest size");
    alias("--bandwidth", "classifiers.pnn.bandwidth", "PNN kernel bandwidth");
    alias("--iterations", "feature_selection.annealing.iterations", "Annealing iterations");
    alias("--n-submodules", "study.n_submodules", "Submodule count for the study");
    alias("--fs-on-full", "experiment.fs_on_full",
          "Select features on the whole dataset instead of the training half");
}

PipelineConfig resolve_config(const GlobalArgs& args) {
    nlohmann::json document = nlohmann::json::object();
    if (!args.config_path.empty()) {
        const std::string text = smellpred::read_text_file(args.config_path);
        try {
            document = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            smellpred::raise(smellpred::errc::invalid_config,
                             args.config_path + ": " + e.what());
        }
    }
    smellpred::apply_config_overrides(document, args.overrides);
    return smellpred::config_from_json(document);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Defect prediction from file metrics and static-analysis warnings"};
    app.require_subcommand(1);

    GlobalArgs args;

    auto* ingest = app.add_subcommand("ingest", "Parse and validate the three input files");
    add_common_options(ingest, args);

    auto* build = app.add_subcommand("build", "Build the labeled dataset variants");
    add_common_options(build, args);

    auto* balance = app.add_subcommand("balance", "SMOTE-balance a dataset CSV");
    add_common_options(balance, args);
    std::string balance_input, balance_output;
    balance->add_option("--input", balance_input, "Dataset CSV")->required();
    balance->add_option("--output", balance_output, "Balanced dataset CSV")->required();

    auto* select = app.add_subcommand("select", "Wrapper feature selection on a dataset CSV");
    add_common_options(select, args);
    std::string select_input, select_output;
    std::string select_method = "elimination";
    std::string select_classifier = "random_forest";
    select->add_option("--input", select_input, "Dataset CSV")->required();
    select->add_option("--output", select_output, "Mask JSON (retained feature names)")->required();
    select->add_option("--method", select_method, "elimination | annealing");
    select->add_option("--classifier", select_classifier, "naive_bayes | pnn | random_forest");

    auto* experiment =
        app.add_subcommand("experiment", "Run the classifier x SMOTE x FS x smells matrix");
    add_common_options(experiment, args);

    auto* study = app.add_subcommand("study", "Run the submodule study with mean/std aggregation");
    add_common_options(study, args);

    auto* plot = app.add_subcommand("plot", "Scatter plot of two dataset columns as SVG");
    add_common_options(plot, args);
    std::string plot_input, plot_x, plot_y, plot_output;
    plot->add_option("--input", plot_input, "Dataset CSV")->required();
    plot->add_option("-x,--x-metric", plot_x, "X column name")->required();
    plot->add_option("-y,--y-metric", plot_y, "Y column name (or total_issues)")->required();
    plot->add_option("--output", plot_output, "Output SVG path")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic input corpus");
    add_common_options(synth, args);
    std::string synth_dir;
    synth->add_option("--corpus-dir", synth_dir, "Where to write the corpus (default <out>/synth)");

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineConfig config = resolve_config(args);
        if (ingest->parsed()) return smellpred::cmd_ingest(config, std::cout, std::cerr);
        if (build->parsed()) return smellpred::cmd_build(config, std::cout, std::cerr);
        if (balance->parsed()) {
            return smellpred::cmd_balance(config, balance_input, balance_output, std::cout,
                                          std::cerr);
        }
        if (select->parsed()) {
            const auto method = smellpred::fs_kind_from_name(select_method);
            const auto classifier = smellpred::model_kind_from_name(select_classifier);
            if (!method || !classifier) {
                std::cerr << "unknown --method or --classifier\n";
                return 2;
            }
            return smellpred::cmd_select(config, select_input, *method, *classifier, select_output,
                                         std::cout, std::cerr);
        }
        if (experiment->parsed()) return smellpred::cmd_experiment(config, std::cout, std::cerr);
        if (study->parsed()) return smellpred::cmd_study(config, std::cout, std::cerr);
        if (plot->parsed()) {
            return smellpred::cmd_plot(config, plot_input, plot_x, plot_y, plot_output, std::cout,
                                       std::cerr);
        }
        if (synth->parsed()) return smellpred::cmd_synth(config, synth_dir, std::cout, std::cerr);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const smellpred::Error& e) {
        std::cerr << e.what() << "\n";
        return smellpred::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
}
