#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "smellpred/config.hpp"
#include "smellpred/dataset.hpp"
#include "smellpred/pipeline.hpp"
#include "smellpred/svg_plot.hpp"
#include "test_util.hpp"

using namespace smellpred;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("smellpred_" + tag + "_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    fs::create_directories(dir);
    return dir.string();
}

PipelineConfig synth_config(const std::string& dir, std::uint64_t seed, std::size_t n_files) {
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = seed;
    config.synth.n_files = n_files;
    config.synth.n_file_metrics = 5;
    config.synth.n_informative_file_metrics = 2;
    config.synth.n_informative_warning_categories = 2;
    config.synth.minority_fraction = 0.2;
    config.file_metrics_path = dir + "/synth/file_metrics.csv";
    config.warnings_path = dir + "/synth/warnings.xml";
    config.change_log_path = dir + "/synth/change_log.jsonl";
    // keep command tests quick
    config.forest.n_trees = 10;
    config.annealing.iterations = 8;
    config.plan.fs_options = {FsKind::none};
    return config;
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("build on a synthetic corpus: three variants with identical row counts") {
    const std::string dir = fresh_dir("build");
    auto config = synth_config(dir, 42, 150);
    std::ostringstream out, err;
    REQUIRE(cmd_synth(config, "", out, err) == 0);
    REQUIRE(cmd_build(config, out, err) == 0);

    const auto combined = read_dataset_csv(read_text_file(dataset_path(config, SourceMix::combined)));
    const auto metrics_only =
        read_dataset_csv(read_text_file(dataset_path(config, SourceMix::file_metrics_only)));
    const auto warnings_only =
        read_dataset_csv(read_text_file(dataset_path(config, SourceMix::warnings_only)));
    CHECK(combined.records.size() == 150);
    CHECK(metrics_only.records.size() == 150);
    CHECK(warnings_only.records.size() == 150);
    CHECK(combined.feature_names.size() == 5 + kWarningCategoryCount);
    CHECK(warnings_only.feature_names.size() == kWarningCategoryCount);
    CHECK(fs::exists(report_path(config, "build_report.json")));

    REQUIRE(cmd_ingest(config, out, err) == 0);
    CHECK(fs::exists(report_path(config, "ingest_report.json")));
}

TEST_CASE("build surfaces the per-file aggregation in the combined dataset") {
    const std::string dir = fresh_dir("table");
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = 1;
    config.file_metrics_path = dir + "/metrics.csv";
    config.warnings_path = dir + "/warnings.xml";
    config.change_log_path = dir + "/changes.jsonl";
    write_text_file(config.file_metrics_path,
                    "file_path,loc\nFile1.cs,100\nFile2.cs,30\n");
    write_text_file(config.warnings_path, R"(<Targets>
  <Target Name="File1.cs">
    <Class Name="Class1"><Issue Category="Design" Count="3"/></Class>
    <Class Name="Class2"><Issue Category="Performance" Count="20"/></Class>
    <Class Name="Class3"><Issue Category="Usage" Count="6"/></Class>
  </Target>
  <Target Name="File2.cs">
    <Class Name="Class4"><Issue Category="Design" Count="15"/></Class>
  </Target>
</Targets>)");
    write_text_file(config.change_log_path,
                    R"({"commit":"c1","message":"fix defect DE-1","files":["File1.cs"]})"
                    "\n");
    std::ostringstream out, err;
    REQUIRE_MESSAGE(cmd_build(config, out, err) == 0, err.str());

    const auto combined =
        read_dataset_csv(read_text_file(dataset_path(config, SourceMix::combined)));
    REQUIRE(combined.records.size() == 2);
    const auto& row = combined.records[0];
    CHECK(row.file_path == "File1.cs");
    double issues = 0.0;
    for (std::size_t c = 0; c < kWarningCategoryCount; ++c) issues += row.features[1 + c];
    CHECK(issues == 29.0);
    CHECK(row.label == Label::defect_prone);
    CHECK(combined.records[1].label == Label::clean);
}

TEST_CASE("build: missing warnings file exits 2") {
    const std::string dir = fresh_dir("missing");
    auto config = synth_config(dir, 7, 100);
    std::ostringstream out, err;
    REQUIRE(cmd_synth(config, "", out, err) == 0);
    config.warnings_path = dir + "/nope.xml";
    CHECK(cmd_build(config, out, err) == 2);
}

TEST_CASE("build: parse error exits 2, disjoint join exits 3") {
    const std::string dir = fresh_dir("errors");
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = 1;
    config.file_metrics_path = dir + "/metrics.csv";
    config.warnings_path = dir + "/warnings.xml";
    config.change_log_path = dir + "/changes.jsonl";
    write_text_file(config.change_log_path, "");
    write_text_file(config.warnings_path,
                    R"(<Targets><Target Name="b.cs"><Class Name="C"/></Target></Targets>)");
    write_text_file(config.file_metrics_path, "file_path,loc\na.cs,notanumber\n");
    std::ostringstream out, err;
    CHECK(cmd_build(config, out, err) == 2);
    CHECK(err.str().find("metrics.csv") != std::string::npos);

    write_text_file(config.file_metrics_path, "file_path,loc\na.cs,10\n");
    std::ostringstream out2, err2;
    CHECK(cmd_build(config, out2, err2) == 3); // EmptyJoin
}

TEST_CASE("generated-code filtering drops files from every variant and keeps a prefilter copy") {
    const std::string dir = fresh_dir("filter");
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = 3;
    config.file_metrics_path = dir + "/metrics.csv";
    config.warnings_path = dir + "/warnings.xml";
    config.change_log_path = dir + "/changes.jsonl";
    GeneratedCodeRule rule;
    rule.loc_threshold = 1000;
    rule.path_globs = {"**/*.designer.cs"};
    config.generated_code = rule;
    write_text_file(config.file_metrics_path, "file_path,loc\n"
                                              "a/big.cs,1500\n"
                                              "a/Form.designer.cs,50\n"
                                              "a/ok.cs,100\n");
    write_text_file(config.warnings_path, R"(<Targets>
      <Target Name="a/big.cs"><Class Name="B"><Issue Category="Design" Count="4"/></Class></Target>
      <Target Name="a/Form.designer.cs"><Class Name="D"><Issue Category="Usage" Count="2"/></Class></Target>
      <Target Name="a/ok.cs"><Class Name="K"><Issue Category="Naming" Count="1"/></Class></Target>
    </Targets>)");
    write_text_file(config.change_log_path, "");
    std::ostringstream out, err;
    REQUIRE_MESSAGE(cmd_build(config, out, err) == 0, err.str());

    const auto combined =
        read_dataset_csv(read_text_file(dataset_path(config, SourceMix::combined)));
    REQUIRE(combined.records.size() == 1);
    CHECK(combined.records[0].file_path == "a/ok.cs");
    const auto warnings_only =
        read_dataset_csv(read_text_file(dataset_path(config, SourceMix::warnings_only)));
    CHECK(warnings_only.records.size() == 1);

    const auto prefilter = read_dataset_csv(read_text_file(prefilter_dataset_path(config)));
    CHECK(prefilter.records.size() == 3);
}

TEST_CASE("balance and select commands") {
    const std::string dir = fresh_dir("balsel");
    auto config = synth_config(dir, 11, 120);
    std::ostringstream out, err;
    REQUIRE(cmd_synth(config, "", out, err) == 0);
    REQUIRE(cmd_build(config, out, err) == 0);

    const std::string combined_csv = dataset_path(config, SourceMix::combined);
    const std::string balanced_csv = dir + "/balanced.csv";
    REQUIRE_MESSAGE(cmd_balance(config, combined_csv, balanced_csv, out, err) == 0, err.str());
    const auto balanced = read_dataset_csv(read_text_file(balanced_csv));
    CHECK(balanced.count(Label::defect_prone) == balanced.count(Label::clean));

    const std::string mask_json = dir + "/mask.json";
    REQUIRE_MESSAGE(cmd_select(config, combined_csv, FsKind::elimination,
                               ModelKind::naive_bayes, mask_json, out, err) == 0,
                    err.str());
    const auto document = nlohmann::json::parse(read_text_file(mask_json));
    CHECK(document.is_array());
    CHECK(document.size() >= 1);
}

TEST_CASE("experiment command: reports, best row, determinism across jobs") {
    const std::string dir = fresh_dir("exp");
    auto config = synth_config(dir, 13, 140);
    config.plan.classifiers = {ModelKind::naive_bayes, ModelKind::random_forest};
    config.plan.fs_options = {FsKind::none};
    std::ostringstream out, err;
    REQUIRE(cmd_synth(config, "", out, err) == 0);
    REQUIRE(cmd_build(config, out, err) == 0);

    std::ostringstream out1, err1;
    REQUIRE_MESSAGE(cmd_experiment(config, out1, err1) == 0, err1.str());
    CHECK(out1.str().find("best cell:") != std::string::npos);
    const std::string csv_once = read_text_file(report_path(config, "experiment.csv"));
    const std::string json_once = read_text_file(report_path(config, "experiment.json"));
    // 2 classifiers x 2 smote x 1 fs x 2 smells = 8 rows + header
    CHECK(count_occurrences(csv_once, "\n") == 9);

    config.jobs = 3;
    std::ostringstream out2, err2;
    REQUIRE(cmd_experiment(config, out2, err2) == 0);
    CHECK(read_text_file(report_path(config, "experiment.csv")) == csv_once);
    CHECK(read_text_file(report_path(config, "experiment.json")) == json_once);
}

TEST_CASE("experiment and study exit 4 when nothing succeeds") {
    const std::string dir = fresh_dir("allfail");
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = 2;
    config.n_submodules = 2;
    config.plan.fs_options = {FsKind::none};
    // all-clean labels: every cell dies at the stratified split
    const auto all_clean = testutil::make_dataset(
        {"loc"}, {{1.0}, {2.0}, {3.0}, {4.0}}, {0, 0, 0, 0});
    write_text_file(dataset_path(config, SourceMix::combined), write_dataset_csv(all_clean));
    write_text_file(dataset_path(config, SourceMix::file_metrics_only),
                    write_dataset_csv(all_clean));
    LabeledDataset warn_variant = all_clean;
    warn_variant.feature_names = {"Design"};
    write_text_file(dataset_path(config, SourceMix::warnings_only),
                    write_dataset_csv(warn_variant));
    std::ostringstream out, err;
    CHECK(cmd_experiment(config, out, err) == 4);
    std::ostringstream out2, err2;
    CHECK(cmd_study(config, out2, err2) == 4);
}

TEST_CASE("study command: reports and the too-many-partitions precondition") {
    const std::string dir = fresh_dir("study");
    auto config = synth_config(dir, 17, 160);
    config.n_submodules = 4;
    config.forest.n_trees = 8;
    std::ostringstream out, err;
    REQUIRE(cmd_synth(config, "", out, err) == 0);
    REQUIRE(cmd_build(config, out, err) == 0);
    std::ostringstream out1, err1;
    REQUIRE_MESSAGE(cmd_study(config, out1, err1) == 0, err1.str());
    const std::string csv_once = read_text_file(report_path(config, "study.csv"));
    // 6 conditions x 4 measures + header
    CHECK(count_occurrences(csv_once, "\n") == 25);
    CHECK(csv_once.find("file_metrics_only,without_fs,accuracy,") != std::string::npos);

    config.jobs = 2;
    std::ostringstream out2, err2;
    REQUIRE(cmd_study(config, out2, err2) == 0);
    CHECK(read_text_file(report_path(config, "study.csv")) == csv_once);

    // a 3-record dataset cannot form 2 viable submodules
    PipelineConfig tiny;
    tiny.output_dir = dir + "/tiny";
    tiny.seed = 1;
    tiny.n_submodules = 2;
    const LabeledDataset three = testutil::make_dataset(
        {"loc", "Design", "Globalization", "Interoperability", "Maintainability", "Mobility",
         "Naming", "Performance", "Portability", "Reliability", "Security", "Usage"},
        {{1.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
         {2.0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
         {3.0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {1, 0, 0});
    write_text_file(dataset_path(tiny, SourceMix::combined), write_dataset_csv(three));
    LabeledDataset metrics_variant = three;
    metrics_variant.feature_names = {"loc"};
    for (auto& record : metrics_variant.records) record.features.resize(1);
    write_text_file(dataset_path(tiny, SourceMix::file_metrics_only),
                    write_dataset_csv(metrics_variant));
    LabeledDataset warn_variant = three;
    warn_variant.feature_names.erase(warn_variant.feature_names.begin());
    for (auto& record : warn_variant.records) {
        record.features.erase(record.features.begin());
    }
    write_text_file(dataset_path(tiny, SourceMix::warnings_only),
                    write_dataset_csv(warn_variant));
    std::ostringstream out3, err3;
    CHECK(cmd_study(tiny, out3, err3) == 3);
    CHECK(err3.str().find("TooManyPartitions") != std::string::npos);
}

TEST_CASE("plot command: marker count equals record count; filtering strips big files") {
    const std::string dir = fresh_dir("plot");
    PipelineConfig config;
    config.output_dir = dir;
    config.seed = 5;

    const auto dataset = testutil::make_dataset(
        {"loc", "Design", "Globalization", "Interoperability", "Maintainability", "Mobility",
         "Naming", "Performance", "Portability", "Reliability", "Security", "Usage"},
        {{100, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2},
         {200, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
         {300, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
         {400, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0},
         {1500, 9, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {0, 0, 1, 0, 1});
    const std::string csv = dir + "/five.csv";
    write_text_file(csv, write_dataset_csv(dataset));

    std::ostringstream out, err;
    const std::string svg_path = dir + "/plot.svg";
    REQUIRE_MESSAGE(cmd_plot(config, csv, "loc", "total_issues", svg_path, out, err) == 0,
                    err.str());
    const std::string svg = read_text_file(svg_path);
    CHECK(count_occurrences(svg, "<circle") == 5);
    CHECK(svg.find("loc</text>") != std::string::npos);
    CHECK(svg.find("total_issues</text>") != std::string::npos);

    // filtered variant: drop loc > 1000 and re-plot
    GeneratedCodeRule rule;
    rule.loc_threshold = 1000;
    LabeledDataset filtered = dataset;
    filtered.records.pop_back();
    const std::string filtered_csv = dir + "/filtered.csv";
    write_text_file(filtered_csv, write_dataset_csv(filtered));
    const std::string filtered_svg = dir + "/filtered.svg";
    REQUIRE(cmd_plot(config, filtered_csv, "loc", "total_issues", filtered_svg, out, err) == 0);
    CHECK(count_occurrences(read_text_file(filtered_svg), "<circle") == 4);

    std::ostringstream out2, err2;
    CHECK(cmd_plot(config, csv, "loc", "no_such_metric", dir + "/x.svg", out2, err2) == 3);
}

TEST_CASE("scatter_plot_svg handles empty and single-point input") {
    CHECK(scatter_plot_svg({}, "x", "y").find("<svg") == 0);
    const auto svg = scatter_plot_svg({{3.0, 4.0}}, "x", "y");
    CHECK(count_occurrences(svg, "<circle") == 1);
}

// ---------------------------------------------------------------------------
// Configuration

TEST_CASE("config: defaults parse and overrides win") {
    nlohmann::json document = default_config_json();
    apply_config_overrides(document, {"seed=99", "smote.k_neighbors=3",
                                      "inputs.file_metrics=in.csv",
                                      "experiment.classifiers=[\"pnn\"]"});
    const auto config = config_from_json(document);
    CHECK(config.require_seed() == 99);
    CHECK(config.smote.k_neighbors == 3);
    CHECK(config.file_metrics_path == "in.csv");
    REQUIRE(config.plan.classifiers.size() == 1);
    CHECK(config.plan.classifiers[0] == ModelKind::pnn);
    CHECK(config.forest.n_trees == 100);
    CHECK(config.annealing.iterations == 200);
}

TEST_CASE("config: missing seed is rejected lazily, bad values eagerly") {
    const auto config = config_from_json(nlohmann::json::object());
    CHECK_THROWS_CODE(config.require_seed(), errc::invalid_config);
    nlohmann::json bad = {{"smote", {{"target_ratio", 2.0}}}};
    CHECK_THROWS_CODE(config_from_json(bad), errc::invalid_config);
    nlohmann::json bad2 = {{"study", {{"n_submodules", 1}}}};
    CHECK_THROWS_CODE(config_from_json(bad2), errc::invalid_config);
    nlohmann::json bad3 = {{"feature_selection", {{"score", "auc"}}}};
    CHECK_THROWS_CODE(config_from_json(bad3), errc::invalid_config);
}

// ---------------------------------------------------------------------------
// CLI binary smoke test

TEST_CASE("cli end-to-end: synth, build, experiment, plot") {
    const std::string dir = fresh_dir("cli");
    const std::string cli = SMELLPRED_CLI_PATH;
    const auto run = [&](const std::string& arguments) {
        const std::string command = cli + " " + arguments + " >/dev/null 2>&1";
        const int status = std::system(command.c_str());
        return WEXITSTATUS(status);
    };
    const std::string io_flags = " --file-metrics " + dir + "/synth/file_metrics.csv" +
                                 " --warnings " + dir + "/synth/warnings.xml" +
                                 " --change-log " + dir + "/synth/change_log.jsonl" +
                                 " --out-dir " + dir;
    CHECK(run("synth --seed 5 --out-dir " + dir +
              " --set synth.n_files=120 --set synth.minority_fraction=0.2") == 0);
    CHECK(run("ingest --seed 5" + io_flags) == 0);
    CHECK(run("build --seed 5" + io_flags) == 0);
    CHECK(run("experiment --seed 5" + io_flags +
              " --n-trees 8 --set experiment.feature_selection=[\\\"none\\\"]"
              " --set experiment.classifiers=[\\\"naive_bayes\\\"]") == 0);
    CHECK(fs::exists(dir + "/reports/experiment.csv"));
    CHECK(run("plot --seed 5 --input " + dir + "/datasets/combined.csv -x loc -y total_issues "
              "--output " + dir + "/plots/fig.svg") == 0);
    CHECK(fs::exists(dir + "/plots/fig.svg"));

    // no subcommand / unknown flags fail fast
    CHECK(run("") != 0);
    // pipeline commands demand a seed
    CHECK(run("build" + io_flags) == 2);
    // missing input file
    CHECK(run("build --seed 5 --file-metrics /nonexistent.csv --warnings " + dir +
              "/synth/warnings.xml --change-log " + dir + "/synth/change_log.jsonl --out-dir " +
              dir) == 2);
}
