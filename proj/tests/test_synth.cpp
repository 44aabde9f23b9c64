#include <doctest.h>

#include "smellpred/dataset.hpp"
#include "smellpred/ingest.hpp"
#include "smellpred/synth.hpp"
#include "test_util.hpp"

using namespace smellpred;

namespace {

LabeledDataset label_corpus(const SynthCorpus& corpus) {
    const auto metrics = parse_file_metrics(corpus.file_metrics_csv);
    const auto warnings = parse_class_warnings(corpus.warnings_xml);
    const auto changes = parse_change_log(corpus.change_log_jsonl);
    const auto merged =
        merge_sources(metrics, aggregate_warnings_to_files(warnings), SourceMix::combined);
    return label_defect_prone(merged, changes, DefectLinkConfig{});
}

} // namespace

TEST_CASE("synthetic corpus: same spec and seed give byte-identical outputs") {
    SynthSpec spec;
    spec.n_files = 120;
    const auto a = generate_synthetic_corpus(spec, 42);
    const auto b = generate_synthetic_corpus(spec, 42);
    CHECK(a.file_metrics_csv == b.file_metrics_csv);
    CHECK(a.warnings_xml == b.warnings_xml);
    CHECK(a.change_log_jsonl == b.change_log_jsonl);
    const auto c = generate_synthetic_corpus(spec, 43);
    CHECK(a.file_metrics_csv != c.file_metrics_csv);
}

TEST_CASE("synthetic corpus: labeling reproduces the ground truth counts") {
    SynthSpec spec;
    spec.n_files = 1000;
    spec.minority_fraction = 0.1;
    const auto corpus = generate_synthetic_corpus(spec, 7);
    const auto dataset = label_corpus(corpus);
    CHECK(dataset.records.size() == 1000);
    const auto defect = dataset.count(Label::defect_prone);
    CHECK(defect >= 99);
    CHECK(defect <= 101);
    CHECK(defect == corpus.defect_file_count);
}

TEST_CASE("synthetic corpus: zero noise reproduces ground truth exactly") {
    SynthSpec spec;
    spec.n_files = 200;
    spec.noise_rate = 0.0;
    const auto corpus = generate_synthetic_corpus(spec, 11);
    const auto dataset = label_corpus(corpus);
    CHECK(dataset.count(Label::defect_prone) == corpus.defect_file_count);
}

TEST_CASE("synthetic corpus: the three formats re-ingest cleanly together") {
    SynthSpec spec;
    spec.n_files = 150;
    const auto corpus = generate_synthetic_corpus(spec, 3);
    const auto metrics = parse_file_metrics(corpus.file_metrics_csv);
    CHECK(metrics.records.size() == 150);
    CHECK(metrics.metric_names.size() == spec.n_file_metrics);
    const auto warnings = parse_class_warnings(corpus.warnings_xml);
    CHECK(warnings.size() >= 150); // at least one class per file
    const auto dataset = label_corpus(corpus);
    CHECK(dataset.records.size() == 150);
    CHECK(dataset.feature_names.size() == spec.n_file_metrics + kWarningCategoryCount);
    validate_dataset(dataset);
}

TEST_CASE("synthetic corpus: invalid specs") {
    SynthSpec spec;
    spec.minority_fraction = 0.5;
    CHECK_THROWS_CODE(generate_synthetic_corpus(spec, 1), errc::invalid_spec);
    spec = SynthSpec{};
    spec.noise_rate = 0.5;
    CHECK_THROWS_CODE(generate_synthetic_corpus(spec, 1), errc::invalid_spec);
    spec = SynthSpec{};
    spec.noise_rate = -0.1;
    CHECK_THROWS_CODE(generate_synthetic_corpus(spec, 1), errc::invalid_spec);
    spec = SynthSpec{};
    spec.n_files = 4;
    CHECK_THROWS_CODE(generate_synthetic_corpus(spec, 1), errc::invalid_spec);
    spec = SynthSpec{};
    spec.n_informative_file_metrics = 15;
    CHECK_THROWS_CODE(generate_synthetic_corpus(spec, 1), errc::invalid_spec);
}
