#include "smellpred/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "smellpred/error.hpp"
#include "smellpred/ingest.hpp"
#include "smellpred/rng.hpp"

namespace smellpred {

namespace {

std::string zero_padded(std::size_t value, int width) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%0*zu", width, value);
    return std::string(buffer);
}

void validate(const SynthSpec& spec) {
    if (!(spec.minority_fraction > 0.0 && spec.minority_fraction < 0.5)) {
        raise(errc::invalid_spec, "minority_fraction must be in (0, 0.5)");
    }
    if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 0.5)) {
        raise(errc::invalid_spec, "noise_rate must be in [0, 0.5)");
    }
    if (spec.n_files < 10) {
        raise(errc::invalid_spec, "n_files must be at least 10");
    }
    if (spec.n_file_metrics < 2) {
        raise(errc::invalid_spec, "need at least two file metrics (loc plus one more)");
    }
    if (spec.n_informative_file_metrics + 1 > spec.n_file_metrics) {
        raise(errc::invalid_spec, "informative file metrics must leave room for loc");
    }
    if (spec.n_informative_warning_categories > kWarningCategoryCount) {
        raise(errc::invalid_spec, "at most 11 warning categories can be informative");
    }
    const auto k = static_cast<std::size_t>(std::llround(
        static_cast<double>(spec.n_files) * spec.minority_fraction));
    if (k < 2) {
        raise(errc::invalid_spec, "spec yields fewer than two defect-prone files");
    }
}

} // namespace

SynthCorpus generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed) {
    validate(spec);
    Rng rng(seed);

    const std::size_t dirs = std::clamp<std::size_t>(spec.n_files / 100, 1, 50);
    const double kappa_shift = std::sqrt(3.0); // informative counts ~ Poisson(3)
    const double metric_weight = 1.7;          // file-metric signal vs unit warning signal

    FileMetricTable table;
    table.metric_names.push_back("loc");
    table.loc_index = 0;
    for (std::size_t m = 1; m < spec.n_file_metrics; ++m) {
        table.metric_names.push_back("metric_" + zero_padded(m, 2));
    }

    std::vector<ClassWarningRecord> classes;
    std::vector<double> scores(spec.n_files, 0.0);
    std::vector<WarningCounts> file_counts(spec.n_files);

    for (std::size_t i = 0; i < spec.n_files; ++i) {
        const std::string stem = "File" + zero_padded(i, 5);
        FileMetricRecord record;
        record.file_path = "mod" + zero_padded(i % dirs, 2) + "/" + stem + ".cs";

        double score = 0.0;
        record.values.push_back(static_cast<double>(10 + rng.uniform_int(791)));
        for (std::size_t m = 1; m < spec.n_file_metrics; ++m) {
            const double latent = rng.normal();
            record.values.push_back(120.0 + 40.0 * latent);
            if (m <= spec.n_informative_file_metrics) score += metric_weight * latent;
        }

        for (std::size_t c = 0; c < kWarningCategoryCount; ++c) {
            const bool informative = c < spec.n_informative_warning_categories;
            const long count = rng.poisson(informative ? 3.0 : 2.0);
            file_counts[i][c] = count;
            if (informative) score += (static_cast<double>(count) - 3.0) / kappa_shift;
        }

        score += rng.normal() * (2.0 * spec.noise_rate);
        scores[i] = score;

        // Split the file's counts over 1..3 classes to exercise aggregation.
        const std::size_t n_classes = 1 + rng.uniform_int(3);
        std::vector<ClassWarningRecord> members(n_classes);
        for (std::size_t k = 0; k < n_classes; ++k) {
            members[k].file_path = record.file_path;
            members[k].class_name = stem + "Class" + std::to_string(k + 1);
        }
        for (std::size_t c = 0; c < kWarningCategoryCount; ++c) {
            for (std::int64_t unit = 0; unit < file_counts[i][c]; ++unit) {
                ++members[rng.uniform_int(n_classes)].counts[c];
            }
        }
        for (auto& member : members) classes.push_back(std::move(member));
        table.records.push_back(std::move(record));
    }

    const auto k = static_cast<std::size_t>(std::llround(
        static_cast<double>(spec.n_files) * spec.minority_fraction));
    std::vector<std::size_t> order(spec.n_files);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    std::vector<char> defect(spec.n_files, 0);
    for (std::size_t r = 0; r < k; ++r) defect[order[r]] = 1;

    static const char* kFixTemplates[3] = {
        "fix defect DE-%04zu in %s",
        "fixed crash caused by DE-%04zu (%s)",
        "bug DE-%04zu: correct handling in %s",
    };
    static const char* kFillerTemplates[3] = {
        "refactor %s",
        "update comments in %s",
        "rename locals in %s",
    };

    std::vector<ChangeRecord> changes;
    std::size_t change_counter = 0;
    std::size_t defect_counter = 0;
    char message[256];
    for (std::size_t i = 0; i < spec.n_files; ++i) {
        const std::string& path = table.records[i].file_path;
        if (defect[i]) {
            const char* fix_template = kFixTemplates[defect_counter % 3];
            ++defect_counter;
            std::snprintf(message, sizeof(message), fix_template, defect_counter, path.c_str());
            changes.push_back({"c" + zero_padded(++change_counter, 5), message, {path}});
        } else if (i % 10 == 5) {
            std::snprintf(message, sizeof(message), kFillerTemplates[(i / 10) % 3], path.c_str());
            changes.push_back({"c" + zero_padded(++change_counter, 5), message, {path}});
        }
    }

    SynthCorpus corpus;
    corpus.file_metrics_csv = write_file_metrics_csv(table);
    corpus.warnings_xml = write_class_warnings_xml(classes);
    corpus.change_log_jsonl = write_change_log_jsonl(changes);
    corpus.defect_file_count = k;
    return corpus;
}

} // namespace smellpred
