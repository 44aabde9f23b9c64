#pragma once

#include <cstdint>
#include <string>

namespace smellpred {

/// Parameters for the synthetic test corpus. Labels are a noisy threshold
/// function of the informative features: a per-file score sums the
/// informative file-metric and warning-count signals plus Gaussian noise
/// scaled by noise_rate, and the top minority_fraction of files by score
/// are defect-prone. Defect-fix change messages reference exactly those
/// files, so re-ingesting and labeling reproduces the ground truth.
struct SynthSpec {
    std::size_t n_files = 2000;
    std::size_t n_file_metrics = 15;                   // total, including loc
    std::size_t n_informative_file_metrics = 3;        // loc itself stays uninformative
    std::size_t n_informative_warning_categories = 4;  // of the 11 categories
    double noise_rate = 0.1;                           // [0, 0.5)
    double minority_fraction = 0.1;                    // (0, 0.5)
};

struct SynthCorpus {
    std::string file_metrics_csv;
    std::string warnings_xml;
    std::string change_log_jsonl;
    std::size_t defect_file_count = 0;
};

/// Deterministic per (spec, seed): identical inputs give byte-identical
/// outputs. Throws InvalidSpec on out-of-range parameters.
SynthCorpus generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed);

} // namespace smellpred
