#include "smellpred/smote.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "smellpred/error.hpp"
#include "smellpred/rng.hpp"

namespace smellpred {

SmoteResult smote(const LabeledDataset& dataset, const SmoteConfig& config) {
    if (config.k_neighbors < 1) {
        raise(errc::invalid_config, "k_neighbors must be at least 1");
    }
    if (!(config.target_ratio > 0.0 && config.target_ratio <= 1.0)) {
        raise(errc::invalid_config, "target_ratio must be in (0, 1]");
    }

    std::size_t defect = dataset.count(Label::defect_prone);
    std::size_t clean = dataset.records.size() - defect;
    const Label minority_label = defect <= clean ? Label::defect_prone : Label::clean;
    const std::size_t minority = std::min(defect, clean);
    const std::size_t majority = std::max(defect, clean);

    SmoteResult result;
    result.dataset = dataset;
    if (minority < 2) {
        raise(errc::too_few_minority,
              "SMOTE needs at least two minority records, found " + std::to_string(minority));
    }

    const auto wanted =
        static_cast<std::size_t>(std::ceil(config.target_ratio * static_cast<double>(majority)));
    if (minority >= wanted) {
        result.effective_k = std::min(config.k_neighbors, minority - 1);
        return result; // already at or past the target ratio
    }
    const std::size_t n_synthetic = wanted - minority;

    std::size_t k = config.k_neighbors;
    if (k > minority - 1) {
        k = minority - 1;
        result.k_clamped = true;
        result.warnings.push_back("k_neighbors clamped to " + std::to_string(k) +
                                  " (minority has " + std::to_string(minority) + " records)");
    }
    result.effective_k = k;

    std::vector<const std::vector<double>*> points;
    points.reserve(minority);
    for (const auto& record : dataset.records) {
        if (record.label == minority_label) points.push_back(&record.features);
    }

    // Standardize per feature over the minority for the distance metric only.
    const std::size_t dim = dataset.feature_names.size();
    std::vector<double> mean(dim, 0.0), inv_sd(dim, 0.0);
    for (const auto* point : points) {
        for (std::size_t f = 0; f < dim; ++f) mean[f] += (*point)[f];
    }
    for (std::size_t f = 0; f < dim; ++f) mean[f] /= static_cast<double>(minority);
    for (const auto* point : points) {
        for (std::size_t f = 0; f < dim; ++f) {
            const double d = (*point)[f] - mean[f];
            inv_sd[f] += d * d;
        }
    }
    for (std::size_t f = 0; f < dim; ++f) {
        const double sd = std::sqrt(inv_sd[f] / static_cast<double>(minority));
        inv_sd[f] = sd > 1e-12 ? 1.0 / sd : 0.0; // constant features contribute nothing
    }

    auto distance_sq = [&](std::size_t a, std::size_t b) {
        double sum = 0.0;
        for (std::size_t f = 0; f < dim; ++f) {
            const double d = ((*points[a])[f] - (*points[b])[f]) * inv_sd[f];
            sum += d * d;
        }
        return sum;
    };

    // k nearest original minority neighbors per minority point, ties by index.
    std::vector<std::vector<std::size_t>> neighbors(minority);
    std::vector<std::pair<double, std::size_t>> scratch;
    for (std::size_t i = 0; i < minority; ++i) {
        scratch.clear();
        for (std::size_t j = 0; j < minority; ++j) {
            if (j == i) continue;
            scratch.emplace_back(distance_sq(i, j), j);
        }
        std::sort(scratch.begin(), scratch.end());
        neighbors[i].reserve(k);
        for (std::size_t j = 0; j < k; ++j) neighbors[i].push_back(scratch[j].second);
    }

    Rng rng(config.seed);
    char name[48];
    for (std::size_t s = 0; s < n_synthetic; ++s) {
        const std::size_t base = s % minority;
        const std::size_t nn = neighbors[base][rng.uniform_int(k)];
        const double u = rng.uniform01();
        DatasetRecord record;
        std::snprintf(name, sizeof(name), "__synthetic__/smote_%06zu", s + 1);
        record.file_path = name;
        record.label = minority_label;
        record.features.resize(dim);
        for (std::size_t f = 0; f < dim; ++f) {
            const double x = (*points[base])[f];
            record.features[f] = x + u * ((*points[nn])[f] - x);
        }
        result.dataset.records.push_back(std::move(record));
    }
    result.synthetic_count = n_synthetic;
    return result;
}

} // namespace smellpred
