#include "smellpred/feature_selection.hpp"

#include <algorithm>
#include <cmath>

#include "smellpred/error.hpp"
#include "smellpred/evaluation.hpp"
#include "smellpred/rng.hpp"

namespace smellpred {

std::size_t FeatureMask::count() const {
    std::size_t n = 0;
    for (char bit : bits) {
        if (bit) ++n;
    }
    return n;
}

LabeledDataset project_features(const LabeledDataset& dataset, const FeatureMask& mask) {
    if (mask.size() != dataset.feature_names.size()) {
        raise(errc::schema_mismatch, "mask length does not match feature count");
    }
    LabeledDataset out;
    out.source_mix = dataset.source_mix;
    out.filtered_generated = dataset.filtered_generated;
    for (std::size_t f = 0; f < mask.size(); ++f) {
        if (mask.bits[f]) out.feature_names.push_back(dataset.feature_names[f]);
    }
    out.records.reserve(dataset.records.size());
    for (const auto& record : dataset.records) {
        DatasetRecord projected;
        projected.file_path = record.file_path;
        projected.label = record.label;
        projected.features.reserve(out.feature_names.size());
        for (std::size_t f = 0; f < mask.size(); ++f) {
            if (mask.bits[f]) projected.features.push_back(record.features[f]);
        }
        out.records.push_back(std::move(projected));
    }
    return out;
}

double wrapper_score(const LabeledDataset& dataset, const FeatureMask& mask,
                     const WrapperEvaluator& evaluator) {
    if (mask.count() == 0) {
        raise(errc::invalid_config, "cannot score an empty feature mask");
    }
    const std::size_t defect = dataset.count(Label::defect_prone);
    if (defect == 0 || defect == dataset.records.size()) {
        raise(errc::degenerate_split, "subset scoring needs both classes present");
    }

    const LabeledDataset projected = project_features(dataset, mask);
    auto [train, eval] = stratified_split(projected, evaluator.split_fraction, evaluator.seed);
    for (const LabeledDataset* half : {&train, &eval}) {
        const std::size_t positives = half->count(Label::defect_prone);
        if (positives == 0 || positives == half->records.size()) {
            raise(errc::degenerate_split, "a split half lacks one of the classes");
        }
    }

    const TrainedModel model = train_classifier(train, evaluator.classifier);
    const MeasureSet set = measures(confusion(model, eval));
    return evaluator.score == ScoreKind::accuracy ? set.accuracy : set.f_measure;
}

FeatureMask backward_elimination_with(std::size_t feature_count, const SubsetScorer& scorer) {
    if (feature_count == 0) {
        raise(errc::invalid_config, "cannot select from zero features");
    }
    FeatureMask current = FeatureMask::all(feature_count);
    if (feature_count == 1) return current;

    FeatureMask best;
    double best_score = 0.0;
    while (current.count() > 1) {
        double step_score = 0.0;
        std::size_t drop = feature_count;
        for (std::size_t f = 0; f < feature_count; ++f) {
            if (!current.bits[f]) continue;
            FeatureMask candidate = current;
            candidate.bits[f] = 0;
            const double score = scorer(candidate);
            if (drop == feature_count || score > step_score) { // ties keep the lowest index
                step_score = score;
                drop = f;
            }
        }
        current.bits[drop] = 0;
        if (best.bits.empty() || step_score > best_score) { // ties keep the earlier, larger mask
            best_score = step_score;
            best = current;
        }
    }
    return best;
}

FeatureMask backward_elimination(const LabeledDataset& dataset, const WrapperEvaluator& evaluator) {
    return backward_elimination_with(dataset.feature_names.size(), [&](const FeatureMask& mask) {
        return wrapper_score(dataset, mask, evaluator);
    });
}

FeatureMask simulated_annealing_select_with(std::size_t feature_count, const SubsetScorer& scorer,
                                            const AnnealingSchedule& schedule) {
    if (feature_count == 0) {
        raise(errc::invalid_config, "cannot select from zero features");
    }
    if (!(schedule.initial_temperature > 0.0)) {
        raise(errc::invalid_config, "initial_temperature must be positive");
    }
    if (!(schedule.cooling_rate > 0.0 && schedule.cooling_rate < 1.0)) {
        raise(errc::invalid_config, "cooling_rate must be in (0, 1)");
    }

    FeatureMask current = FeatureMask::all(feature_count);
    if (schedule.iterations == 0 || feature_count == 1) return current;

    double current_score = scorer(current);
    FeatureMask best = current;
    double best_score = current_score;

    Rng rng(schedule.seed);
    double temperature = schedule.initial_temperature;
    for (std::size_t iteration = 0; iteration < schedule.iterations; ++iteration) {
        FeatureMask neighbor = current;
        while (true) {
            const std::size_t bit = rng.uniform_int(feature_count);
            neighbor.bits[bit] = neighbor.bits[bit] ? 0 : 1;
            if (neighbor.count() > 0) break;
            neighbor.bits[bit] = 1; // would empty the mask; redraw
        }
        const double neighbor_score = scorer(neighbor);
        bool accept = neighbor_score >= current_score;
        if (!accept) {
            const double probability =
                std::exp((neighbor_score - current_score) / temperature);
            accept = rng.uniform01() < probability;
        }
        if (accept) {
            current = std::move(neighbor);
            current_score = neighbor_score;
            if (current_score > best_score) {
                best_score = current_score;
                best = current;
            }
        }
        temperature *= schedule.cooling_rate;
    }
    return best;
}

FeatureMask simulated_annealing_select(const LabeledDataset& dataset,
                                       const WrapperEvaluator& evaluator,
                                       const AnnealingSchedule& schedule) {
    return simulated_annealing_select_with(
        dataset.feature_names.size(),
        [&](const FeatureMask& mask) { return wrapper_score(dataset, mask, evaluator); },
        schedule);
}

nlohmann::json mask_to_json(const FeatureMask& mask, const std::vector<std::string>& names) {
    if (mask.size() != names.size()) {
        raise(errc::schema_mismatch, "mask length does not match feature names");
    }
    nlohmann::json retained = nlohmann::json::array();
    for (std::size_t f = 0; f < names.size(); ++f) {
        if (mask.bits[f]) retained.push_back(names[f]);
    }
    return retained;
}

FeatureMask mask_from_json(const nlohmann::json& document, const std::vector<std::string>& names) {
    if (!document.is_array()) {
        raise(errc::invalid_config, "mask document must be an array of feature names");
    }
    FeatureMask mask;
    mask.bits.assign(names.size(), 0);
    for (const auto& entry : document) {
        const auto name = entry.get<std::string>();
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            raise(errc::unknown_feature, "mask names feature '" + name + "' not in dataset");
        }
        mask.bits[static_cast<std::size_t>(it - names.begin())] = 1;
    }
    if (mask.count() == 0) {
        raise(errc::invalid_config, "mask retains no features");
    }
    return mask;
}

} // namespace smellpred
