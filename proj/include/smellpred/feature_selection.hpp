#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellpred/classifiers.hpp"
#include "smellpred/types.hpp"

namespace smellpred {

/// Boolean feature subset; never empty when returned by a selector.
struct FeatureMask {
    std::vector<char> bits;

    static FeatureMask all(std::size_t n) { return FeatureMask{std::vector<char>(n, 1)}; }
    std::size_t size() const { return bits.size(); }
    std::size_t count() const;
    bool operator==(const FeatureMask&) const = default;
};

enum class ScoreKind { f_measure, accuracy };

/// How a feature subset is scored: the configured classifier is trained on
/// a seeded stratified split of the mask-projected dataset and the chosen
/// measure is computed on the held-out half.
struct WrapperEvaluator {
    ClassifierConfig classifier;
    double split_fraction = 0.5;
    std::uint64_t seed = 0;
    ScoreKind score = ScoreKind::f_measure;
};

struct AnnealingSchedule {
    double initial_temperature = 1.0;
    double cooling_rate = 0.95; // in (0, 1)
    std::size_t iterations = 200;
    std::uint64_t seed = 0;
};

/// Keeps only the masked features; feature_names shrink accordingly.
LabeledDataset project_features(const LabeledDataset& dataset, const FeatureMask& mask);

/// Deterministic for fixed inputs. Errors: DegenerateSplit when either half
/// of the stratified split lacks one of the classes (including single-class
/// input), plus anything the classifier raises.
double wrapper_score(const LabeledDataset& dataset, const FeatureMask& mask,
                     const WrapperEvaluator& evaluator);

using SubsetScorer = std::function<double(const FeatureMask&)>;

/// Greedy reversed elimination: starting from all features, repeatedly drops
/// the feature whose removal scores highest (ties: lowest feature index)
/// until one feature remains, then returns the best mask seen on that
/// trajectory (ties: larger feature count, then earliest). Exactly
/// m(m+1)/2 - 1 scorer calls for m initial features.
FeatureMask backward_elimination(const LabeledDataset& dataset, const WrapperEvaluator& evaluator);
FeatureMask backward_elimination_with(std::size_t feature_count, const SubsetScorer& scorer);

/// Simulated annealing over masks: starts all-true; each iteration flips one
/// random bit (redrawn if it would empty the mask), accepts improvements and
/// otherwise accepts with probability exp((s_new - s_cur)/T); T is multiplied
/// by cooling_rate after every iteration. Returns the best mask encountered.
FeatureMask simulated_annealing_select(const LabeledDataset& dataset,
                                       const WrapperEvaluator& evaluator,
                                       const AnnealingSchedule& schedule);
FeatureMask simulated_annealing_select_with(std::size_t feature_count, const SubsetScorer& scorer,
                                            const AnnealingSchedule& schedule);

/// Masks serialize as the JSON array of retained feature names.
nlohmann::json mask_to_json(const FeatureMask& mask, const std::vector<std::string>& names);
FeatureMask mask_from_json(const nlohmann::json& document, const std::vector<std::string>& names);

} // namespace smellpred
