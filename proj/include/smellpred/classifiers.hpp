#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellpred/types.hpp"

namespace smellpred {

enum class ModelKind { naive_bayes, pnn, random_forest };

std::string_view model_kind_name(ModelKind kind);
std::optional<ModelKind> model_kind_from_name(std::string_view name);

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0;          // 0 = unlimited
    std::size_t min_split = 2;
    std::size_t features_per_split = 0; // 0 = floor(sqrt(feature count)), at least 1
    bool bootstrap = true;              // test hook; disabling trains each tree on all records
    std::uint64_t seed = 0;
};

struct PnnConfig {
    double bandwidth = 1.0;
    bool standardize = true; // kernel distances on standardized features
};

/// Gaussian class-conditional model: per-class prior plus per-feature mean
/// and variance (variance floored at 1e-9).
struct NaiveBayesParams {
    std::array<double, 2> log_prior{}; // [clean, defect_prone]
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> variances;
};

/// Parzen-window model: stored training vectors per class, optionally
/// standardized with training-set statistics.
struct PnnParams {
    double bandwidth = 1.0;
    bool standardize = true;
    std::vector<double> feature_means;   // identity transform when !standardize
    std::vector<double> feature_inv_sds; // 0 marks a constant feature (ignored)
    std::array<std::vector<std::vector<double>>, 2> class_points;
};

struct TreeNode {
    bool is_leaf = true;
    Label leaf = Label::clean;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;  // child for feature value <= threshold
    std::int32_t right = -1;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    Label predict(const std::vector<double>& features) const;
};

struct ForestParams {
    std::vector<DecisionTree> trees;
};

struct TrainedModel {
    ModelKind kind = ModelKind::naive_bayes;
    std::vector<std::string> feature_names;
    std::variant<NaiveBayesParams, PnnParams, ForestParams> params;
};

// Training entry points. All three are invariant to training-record order:
// records are processed in canonical (path-sorted) order internally.
// Errors: SingleClassTraining when a class is absent (for Naive Bayes also
// when a class has fewer than two records).
TrainedModel train_naive_bayes(const LabeledDataset& dataset);
TrainedModel train_pnn(const LabeledDataset& dataset, const PnnConfig& config);

/// CART-style forest: each tree trains on a bootstrap sample (seeded per
/// tree as seed + tree index), splits minimize weighted Gini impurity over
/// a random feature subset with thresholds at midpoints of sorted distinct
/// values, and the forest takes a majority vote. All ties (leaf majority,
/// vote) resolve to clean; split ties take the lowest feature index, then
/// the lowest threshold. When the sampled features admit no split the
/// remaining features are searched before closing a leaf.
TrainedModel train_random_forest(const LabeledDataset& dataset, const ForestConfig& config);

/// Applies a trained model. Errors: SchemaMismatch on wrong vector length.
Label predict(const TrainedModel& model, const std::vector<double>& features);

// Versioned JSON round-trip; doubles survive bit-exactly.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& document);

/// Which classifier to train plus its hyperparameters.
struct ClassifierConfig {
    ModelKind kind = ModelKind::random_forest;
    ForestConfig forest;
    PnnConfig pnn;
};

TrainedModel train_classifier(const LabeledDataset& dataset, const ClassifierConfig& config);

} // namespace smellpred
