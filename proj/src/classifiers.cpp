#include "smellpred/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smellpred/error.hpp"
#include "smellpred/paths.hpp"
#include "smellpred/rng.hpp"

namespace smellpred {

namespace {

constexpr double kVarianceFloor = 1e-9;

std::size_t label_index(Label label) { return label == Label::defect_prone ? 1 : 0; }

/// Record pointers in canonical (case-folded path) order, which makes
/// training independent of the input record order.
std::vector<const DatasetRecord*> canonical_order(const LabeledDataset& dataset) {
    std::vector<std::pair<std::string, const DatasetRecord*>> keyed;
    keyed.reserve(dataset.records.size());
    for (const auto& record : dataset.records) {
        keyed.emplace_back(path_key(record.file_path), &record);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first < b.first;
    });
    std::vector<const DatasetRecord*> out;
    out.reserve(keyed.size());
    for (auto& [key, record] : keyed) out.push_back(record);
    return out;
}

void require_both_classes(const LabeledDataset& dataset, const char* who) {
    const std::size_t defect = dataset.count(Label::defect_prone);
    if (defect == 0 || defect == dataset.records.size()) {
        raise(errc::single_class_training,
              std::string(who) + " needs both classes in the training data");
    }
}

} // namespace

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::naive_bayes: return "naive_bayes";
        case ModelKind::pnn: return "pnn";
        case ModelKind::random_forest: return "random_forest";
    }
    return "naive_bayes";
}

std::optional<ModelKind> model_kind_from_name(std::string_view name) {
    if (name == "naive_bayes") return ModelKind::naive_bayes;
    if (name == "pnn") return ModelKind::pnn;
    if (name == "random_forest") return ModelKind::random_forest;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Naive Bayes

TrainedModel train_naive_bayes(const LabeledDataset& dataset) {
    require_both_classes(dataset, "naive Bayes");
    const auto ordered = canonical_order(dataset);
    const std::size_t dim = dataset.feature_names.size();

    std::array<std::size_t, 2> counts{};
    for (const auto* record : ordered) ++counts[label_index(record->label)];
    if (counts[0] < 2 || counts[1] < 2) {
        raise(errc::single_class_training, "naive Bayes needs at least two records per class");
    }

    NaiveBayesParams params;
    for (std::size_t c = 0; c < 2; ++c) {
        params.log_prior[c] = std::log(static_cast<double>(counts[c]) /
                                       static_cast<double>(ordered.size()));
        params.means[c].assign(dim, 0.0);
        params.variances[c].assign(dim, 0.0);
    }
    for (const auto* record : ordered) {
        auto& mean = params.means[label_index(record->label)];
        for (std::size_t f = 0; f < dim; ++f) mean[f] += record->features[f];
    }
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t f = 0; f < dim; ++f) {
            params.means[c][f] /= static_cast<double>(counts[c]);
        }
    }
    for (const auto* record : ordered) {
        const std::size_t c = label_index(record->label);
        for (std::size_t f = 0; f < dim; ++f) {
            const double d = record->features[f] - params.means[c][f];
            params.variances[c][f] += d * d;
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t f = 0; f < dim; ++f) {
            params.variances[c][f] =
                std::max(params.variances[c][f] / static_cast<double>(counts[c]), kVarianceFloor);
        }
    }

    TrainedModel model;
    model.kind = ModelKind::naive_bayes;
    model.feature_names = dataset.feature_names;
    model.params = std::move(params);
    return model;
}

namespace {

Label predict_naive_bayes(const NaiveBayesParams& params, const std::vector<double>& x) {
    std::array<double, 2> log_posterior = params.log_prior;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t f = 0; f < x.size(); ++f) {
            const double var = params.variances[c][f];
            const double d = x[f] - params.means[c][f];
            log_posterior[c] += -0.5 * std::log(2.0 * M_PI * var) - (d * d) / (2.0 * var);
        }
    }
    return log_posterior[1] > log_posterior[0] ? Label::defect_prone : Label::clean;
}

} // namespace

// ---------------------------------------------------------------------------
// Probabilistic neural network (Parzen window)

TrainedModel train_pnn(const LabeledDataset& dataset, const PnnConfig& config) {
    if (!(config.bandwidth > 0.0)) {
        raise(errc::invalid_config, "PNN bandwidth must be positive");
    }
    require_both_classes(dataset, "PNN");
    const auto ordered = canonical_order(dataset);
    const std::size_t dim = dataset.feature_names.size();

    PnnParams params;
    params.bandwidth = config.bandwidth;
    params.standardize = config.standardize;
    params.feature_means.assign(dim, 0.0);
    params.feature_inv_sds.assign(dim, 1.0);
    if (config.standardize) {
        for (const auto* record : ordered) {
            for (std::size_t f = 0; f < dim; ++f) params.feature_means[f] += record->features[f];
        }
        for (std::size_t f = 0; f < dim; ++f) {
            params.feature_means[f] /= static_cast<double>(ordered.size());
        }
        std::vector<double> variance(dim, 0.0);
        for (const auto* record : ordered) {
            for (std::size_t f = 0; f < dim; ++f) {
                const double d = record->features[f] - params.feature_means[f];
                variance[f] += d * d;
            }
        }
        for (std::size_t f = 0; f < dim; ++f) {
            const double sd = std::sqrt(variance[f] / static_cast<double>(ordered.size()));
            params.feature_inv_sds[f] = sd > 1e-12 ? 1.0 / sd : 0.0;
        }
    } else {
        params.feature_means.assign(dim, 0.0);
        params.feature_inv_sds.assign(dim, 1.0);
    }

    for (const auto* record : ordered) {
        std::vector<double> z(dim);
        for (std::size_t f = 0; f < dim; ++f) {
            z[f] = (record->features[f] - params.feature_means[f]) * params.feature_inv_sds[f];
        }
        params.class_points[label_index(record->label)].push_back(std::move(z));
    }

    TrainedModel model;
    model.kind = ModelKind::pnn;
    model.feature_names = dataset.feature_names;
    model.params = std::move(params);
    return model;
}

namespace {

Label predict_pnn(const PnnParams& params, const std::vector<double>& x) {
    const std::size_t dim = x.size();
    std::vector<double> z(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        z[f] = (x[f] - params.feature_means[f]) * params.feature_inv_sds[f];
    }
    const double denom = 2.0 * params.bandwidth * params.bandwidth;

    // Class score = log((1/n_c) * sum_i exp(-d_i^2 / (2 h^2))), evaluated via
    // log-sum-exp so that tiny bandwidths degrade to nearest-neighbor instead
    // of underflowing to a tie.
    std::array<double, 2> score{};
    std::vector<double> exponents;
    for (std::size_t c = 0; c < 2; ++c) {
        exponents.clear();
        for (const auto& point : params.class_points[c]) {
            double d2 = 0.0;
            for (std::size_t f = 0; f < dim; ++f) {
                const double d = z[f] - point[f];
                d2 += d * d;
            }
            exponents.push_back(-d2 / denom);
        }
        const double peak = *std::max_element(exponents.begin(), exponents.end());
        double sum = 0.0;
        for (double e : exponents) sum += std::exp(e - peak);
        score[c] = peak + std::log(sum) - std::log(static_cast<double>(exponents.size()));
    }
    return score[1] > score[0] ? Label::defect_prone : Label::clean;
}

} // namespace

// ---------------------------------------------------------------------------
// Random forest

Label DecisionTree::predict(const std::vector<double>& features) const {
    std::size_t index = 0;
    while (!nodes[index].is_leaf) {
        const TreeNode& node = nodes[index];
        index = features[node.feature] <= node.threshold
                    ? static_cast<std::size_t>(node.left)
                    : static_cast<std::size_t>(node.right);
    }
    return nodes[index].leaf;
}

namespace {

struct SplitChoice {
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

double gini_of(std::size_t positives, std::size_t total) {
    if (total == 0) return 0.0;
    const double p1 = static_cast<double>(positives) / static_cast<double>(total);
    const double p0 = 1.0 - p1;
    return 1.0 - p0 * p0 - p1 * p1;
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<const DatasetRecord*>& records, std::size_t n_features,
                const ForestConfig& config, Rng& rng)
        : records_(records), n_features_(n_features), config_(config), rng_(rng) {}

    DecisionTree build(std::vector<std::size_t> indices) {
        tree_.nodes.clear();
        build_node(std::move(indices), 0);
        return std::move(tree_);
    }

private:
    std::int32_t build_node(std::vector<std::size_t> indices, std::size_t depth) {
        std::size_t positives = 0;
        for (std::size_t i : indices) {
            if (records_[i]->label == Label::defect_prone) ++positives;
        }
        const std::size_t total = indices.size();
        const bool pure = positives == 0 || positives == total;
        const bool depth_capped = config_.max_depth > 0 && depth >= config_.max_depth;

        std::optional<SplitChoice> split;
        if (!pure && !depth_capped && total >= config_.min_split && n_features_ > 0) {
            split = choose_split(indices);
        }
        if (!split) {
            return add_leaf(positives, total);
        }

        std::vector<std::size_t> left, right;
        left.reserve(total);
        right.reserve(total);
        for (std::size_t i : indices) {
            (records_[i]->features[split->feature] <= split->threshold ? left : right).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        const auto id = static_cast<std::int32_t>(tree_.nodes.size());
        TreeNode node;
        node.is_leaf = false;
        node.feature = split->feature;
        node.threshold = split->threshold;
        tree_.nodes.push_back(node);
        const std::int32_t left_id = build_node(std::move(left), depth + 1);
        const std::int32_t right_id = build_node(std::move(right), depth + 1);
        tree_.nodes[id].left = left_id;
        tree_.nodes[id].right = right_id;
        return id;
    }

    std::int32_t add_leaf(std::size_t positives, std::size_t total) {
        TreeNode node;
        node.is_leaf = true;
        node.leaf = positives * 2 > total ? Label::defect_prone : Label::clean;
        tree_.nodes.push_back(node);
        return static_cast<std::int32_t>(tree_.nodes.size() - 1);
    }

    std::optional<SplitChoice> choose_split(const std::vector<std::size_t>& indices) {
        std::size_t try_count = config_.features_per_split;
        if (try_count == 0) {
            try_count = static_cast<std::size_t>(
                std::floor(std::sqrt(static_cast<double>(n_features_))));
            if (try_count == 0) try_count = 1;
        }
        try_count = std::min(try_count, n_features_);

        std::vector<std::size_t> features(n_features_);
        std::iota(features.begin(), features.end(), 0);
        for (std::size_t i = 0; i < try_count; ++i) {
            const std::size_t j = i + rng_.uniform_int(n_features_ - i);
            std::swap(features[i], features[j]);
        }
        std::sort(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(try_count));
        std::sort(features.begin() + static_cast<std::ptrdiff_t>(try_count), features.end());

        // Search the sampled subset; fall back to the remaining features only
        // if the subset admits no split at all.
        if (auto best = best_split_among(indices, features, 0, try_count)) return best;
        return best_split_among(indices, features, try_count, n_features_);
    }

    std::optional<SplitChoice> best_split_among(const std::vector<std::size_t>& indices,
                                                const std::vector<std::size_t>& features,
                                                std::size_t from, std::size_t to) {
        std::optional<SplitChoice> best;
        std::vector<std::pair<double, Label>> column;
        const std::size_t total = indices.size();
        for (std::size_t fi = from; fi < to; ++fi) {
            const std::size_t feature = features[fi];
            column.clear();
            column.reserve(total);
            std::size_t total_positives = 0;
            for (std::size_t i : indices) {
                column.emplace_back(records_[i]->features[feature], records_[i]->label);
                if (records_[i]->label == Label::defect_prone) ++total_positives;
            }
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::size_t left_count = 0;
            std::size_t left_positives = 0;
            for (std::size_t i = 0; i + 1 < total; ++i) {
                ++left_count;
                if (column[i].second == Label::defect_prone) ++left_positives;
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t right_count = total - left_count;
                const double weighted =
                    (static_cast<double>(left_count) * gini_of(left_positives, left_count) +
                     static_cast<double>(right_count) *
                         gini_of(total_positives - left_positives, right_count)) /
                    static_cast<double>(total);
                if (!best || weighted < best->weighted_gini) {
                    best = SplitChoice{feature, (column[i].first + column[i + 1].first) / 2.0,
                                       weighted};
                }
            }
        }
        return best;
    }

    const std::vector<const DatasetRecord*>& records_;
    std::size_t n_features_;
    const ForestConfig& config_;
    Rng& rng_;
    DecisionTree tree_;
};

} // namespace

TrainedModel train_random_forest(const LabeledDataset& dataset, const ForestConfig& config) {
    if (config.n_trees == 0) raise(errc::invalid_config, "forest needs at least one tree");
    if (config.min_split < 2) raise(errc::invalid_config, "min_split must be at least 2");
    require_both_classes(dataset, "random forest");

    const auto ordered = canonical_order(dataset);
    const std::size_t n = ordered.size();
    const std::size_t dim = dataset.feature_names.size();

    ForestParams params;
    params.trees.reserve(config.n_trees);
    for (std::size_t t = 0; t < config.n_trees; ++t) {
        Rng rng(config.seed + t);
        std::vector<std::size_t> sample(n);
        if (config.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) sample[i] = rng.uniform_int(n);
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        TreeBuilder builder(ordered, dim, config, rng);
        params.trees.push_back(builder.build(std::move(sample)));
    }

    TrainedModel model;
    model.kind = ModelKind::random_forest;
    model.feature_names = dataset.feature_names;
    model.params = std::move(params);
    return model;
}

namespace {

Label predict_forest(const ForestParams& params, const std::vector<double>& x) {
    std::size_t defect_votes = 0;
    for (const auto& tree : params.trees) {
        if (tree.predict(x) == Label::defect_prone) ++defect_votes;
    }
    return defect_votes * 2 > params.trees.size() ? Label::defect_prone : Label::clean;
}

} // namespace

Label predict(const TrainedModel& model, const std::vector<double>& features) {
    if (features.size() != model.feature_names.size()) {
        raise(errc::schema_mismatch,
              "feature vector has " + std::to_string(features.size()) + " values, model expects " +
                  std::to_string(model.feature_names.size()));
    }
    switch (model.kind) {
        case ModelKind::naive_bayes:
            return predict_naive_bayes(std::get<NaiveBayesParams>(model.params), features);
        case ModelKind::pnn:
            return predict_pnn(std::get<PnnParams>(model.params), features);
        case ModelKind::random_forest:
            return predict_forest(std::get<ForestParams>(model.params), features);
    }
    raise(errc::invalid_model, "unknown model kind");
}

TrainedModel train_classifier(const LabeledDataset& dataset, const ClassifierConfig& config) {
    switch (config.kind) {
        case ModelKind::naive_bayes: return train_naive_bayes(dataset);
        case ModelKind::pnn: return train_pnn(dataset, config.pnn);
        case ModelKind::random_forest: return train_random_forest(dataset, config.forest);
    }
    raise(errc::invalid_config, "unknown classifier kind");
}

// ---------------------------------------------------------------------------
// JSON round-trip

namespace {

nlohmann::json tree_to_json(const DecisionTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : tree.nodes) {
        if (node.is_leaf) {
            nodes.push_back({{"leaf", std::string(label_name(node.leaf))}});
        } else {
            nodes.push_back({{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right}});
        }
    }
    return {{"nodes", std::move(nodes)}};
}

Label label_from_json(const nlohmann::json& value) {
    const auto text = value.get<std::string>();
    if (text == "clean") return Label::clean;
    if (text == "defect_prone") return Label::defect_prone;
    raise(errc::invalid_model, "unknown label '" + text + "'");
}

DecisionTree tree_from_json(const nlohmann::json& document, std::size_t n_features) {
    DecisionTree tree;
    const auto& nodes = document.at("nodes");
    for (const auto& entry : nodes) {
        TreeNode node;
        if (entry.contains("leaf")) {
            node.is_leaf = true;
            node.leaf = label_from_json(entry.at("leaf"));
        } else {
            node.is_leaf = false;
            node.feature = entry.at("feature").get<std::size_t>();
            node.threshold = entry.at("threshold").get<double>();
            node.left = entry.at("left").get<std::int32_t>();
            node.right = entry.at("right").get<std::int32_t>();
            if (node.feature >= n_features || node.left < 0 || node.right < 0 ||
                static_cast<std::size_t>(node.left) >= nodes.size() ||
                static_cast<std::size_t>(node.right) >= nodes.size()) {
                raise(errc::invalid_model, "tree node out of range");
            }
        }
        tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) raise(errc::invalid_model, "tree without nodes");
    return tree;
}

} // namespace

nlohmann::json model_to_json(const TrainedModel& model) {
    nlohmann::json document;
    document["format_version"] = 1;
    document["kind"] = std::string(model_kind_name(model.kind));
    document["feature_names"] = model.feature_names;
    nlohmann::json parameters;
    switch (model.kind) {
        case ModelKind::naive_bayes: {
            const auto& params = std::get<NaiveBayesParams>(model.params);
            parameters["log_prior"] = params.log_prior;
            parameters["means"] = params.means;
            parameters["variances"] = params.variances;
            break;
        }
        case ModelKind::pnn: {
            const auto& params = std::get<PnnParams>(model.params);
            parameters["bandwidth"] = params.bandwidth;
            parameters["standardize"] = params.standardize;
            parameters["feature_means"] = params.feature_means;
            parameters["feature_inv_sds"] = params.feature_inv_sds;
            parameters["points"] = params.class_points;
            break;
        }
        case ModelKind::random_forest: {
            const auto& params = std::get<ForestParams>(model.params);
            nlohmann::json trees = nlohmann::json::array();
            for (const auto& tree : params.trees) trees.push_back(tree_to_json(tree));
            parameters["trees"] = std::move(trees);
            break;
        }
    }
    document["parameters"] = std::move(parameters);
    return document;
}

TrainedModel model_from_json(const nlohmann::json& document) {
    try {
        if (document.at("format_version").get<int>() != 1) {
            raise(errc::invalid_model, "unsupported model format version");
        }
        TrainedModel model;
        const auto kind = model_kind_from_name(document.at("kind").get<std::string>());
        if (!kind) raise(errc::invalid_model, "unknown model kind");
        model.kind = *kind;
        model.feature_names = document.at("feature_names").get<std::vector<std::string>>();
        const auto& parameters = document.at("parameters");
        const std::size_t dim = model.feature_names.size();
        switch (model.kind) {
            case ModelKind::naive_bayes: {
                NaiveBayesParams params;
                params.log_prior = parameters.at("log_prior").get<std::array<double, 2>>();
                params.means =
                    parameters.at("means").get<std::array<std::vector<double>, 2>>();
                params.variances =
                    parameters.at("variances").get<std::array<std::vector<double>, 2>>();
                for (std::size_t c = 0; c < 2; ++c) {
                    if (params.means[c].size() != dim || params.variances[c].size() != dim) {
                        raise(errc::invalid_model, "parameter arrays do not match schema");
                    }
                }
                model.params = std::move(params);
                break;
            }
            case ModelKind::pnn: {
                PnnParams params;
                params.bandwidth = parameters.at("bandwidth").get<double>();
                params.standardize = parameters.at("standardize").get<bool>();
                params.feature_means = parameters.at("feature_means").get<std::vector<double>>();
                params.feature_inv_sds =
                    parameters.at("feature_inv_sds").get<std::vector<double>>();
                params.class_points =
                    parameters.at("points")
                        .get<std::array<std::vector<std::vector<double>>, 2>>();
                if (params.feature_means.size() != dim || params.feature_inv_sds.size() != dim) {
                    raise(errc::invalid_model, "parameter arrays do not match schema");
                }
                for (std::size_t c = 0; c < 2; ++c) {
                    if (params.class_points[c].empty()) {
                        raise(errc::invalid_model, "PNN class without stored points");
                    }
                    for (const auto& point : params.class_points[c]) {
                        if (point.size() != dim) {
                            raise(errc::invalid_model, "stored point does not match schema");
                        }
                    }
                }
                model.params = std::move(params);
                break;
            }
            case ModelKind::random_forest: {
                ForestParams params;
                for (const auto& tree : parameters.at("trees")) {
                    params.trees.push_back(tree_from_json(tree, dim));
                }
                if (params.trees.empty()) raise(errc::invalid_model, "forest without trees");
                model.params = std::move(params);
                break;
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        raise(errc::invalid_model, std::string("malformed model document: ") + e.what());
    }
}

} // namespace smellpred
