#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smellpred/types.hpp"

namespace smellpred {

struct SmoteConfig {
    std::size_t k_neighbors = 5;
    double target_ratio = 1.0; // minority/majority after balancing, in (0, 1]
    std::uint64_t seed = 0;
};

struct SmoteResult {
    LabeledDataset dataset;
    std::size_t synthetic_count = 0;
    std::size_t effective_k = 0;
    bool k_clamped = false;
    std::vector<std::string> warnings;
};

/// Synthetic minority oversampling. Original records are preserved verbatim
/// and in order; synthetic records are appended until minority/majority
/// reaches the target ratio. Each synthetic point is x + u*(x_nn - x) with
/// u in [0,1), x an original minority record (bases cycle round-robin) and
/// x_nn one of its k nearest original minority neighbors. Neighbor search
/// uses Euclidean distance on features standardized over the minority
/// records; interpolation happens on raw features. k is clamped to
/// minority-1 with a warning when the minority is small.
///
/// Errors: TooFewMinority (fewer than two minority records), InvalidConfig.
SmoteResult smote(const LabeledDataset& dataset, const SmoteConfig& config);

} // namespace smellpred
