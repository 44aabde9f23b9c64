#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smellpred {

/// Standalone SVG scatter plot: one circle marker per point, labeled axes
/// with ticks. Output is deterministic for identical inputs.
std::string scatter_plot_svg(const std::vector<std::pair<double, double>>& points,
                             std::string_view x_label, std::string_view y_label,
                             std::string_view title = {});

} // namespace smellpred
