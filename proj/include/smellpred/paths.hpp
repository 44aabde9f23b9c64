#pragma once

#include <string>
#include <string_view>

namespace smellpred {

/// Normalizes a relative path: backslashes become forward slashes, "." and
/// empty segments are dropped. Idempotent. ".." segments are kept as-is.
std::string normalize_path(std::string_view path);

/// Case-folded normalized path, the key used for joining and duplicate
/// detection. The studied platforms treat paths case-insensitively.
std::string path_key(std::string_view path);

/// First segment of an already-normalized path, or "" for bare file names.
std::string_view top_level_dir(std::string_view normalized_path);

/// ASCII lowercase copy.
std::string ascii_lower(std::string_view text);

} // namespace smellpred
