#pragma once

#include <regex>
#include <string>
#include <string_view>

namespace smellpred {

/// Compiled path glob. `*` matches within one segment, `**` crosses
/// segments, `?` matches one non-separator character, `[...]` / `[!...]`
/// are character classes. Backslashes in the pattern are treated as path
/// separators. Matching is case-insensitive, like path comparison.
class PathGlob {
public:
    explicit PathGlob(std::string_view pattern); // throws InvalidGlob

    bool matches(std::string_view normalized_path) const;
    const std::string& pattern() const { return pattern_; }

private:
    std::string pattern_;
    std::regex regex_;
};

} // namespace smellpred
