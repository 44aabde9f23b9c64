#include "smellpred/paths.hpp"

#include <cctype>

namespace smellpred {

std::string normalize_path(std::string_view path) {
    std::string out;
    out.reserve(path.size());
    std::size_t i = 0;
    const std::size_t n = path.size();
    while (i < n) {
        std::size_t j = i;
        while (j < n && path[j] != '/' && path[j] != '\\') ++j;
        std::string_view segment = path.substr(i, j - i);
        if (!segment.empty() && segment != ".") {
            if (!out.empty()) out += '/';
            out += segment;
        }
        i = j + 1;
    }
    return out;
}

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string path_key(std::string_view path) { return ascii_lower(normalize_path(path)); }

std::string_view top_level_dir(std::string_view normalized_path) {
    const std::size_t slash = normalized_path.find('/');
    if (slash == std::string_view::npos) return {};
    return normalized_path.substr(0, slash);
}

} // namespace smellpred
