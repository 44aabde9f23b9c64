#include "smellpred/glob.hpp"

#include "smellpred/error.hpp"
#include "smellpred/paths.hpp"

namespace smellpred {

namespace {

bool is_regex_special(char c) {
    switch (c) {
        case '.': case '^': case '$': case '+': case '(': case ')':
        case '{': case '}': case '|': case '\\': case '*': case '?':
        case '[': case ']':
            return true;
        default:
            return false;
    }
}

std::string glob_to_regex(std::string_view glob) {
    std::string out;
    out.reserve(glob.size() * 2);
    const std::size_t n = glob.size();
    std::size_t i = 0;
    while (i < n) {
        const char c = glob[i];
        if (c == '*') {
            if (i + 1 < n && glob[i + 1] == '*') {
                const bool at_segment_start = (i == 0) || glob[i - 1] == '/';
                if (at_segment_start && i + 2 < n && glob[i + 2] == '/') {
                    out += "(?:.*/)?"; // "**/" also matches zero directories
                    i += 3;
                    continue;
                }
                out += ".*";
                i += 2;
                continue;
            }
            out += "[^/]*";
            ++i;
            continue;
        }
        if (c == '?') {
            out += "[^/]";
            ++i;
            continue;
        }
        if (c == '[') {
            const std::size_t close = glob.find(']', i + 1);
            if (close == std::string_view::npos) {
                raise(errc::invalid_glob, "unterminated character class in '" + std::string(glob) + "'");
            }
            std::string_view body = glob.substr(i + 1, close - i - 1);
            out += '[';
            if (!body.empty() && (body[0] == '!' || body[0] == '^')) {
                out += '^';
                body.remove_prefix(1);
            }
            for (char b : body) {
                if (b == '\\' || b == '[') out += '\\';
                out += b;
            }
            out += ']';
            i = close + 1;
            continue;
        }
        if (is_regex_special(c)) out += '\\';
        out += c;
        ++i;
    }
    return out;
}

} // namespace

PathGlob::PathGlob(std::string_view pattern) : pattern_(pattern) {
    // Backslashes are separators here, not escapes; normalize like a path
    // but keep ".." and "." segments available for literal matching.
    std::string normalized(pattern);
    for (char& c : normalized) {
        if (c == '\\') c = '/';
    }
    try {
        regex_ = std::regex(glob_to_regex(normalized),
                            std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
        raise(errc::invalid_glob, "cannot compile glob '" + pattern_ + "': " + e.what());
    }
}

bool PathGlob::matches(std::string_view normalized_path) const {
    return std::regex_match(normalized_path.begin(), normalized_path.end(), regex_);
}

} // namespace smellpred
