#pragma once

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>

namespace smellpred {

/// Machine-checkable failure categories used across the pipeline.
enum class errc {
    // ingest
    missing_column,
    duplicate_column,
    non_numeric_value,
    invalid_value,
    duplicate_file,
    ragged_row,
    unknown_category,
    malformed_document,
    negative_count,
    malformed_line,
    // dataset building
    invalid_glob,
    empty_join,
    too_many_partitions,
    invalid_spec,
    invalid_pattern,
    invalid_dataset,
    // balancing / selection / classification / evaluation
    too_few_minority,
    degenerate_split,
    single_class_training,
    schema_mismatch,
    single_class,
    unknown_metric,
    unknown_feature,
    invalid_model,
    // configuration / io
    invalid_config,
    io_failure,
};

const char* errc_name(errc code);

inline std::ostream& operator<<(std::ostream& os, errc code) { return os << errc_name(code); }

/// Exception carrying an errc plus a human-readable message. `line` is the
/// 1-based input line for errors tied to a specific line, 0 otherwise.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message, std::size_t line = 0);

    errc code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    errc code_;
    std::size_t line_;
};

[[noreturn]] void raise(errc code, const std::string& message, std::size_t line = 0);

} // namespace smellpred
