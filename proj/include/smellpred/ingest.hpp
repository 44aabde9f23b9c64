#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smellpred/types.hpp"

namespace smellpred {

/// Parses the per-file metrics CSV. First row is the header and must contain
/// `file_path` and `loc`; every other column becomes a metric in header
/// order ("loc" included). Cells are plain (unquoted) and must parse as
/// finite reals; `loc` must be nonnegative. Blank lines are skipped.
///
/// Errors: MissingColumn, DuplicateColumn, NonNumericValue, InvalidValue,
/// DuplicateFile, RaggedRow.
FileMetricTable parse_file_metrics(std::string_view text);

/// Parses the per-class warnings XML:
///   <Targets><Target Name="PATH"><Class Name="NAME">
///     <Issue Category="CAT" Count="N"/> ...
/// Categories outside the closed 11-name set are rejected. Absent categories
/// default to zero; repeated Issue elements for one category accumulate.
///
/// Errors: UnknownCategory, MalformedDocument, NegativeCount.
std::vector<ClassWarningRecord> parse_class_warnings(std::string_view text);

/// Parses the change log (JSON Lines): one object per line with string
/// `commit`, string `message` and array-of-strings `files`. Blank lines are
/// skipped; anything else malformed reports its 1-based line number.
///
/// Errors: MalformedLine.
std::vector<ChangeRecord> parse_change_log(std::string_view text);

// Writers for the same three formats. Round-trip: parse(write(x)) == x for
// already-normalized records.
std::string write_file_metrics_csv(const FileMetricTable& table);
std::string write_class_warnings_xml(const std::vector<ClassWarningRecord>& records);
std::string write_change_log_jsonl(const std::vector<ChangeRecord>& records);

bool operator==(const FileMetricRecord& a, const FileMetricRecord& b);
bool operator==(const FileMetricTable& a, const FileMetricTable& b);
bool operator==(const ClassWarningRecord& a, const ClassWarningRecord& b);
bool operator==(const ChangeRecord& a, const ChangeRecord& b);

} // namespace smellpred
