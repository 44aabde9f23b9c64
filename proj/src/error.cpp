#include "smellpred/error.hpp"

namespace smellpred {

const char* errc_name(errc code) {
    switch (code) {
        case errc::missing_column: return "MissingColumn";
        case errc::duplicate_column: return "DuplicateColumn";
        case errc::non_numeric_value: return "NonNumericValue";
        case errc::invalid_value: return "InvalidValue";
        case errc::duplicate_file: return "DuplicateFile";
        case errc::ragged_row: return "RaggedRow";
        case errc::unknown_category: return "UnknownCategory";
        case errc::malformed_document: return "MalformedDocument";
        case errc::negative_count: return "NegativeCount";
        case errc::malformed_line: return "MalformedLine";
        case errc::invalid_glob: return "InvalidGlob";
        case errc::empty_join: return "EmptyJoin";
        case errc::too_many_partitions: return "TooManyPartitions";
        case errc::invalid_spec: return "InvalidSpec";
        case errc::invalid_pattern: return "InvalidPattern";
        case errc::invalid_dataset: return "InvalidDataset";
        case errc::too_few_minority: return "TooFewMinority";
        case errc::degenerate_split: return "DegenerateSplit";
        case errc::single_class_training: return "SingleClassTraining";
        case errc::schema_mismatch: return "SchemaMismatch";
        case errc::single_class: return "SingleClass";
        case errc::unknown_metric: return "UnknownMetric";
        case errc::unknown_feature: return "UnknownFeature";
        case errc::invalid_model: return "InvalidModel";
        case errc::invalid_config: return "InvalidConfig";
        case errc::io_failure: return "IoFailure";
    }
    return "UnknownError";
}

namespace {

std::string format_message(errc code, const std::string& message, std::size_t line) {
    std::string out = errc_name(code);
    out += ": ";
    out += message;
    if (line > 0) {
        out += " (line ";
        out += std::to_string(line);
        out += ")";
    }
    return out;
}

} // namespace

Error::Error(errc code, const std::string& message, std::size_t line)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line) {}

void raise(errc code, const std::string& message, std::size_t line) {
    throw Error(code, message, line);
}

} // namespace smellpred
