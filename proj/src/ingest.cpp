#include "smellpred/ingest.hpp"

#include <charconv>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "smellpred/error.hpp"
#include "smellpred/paths.hpp"
#include "smellpred/text.hpp"

namespace smellpred {

namespace {

bool is_blank(std::string_view line) { return trim(line).empty(); }

} // namespace

FileMetricTable parse_file_metrics(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t line_no = 0;
    std::size_t header_line = 0;
    std::vector<std::string_view> header;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!is_blank(lines[i])) {
            header = split(lines[i], ',');
            header_line = i + 1;
            break;
        }
    }
    if (header.empty()) {
        raise(errc::missing_column, "empty input, no header row");
    }

    FileMetricTable table;
    std::size_t path_column = static_cast<std::size_t>(-1);
    bool has_loc = false;
    std::vector<std::size_t> metric_columns;
    std::unordered_set<std::string> seen_names; // case-folded, duplicates are ambiguous
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name(trim(header[c]));
        if (name.empty()) {
            raise(errc::missing_column, "empty column name in header", header_line);
        }
        if (!seen_names.insert(ascii_lower(name)).second) {
            raise(errc::duplicate_column, "column '" + name + "' appears twice", header_line);
        }
        if (name == "file_path") {
            path_column = c;
        } else {
            if (name == "loc") {
                has_loc = true;
                table.loc_index = table.metric_names.size();
            }
            table.metric_names.push_back(name);
            metric_columns.push_back(c);
        }
    }
    if (path_column == static_cast<std::size_t>(-1)) {
        raise(errc::missing_column, "header lacks mandatory column 'file_path'", header_line);
    }
    if (!has_loc) {
        raise(errc::missing_column, "header lacks mandatory column 'loc'", header_line);
    }

    std::unordered_set<std::string> seen_paths;
    for (line_no = header_line; line_no < lines.size(); ++line_no) {
        std::string_view line = lines[line_no];
        if (is_blank(line)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) {
            raise(errc::ragged_row,
                  "row has " + std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()),
                  line_no + 1);
        }
        FileMetricRecord record;
        record.file_path = normalize_path(trim(cells[path_column]));
        if (record.file_path.empty()) {
            raise(errc::invalid_value, "empty file_path", line_no + 1);
        }
        if (!seen_paths.insert(path_key(record.file_path)).second) {
            raise(errc::duplicate_file, "duplicate file_path '" + record.file_path + "'",
                  line_no + 1);
        }
        record.values.reserve(metric_columns.size());
        for (std::size_t m = 0; m < metric_columns.size(); ++m) {
            const auto value = parse_double(cells[metric_columns[m]]);
            if (!value) {
                raise(errc::non_numeric_value,
                      "cell '" + std::string(trim(cells[metric_columns[m]])) + "' in column '" +
                          table.metric_names[m] + "' is not a finite real",
                      line_no + 1);
            }
            record.values.push_back(*value);
        }
        if (record.values[table.loc_index] < 0) {
            raise(errc::invalid_value, "negative loc for '" + record.file_path + "'", line_no + 1);
        }
        table.records.push_back(std::move(record));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Minimal XML reader for the fixed warnings schema. Supports a prolog,
// comments, elements with double-quoted attributes and the five standard
// entities. Text content between tags must be whitespace.

namespace {

class XmlCursor {
public:
    explicit XmlCursor(std::string_view text) : text_(text) {}

    struct Attribute {
        std::string name;
        std::string value;
    };

    struct OpenTag {
        std::string name;
        std::vector<Attribute> attributes;
        bool self_closing = false;
    };

    void skip_prolog_and_misc() {
        skip_ws_and_comments();
        if (remaining().substr(0, 5) == "<?xml") {
            const std::size_t end = text_.find("?>", pos_);
            if (end == std::string_view::npos) fail("unterminated XML prolog");
            advance_to(end + 2);
        }
        skip_ws_and_comments();
    }

    // Returns the next open tag, or nullopt when a close tag for
    // `enclosing` is next (which is then consumed).
    std::optional<OpenTag> next_child(std::string_view enclosing) {
        skip_ws_and_comments();
        if (at_end()) fail("unexpected end of document inside <" + std::string(enclosing) + ">");
        if (peek() != '<') fail("unexpected text content");
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
            advance_to(pos_ + 2);
            const std::string name = read_name();
            skip_ws();
            expect('>');
            if (name != enclosing) {
                fail("mismatched close tag </" + name + ">, expected </" +
                     std::string(enclosing) + ">");
            }
            return std::nullopt;
        }
        return read_open_tag();
    }

    OpenTag read_open_tag() {
        skip_ws_and_comments();
        expect('<');
        OpenTag tag;
        tag.name = read_name();
        while (true) {
            skip_ws();
            if (at_end()) fail("unterminated tag <" + tag.name + ">");
            if (peek() == '/') {
                advance_to(pos_ + 1);
                expect('>');
                tag.self_closing = true;
                return tag;
            }
            if (peek() == '>') {
                advance_to(pos_ + 1);
                return tag;
            }
            Attribute attribute;
            attribute.name = read_name();
            skip_ws();
            expect('=');
            skip_ws();
            expect('"');
            attribute.value = read_attribute_value();
            tag.attributes.push_back(std::move(attribute));
        }
    }

    void expect_document_end() {
        skip_ws_and_comments();
        if (!at_end()) fail("trailing content after root element");
    }

    [[noreturn]] void fail(const std::string& message) const {
        raise(errc::malformed_document, message, line_);
    }

    std::size_t line() const { return line_; }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    std::string_view remaining() const { return text_.substr(pos_); }

    void advance_to(std::size_t new_pos) {
        for (std::size_t i = pos_; i < new_pos && i < text_.size(); ++i) {
            if (text_[i] == '\n') ++line_;
        }
        pos_ = new_pos;
    }

    void skip_ws() {
        std::size_t i = pos_;
        while (i < text_.size() && (text_[i] == ' ' || text_[i] == '\t' || text_[i] == '\n' ||
                                    text_[i] == '\r')) {
            ++i;
        }
        advance_to(i);
    }

    void skip_ws_and_comments() {
        while (true) {
            skip_ws();
            if (remaining().substr(0, 4) == "<!--") {
                const std::size_t end = text_.find("-->", pos_ + 4);
                if (end == std::string_view::npos) fail("unterminated comment");
                advance_to(end + 3);
                continue;
            }
            break;
        }
    }

    void expect(char c) {
        if (at_end() || peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        advance_to(pos_ + 1);
    }

    static bool is_name_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-' || c == '.' || c == ':';
    }

    std::string read_name() {
        std::size_t i = pos_;
        while (i < text_.size() && is_name_char(text_[i])) ++i;
        if (i == pos_) fail("expected a name");
        std::string name(text_.substr(pos_, i - pos_));
        advance_to(i);
        return name;
    }

    std::string read_attribute_value() {
        std::string value;
        while (true) {
            if (at_end()) fail("unterminated attribute value");
            const char c = peek();
            if (c == '"') {
                advance_to(pos_ + 1);
                return value;
            }
            if (c == '&') {
                const std::size_t semi = text_.find(';', pos_);
                if (semi == std::string_view::npos) fail("unterminated entity");
                const std::string_view entity = text_.substr(pos_ + 1, semi - pos_ - 1);
                if (entity == "amp") value += '&';
                else if (entity == "lt") value += '<';
                else if (entity == "gt") value += '>';
                else if (entity == "quot") value += '"';
                else if (entity == "apos") value += '\'';
                else fail("unsupported entity '&" + std::string(entity) + ";'");
                advance_to(semi + 1);
                continue;
            }
            if (c == '<') fail("'<' inside attribute value");
            value += c;
            advance_to(pos_ + 1);
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

const std::string* find_attribute(const XmlCursor::OpenTag& tag, std::string_view name) {
    for (const auto& attribute : tag.attributes) {
        if (attribute.name == name) return &attribute.value;
    }
    return nullptr;
}

std::int64_t parse_count(const std::string& text, XmlCursor& cursor) {
    const std::string_view trimmed = trim(text);
    if (!trimmed.empty() && trimmed[0] == '-') {
        raise(errc::negative_count, "Count '" + text + "' is negative", cursor.line());
    }
    std::int64_t value = 0;
    const char* first = trimmed.data();
    const char* last = trimmed.data() + trimmed.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc{} || result.ptr != last) {
        cursor.fail("Count '" + text + "' is not a base-10 nonnegative integer");
    }
    return value;
}

void consume_empty_element(XmlCursor& cursor, const XmlCursor::OpenTag& tag) {
    if (tag.self_closing) return;
    if (cursor.next_child(tag.name).has_value()) {
        cursor.fail("<" + tag.name + "> must be empty");
    }
}

} // namespace

std::vector<ClassWarningRecord> parse_class_warnings(std::string_view text) {
    XmlCursor cursor(text);
    cursor.skip_prolog_and_misc();
    const auto root = cursor.read_open_tag();
    if (root.name != "Targets") {
        cursor.fail("root element must be <Targets>, found <" + root.name + ">");
    }

    std::vector<ClassWarningRecord> records;
    std::unordered_set<std::string> seen;
    if (!root.self_closing) {
        while (auto target = cursor.next_child("Targets")) {
            if (target->name != "Target") {
                cursor.fail("expected <Target>, found <" + target->name + ">");
            }
            const std::string* target_name = find_attribute(*target, "Name");
            if (!target_name) cursor.fail("<Target> lacks Name attribute");
            const std::string file_path = normalize_path(*target_name);
            if (file_path.empty()) cursor.fail("<Target> has empty Name");
            if (target->self_closing) continue;

            while (auto cls = cursor.next_child("Target")) {
                if (cls->name != "Class") {
                    cursor.fail("expected <Class>, found <" + cls->name + ">");
                }
                const std::string* class_name = find_attribute(*cls, "Name");
                if (!class_name || class_name->empty()) {
                    cursor.fail("<Class> lacks a non-empty Name attribute");
                }
                ClassWarningRecord record;
                record.file_path = file_path;
                record.class_name = *class_name;
                if (!seen.insert(path_key(file_path) + "\x1f" + *class_name).second) {
                    cursor.fail("duplicate class '" + *class_name + "' for '" + file_path + "'");
                }
                if (!cls->self_closing) {
                    while (auto issue = cursor.next_child("Class")) {
                        if (issue->name != "Issue") {
                            cursor.fail("expected <Issue>, found <" + issue->name + ">");
                        }
                        const std::string* category_name = find_attribute(*issue, "Category");
                        const std::string* count_text = find_attribute(*issue, "Count");
                        if (!category_name || !count_text) {
                            cursor.fail("<Issue> needs Category and Count attributes");
                        }
                        const auto category = warning_category_from_name(*category_name);
                        if (!category) {
                            raise(errc::unknown_category,
                                  "category '" + *category_name + "' is not one of the 11 known categories",
                                  cursor.line());
                        }
                        record.counts[static_cast<std::size_t>(*category)] +=
                            parse_count(*count_text, cursor);
                        consume_empty_element(cursor, *issue);
                    }
                }
                records.push_back(std::move(record));
            }
        }
    }
    cursor.expect_document_end();
    return records;
}

std::vector<ChangeRecord> parse_change_log(std::string_view text) {
    std::vector<ChangeRecord> records;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (is_blank(lines[i])) continue;
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception& e) {
            raise(errc::malformed_line, std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!object.is_object()) {
            raise(errc::malformed_line, "line is not a JSON object", line_no);
        }
        ChangeRecord record;
        if (!object.contains("commit") || !object["commit"].is_string() ||
            object["commit"].get<std::string>().empty()) {
            raise(errc::malformed_line, "missing or empty string field 'commit'", line_no);
        }
        record.change_id = object["commit"].get<std::string>();
        if (!object.contains("message") || !object["message"].is_string()) {
            raise(errc::malformed_line, "missing string field 'message'", line_no);
        }
        record.message = object["message"].get<std::string>();
        if (!object.contains("files") || !object["files"].is_array()) {
            raise(errc::malformed_line, "missing array field 'files'", line_no);
        }
        for (const auto& entry : object["files"]) {
            if (!entry.is_string()) {
                raise(errc::malformed_line, "'files' entries must be strings", line_no);
            }
            record.files.push_back(normalize_path(entry.get<std::string>()));
        }
        records.push_back(std::move(record));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Writers

namespace {

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string write_file_metrics_csv(const FileMetricTable& table) {
    std::string out = "file_path";
    for (const auto& name : table.metric_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (const auto& record : table.records) {
        out += record.file_path;
        for (double value : record.values) {
            out += ',';
            out += format_double(value);
        }
        out += '\n';
    }
    return out;
}

std::string write_class_warnings_xml(const std::vector<ClassWarningRecord>& records) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<Targets>\n";
    // Group consecutive records per file, first appearance order.
    std::vector<std::pair<std::string, std::vector<const ClassWarningRecord*>>> groups;
    for (const auto& record : records) {
        const std::string key = path_key(record.file_path);
        if (groups.empty() || groups.back().first != key) {
            bool appended = false;
            for (auto& group : groups) {
                if (group.first == key) {
                    group.second.push_back(&record);
                    appended = true;
                    break;
                }
            }
            if (!appended) groups.push_back({key, {&record}});
        } else {
            groups.back().second.push_back(&record);
        }
    }
    for (const auto& [key, members] : groups) {
        out += "  <Target Name=\"" + xml_escape(members.front()->file_path) + "\">\n";
        for (const ClassWarningRecord* record : members) {
            out += "    <Class Name=\"" + xml_escape(record->class_name) + "\">\n";
            for (std::size_t c = 0; c < kWarningCategoryCount; ++c) {
                if (record->counts[c] == 0) continue;
                out += "      <Issue Category=\"";
                out += warning_category_names()[c];
                out += "\" Count=\"" + std::to_string(record->counts[c]) + "\"/>\n";
            }
            out += "    </Class>\n";
        }
        out += "  </Target>\n";
    }
    out += "</Targets>\n";
    return out;
}

std::string write_change_log_jsonl(const std::vector<ChangeRecord>& records) {
    std::string out;
    for (const auto& record : records) {
        nlohmann::json object;
        object["commit"] = record.change_id;
        object["message"] = record.message;
        object["files"] = record.files;
        out += object.dump();
        out += '\n';
    }
    return out;
}

bool operator==(const FileMetricRecord& a, const FileMetricRecord& b) {
    return a.file_path == b.file_path && a.values == b.values;
}

bool operator==(const FileMetricTable& a, const FileMetricTable& b) {
    return a.metric_names == b.metric_names && a.loc_index == b.loc_index && a.records == b.records;
}

bool operator==(const ClassWarningRecord& a, const ClassWarningRecord& b) {
    return a.file_path == b.file_path && a.class_name == b.class_name && a.counts == b.counts;
}

bool operator==(const ChangeRecord& a, const ChangeRecord& b) {
    return a.change_id == b.change_id && a.message == b.message && a.files == b.files;
}

} // namespace smellpred
