#include <doctest.h>

#include "smellpred/ingest.hpp"
#include "smellpred/rng.hpp"
#include "test_util.hpp"

using namespace smellpred;

TEST_CASE("parse_file_metrics: basic row") {
    const auto table = parse_file_metrics("file_path,loc,methods_per_class\na/File1.cs,100,3\n");
    REQUIRE(table.records.size() == 1);
    CHECK(table.metric_names == std::vector<std::string>{"loc", "methods_per_class"});
    CHECK(table.loc_index == 0);
    CHECK(table.records[0].file_path == "a/File1.cs");
    CHECK(table.loc_of(table.records[0]) == 100.0);
    CHECK(table.records[0].values == std::vector<double>{100.0, 3.0});
}

TEST_CASE("parse_file_metrics: metric order follows the header") {
    const auto table =
        parse_file_metrics("file_path,complexity,loc,depth\nx.cs,7,50,2\n");
    CHECK(table.metric_names == std::vector<std::string>{"complexity", "loc", "depth"});
    CHECK(table.loc_index == 1);
    CHECK(table.loc_of(table.records[0]) == 50.0);
}

TEST_CASE("parse_file_metrics: header only gives empty list") {
    CHECK(parse_file_metrics("file_path,loc\n").records.empty());
}

TEST_CASE("parse_file_metrics: errors") {
    CHECK_THROWS_CODE(parse_file_metrics("file_path,size\na.cs,1\n"), errc::missing_column);
    CHECK_THROWS_CODE(parse_file_metrics("loc,size\n1,2\n"), errc::missing_column);
    CHECK_THROWS_CODE(parse_file_metrics(""), errc::missing_column);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,xyz\n"), errc::non_numeric_value);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,nan\n"), errc::non_numeric_value);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,1\na.cs,2\n"), errc::duplicate_file);
    // case-insensitive duplicate
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,1\nA.CS,2\n"), errc::duplicate_file);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,1,9\n"), errc::ragged_row);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc,loc\na.cs,1,2\n"), errc::duplicate_column);
    CHECK_THROWS_CODE(parse_file_metrics("file_path,loc\na.cs,-5\n"), errc::invalid_value);
    // column names are exact: "LOC" is not the mandatory "loc"
    CHECK_THROWS_CODE(parse_file_metrics("file_path,size,LOC\na.cs,1,2\n"), errc::missing_column);
}

TEST_CASE("parse_file_metrics: error lines are 1-based") {
    try {
        parse_file_metrics("file_path,loc\na.cs,1\nb.cs,bad\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_numeric_value);
        CHECK(e.line() == 3);
    }
}

namespace {

const char* kWarningsDoc = R"(<?xml version="1.0" encoding="UTF-8"?>
<Targets>
  <Target Name="a/File1.cs">
    <Class Name="Class1">
      <Issue Category="Design" Count="3"/>
    </Class>
  </Target>
</Targets>
)";

} // namespace

TEST_CASE("parse_class_warnings: one class, absent categories default to zero") {
    const auto records = parse_class_warnings(kWarningsDoc);
    REQUIRE(records.size() == 1);
    CHECK(records[0].file_path == "a/File1.cs");
    CHECK(records[0].class_name == "Class1");
    CHECK(records[0].counts[static_cast<std::size_t>(WarningCategory::design)] == 3);
    std::int64_t total = 0;
    for (auto count : records[0].counts) total += count;
    CHECK(total == 3);
}

TEST_CASE("parse_class_warnings: empty Targets gives empty list") {
    CHECK(parse_class_warnings("<Targets></Targets>").empty());
    CHECK(parse_class_warnings("<Targets/>").empty());
}

TEST_CASE("parse_class_warnings: unknown category") {
    CHECK_THROWS_CODE(parse_class_warnings(R"(<Targets><Target Name="a.cs">
        <Class Name="C"><Issue Category="Velocity" Count="1"/></Class>
        </Target></Targets>)"),
                      errc::unknown_category);
}

TEST_CASE("parse_class_warnings: negative count") {
    CHECK_THROWS_CODE(parse_class_warnings(R"(<Targets><Target Name="a.cs">
        <Class Name="C"><Issue Category="Design" Count="-1"/></Class>
        </Target></Targets>)"),
                      errc::negative_count);
}

TEST_CASE("parse_class_warnings: malformed documents") {
    CHECK_THROWS_CODE(parse_class_warnings("<Zargets/>"), errc::malformed_document);
    CHECK_THROWS_CODE(parse_class_warnings("<Targets><Target Name=\"a.cs\">"),
                      errc::malformed_document);
    CHECK_THROWS_CODE(parse_class_warnings(R"(<Targets><Target Name="a.cs">
        <Class Name="C"><Issue Category="Design" Count="two"/></Class>
        </Target></Targets>)"),
                      errc::malformed_document);
    // duplicate (file, class) pair
    CHECK_THROWS_CODE(parse_class_warnings(R"(<Targets><Target Name="a.cs">
        <Class Name="C"></Class><Class Name="C"></Class>
        </Target></Targets>)"),
                      errc::malformed_document);
}

TEST_CASE("parse_class_warnings: repeated categories accumulate") {
    const auto records = parse_class_warnings(R"(<Targets><Target Name="a.cs">
        <Class Name="C">
          <Issue Category="Usage" Count="2"/>
          <Issue Category="Usage" Count="5"/>
        </Class></Target></Targets>)");
    CHECK(records[0].counts[static_cast<std::size_t>(WarningCategory::usage)] == 7);
}

TEST_CASE("parse_change_log: basic line") {
    const auto records = parse_change_log(
        R"({"commit":"c1","message":"fix DE-101 crash","files":["a\\File1.cs"]})"
        "\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].change_id == "c1");
    CHECK(records[0].message == "fix DE-101 crash");
    CHECK(records[0].files == std::vector<std::string>{"a/File1.cs"});
}

TEST_CASE("parse_change_log: zero lines gives empty list") {
    CHECK(parse_change_log("").empty());
    CHECK(parse_change_log("\n\n").empty());
}

TEST_CASE("parse_change_log: malformed line reports 1-based number") {
    try {
        parse_change_log("not-json\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::malformed_line);
        CHECK(e.line() == 1);
    }
    try {
        parse_change_log(R"({"commit":"c1","message":"m","files":[]})"
                         "\n"
                         R"({"commit":"","message":"m","files":[]})"
                         "\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::malformed_line);
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_CODE(parse_change_log(R"({"commit":"c1","files":[]})"), errc::malformed_line);
    CHECK_THROWS_CODE(parse_change_log(R"({"commit":"c1","message":"m","files":[1]})"),
                      errc::malformed_line);
}

TEST_CASE("parse_change_log: order preserved, empty files allowed") {
    const auto records = parse_change_log(R"({"commit":"a","message":"one","files":[]})"
                                          "\n"
                                          R"({"commit":"b","message":"two","files":["x.cs"]})"
                                          "\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].change_id == "a");
    CHECK(records[0].files.empty());
    CHECK(records[1].change_id == "b");
}

// ---------------------------------------------------------------------------
// Round-trip properties over generated records

namespace {

FileMetricTable random_metric_table(Rng& rng) {
    FileMetricTable table;
    table.metric_names = {"loc", "depth", "comments_pct"};
    table.loc_index = 0;
    const std::size_t n = 1 + rng.uniform_int(20);
    for (std::size_t i = 0; i < n; ++i) {
        FileMetricRecord record;
        record.file_path = "dir" + std::to_string(rng.uniform_int(4)) + "/f" + std::to_string(i) + ".cs";
        record.values = {static_cast<double>(rng.uniform_int(2000)), rng.normal() * 3.0,
                         rng.uniform01() * 100.0};
        table.records.push_back(std::move(record));
    }
    return table;
}

std::vector<ClassWarningRecord> random_warnings(Rng& rng) {
    std::vector<ClassWarningRecord> records;
    const std::size_t n = rng.uniform_int(12);
    for (std::size_t i = 0; i < n; ++i) {
        ClassWarningRecord record;
        record.file_path = "m" + std::to_string(i / 3) + "/F" + std::to_string(i) + ".cs";
        record.class_name = "Class" + std::to_string(i);
        for (auto& count : record.counts) count = rng.uniform_int(6);
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<ChangeRecord> random_changes(Rng& rng) {
    std::vector<ChangeRecord> records;
    const std::size_t n = rng.uniform_int(10);
    for (std::size_t i = 0; i < n; ++i) {
        ChangeRecord record;
        record.change_id = "c" + std::to_string(i);
        record.message = rng.uniform01() < 0.5 ? "fix defect DE-" + std::to_string(i)
                                               : "tidy module " + std::to_string(i);
        const std::size_t files = rng.uniform_int(4);
        for (std::size_t f = 0; f < files; ++f) {
            record.files.push_back("p/f" + std::to_string(rng.uniform_int(30)) + ".cs");
        }
        records.push_back(std::move(record));
    }
    return records;
}

} // namespace

TEST_CASE("round-trip: all three formats") {
    Rng rng(2024);
    for (int round = 0; round < 50; ++round) {
        const auto table = random_metric_table(rng);
        CHECK(parse_file_metrics(write_file_metrics_csv(table)) == table);

        const auto warnings = random_warnings(rng);
        const auto reparsed = parse_class_warnings(write_class_warnings_xml(warnings));
        CHECK(reparsed == warnings);

        const auto changes = random_changes(rng);
        CHECK(parse_change_log(write_change_log_jsonl(changes)) == changes);
    }
}

TEST_CASE("parsing is pure: same input, same output") {
    const std::string csv = "file_path,loc\na.cs,1\nb.cs,2\n";
    CHECK(parse_file_metrics(csv) == parse_file_metrics(csv));
}

TEST_CASE("xml attribute escaping round-trips") {
    std::vector<ClassWarningRecord> records(1);
    records[0].file_path = "a&b/<odd> \"name\".cs";
    records[0].class_name = "C'1";
    records[0].counts[0] = 2;
    CHECK(parse_class_warnings(write_class_warnings_xml(records)) == records);
}
