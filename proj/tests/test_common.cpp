#include "roadpulse/common/csv.hpp"
#include "roadpulse/common/date.hpp"
#include "roadpulse/common/error.hpp"
#include "roadpulse/common/util.hpp"

#include <doctest.h>

#include "testutil.hpp"

using namespace roadpulse;

TEST_CASE("date parse/format round trip") {
    const Date d = Date::parse("2022-02-25");
    CHECK(d.to_string() == "2022-02-25");
    CHECK(d.plus_days(1).to_string() == "2022-02-26");
    CHECK(d.plus_days(4).to_string() == "2022-03-01");
    CHECK(Date::parse("2022-03-16").serial() - d.serial() == 19);
}

TEST_CASE("date rejects malformed text") {
    CHECK_THROWS_AS(Date::parse("2022-13-01"), Error);
    CHECK_THROWS_AS(Date::parse("2022-02-30"), Error);
    CHECK_THROWS_AS(Date::parse("22-02-01"), Error);
    CHECK_THROWS_AS(Date::parse("2022/02/01"), Error);
}

TEST_CASE("csv quoting round trip") {
    const std::vector<std::string> fields{"plain", "with,comma", "with\"quote", ""};
    const auto line = csv::join_fields(fields);
    CHECK(csv::split_line(line) == fields);
}

TEST_CASE("csv table reading skips comments and validates header") {
    testutil::TempDir tmp("csv");
    testutil::write_file(tmp.file("t.csv"), "#meta line\na,b\n1,2\n\n3,4\n");
    const auto t = csv::read_table(tmp.file("t.csv"));
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 2);
    CHECK(t.comments.size() == 1);
    CHECK(t.require("b") == 1);
    CHECK_THROWS_AS(t.require("missing"), Error);
}

TEST_CASE("format_double is exact and stable") {
    CHECK(csv::format_double(605.625) == "605.625");
    CHECK(csv::format_double(0.0) == "0");
    const double v = 1.0 / 3.0;
    CHECK(csv::parse_double(csv::format_double(v), "t") == v);
}

TEST_CASE("natural_less orders numeric ids numerically") {
    CHECK(natural_less("9", "10"));
    CHECK(!natural_less("10", "9"));
    CHECK(natural_less("a", "b"));
    CHECK(natural_less("A10", "A9")); // non-numeric falls back to lexicographic
}

TEST_CASE("fnv1a64 known value") {
    // FNV-1a test vector: empty string hashes to the offset basis.
    CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ULL);
    const std::string s = "a";
    CHECK(fnv1a64(s.data(), s.size()) == 0xaf63dc4c8601ec8cULL);
}
