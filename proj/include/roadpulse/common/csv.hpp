#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace roadpulse::csv {

// Delimited-text helpers shared by every file schema in the toolkit.
// Comma separated; fields containing comma, quote or newline are quoted
// with double quotes; lines starting with '#' are metadata/comments.

struct Row {
    std::vector<std::string> fields;
    int line_no = 0;

    const std::string& at(std::size_t i, const std::string& column) const;
};

struct Table {
    std::string path;
    std::vector<std::string> header;
    std::vector<Row> rows;
    std::vector<std::string> comments; // '#' lines, in order, without the '#'

    // Index of a header column; throws a schema error when required.
    std::optional<std::size_t> find(const std::string& column) const;
    std::size_t require(const std::string& column) const;
};

Table read_table(const std::string& path);

std::vector<std::string> split_line(const std::string& line);
std::string join_fields(const std::vector<std::string>& fields);

class Writer {
public:
    explicit Writer(const std::string& path);

    void comment(const std::string& text);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

// Shortest round-trip formatting so reruns are byte-identical.
std::string format_double(double v);

double parse_double(const std::string& field, const std::string& context);
long parse_long(const std::string& field, const std::string& context);

} // namespace roadpulse::csv
