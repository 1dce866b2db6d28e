#include "roadpulse/common/csv.hpp"

#include "roadpulse/common/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace roadpulse::csv {

const std::string& Row::at(std::size_t i, const std::string& column) const {
    if (i >= fields.size())
        fail("schema", "line " + std::to_string(line_no) + ": missing column '" + column + "'");
    return fields[i];
}

std::optional<std::size_t> Table::find(const std::string& column) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == column)
            return i;
    return std::nullopt;
}

std::size_t Table::require(const std::string& column) const {
    if (auto i = find(column))
        return *i;
    fail("schema", path + ": required column '" + column + "' not in header");
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

static bool needs_quoting(const std::string& f) {
    return f.find_first_of(",\"\n") != std::string::npos;
}

std::string join_fields(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            line += ',';
        if (needs_quoting(fields[i])) {
            line += '"';
            for (char c : fields[i]) {
                if (c == '"')
                    line += '"';
                line += c;
            }
            line += '"';
        } else {
            line += fields[i];
        }
    }
    return line;
}

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("io", "cannot open '" + path + "'");
    Table t;
    t.path = path;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            t.comments.push_back(line.substr(1));
            continue;
        }
        if (!have_header) {
            t.header = split_line(line);
            have_header = true;
            continue;
        }
        t.rows.push_back(Row{split_line(line), line_no});
    }
    if (!have_header)
        fail("schema", path + ": empty file, header expected");
    return t;
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_)
        fail("io", "cannot write '" + path + "'");
}

void Writer::comment(const std::string& text) {
    out_ << '#' << text << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
    out_ << join_fields(fields) << '\n';
}

void Writer::close() {
    out_.flush();
    if (!out_)
        fail("io", "write failed for '" + path_ + "'");
    out_.close();
}

std::string format_double(double v) {
    if (v == 0.0)
        v = 0.0; // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    const char* b = field.data();
    const char* e = b + field.size();
    double v = 0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e || !std::isfinite(v))
        fail("schema", context + ": expected number, got '" + field + "'");
    return v;
}

long parse_long(const std::string& field, const std::string& context) {
    const char* b = field.data();
    const char* e = b + field.size();
    long v = 0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail("schema", context + ": expected integer, got '" + field + "'");
    return v;
}

} // namespace roadpulse::csv
