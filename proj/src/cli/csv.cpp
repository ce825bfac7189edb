#include "arborwalk/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arborwalk/errors.hpp"

namespace arborwalk::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string format_integer(long long v) {
    return std::to_string(v);
}

std::string quote_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvTable::CsvTable(std::vector<Column> columns, std::string title)
    : columns_(std::move(columns)), title_(std::move(title)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != columns_.size()) {
        throw InputError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(columns_.size()));
    }
    rows_.push_back(row_text(fields));
}

void CsvTable::add_serialized(const std::string& text) {
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find("\r\n", start);
        if (end == std::string::npos) end = text.size();
        if (end > start) rows_.push_back(text.substr(start, end - start) + "\r\n");
        start = end + 2;
    }
}

std::string CsvTable::row_text(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) line += ',';
        line += quote_field(fields[k]);
    }
    return line + "\r\n";
}

std::string CsvTable::header_text() const {
    std::string out;
    if (!title_.empty()) out += "# " + title_ + "\r\n";
    for (const Column& c : columns_) {
        out += "# " + c.name + ": " + c.description + "\r\n";
    }
    std::vector<std::string> names;
    for (const Column& c : columns_) names.push_back(c.name);
    return out + row_text(names);
}

std::string CsvTable::rows_text() const {
    std::string out;
    for (const std::string& r : rows_) out += r;
    return out;
}

int ParsedCsv::column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return static_cast<int>(k);
    }
    return -1;
}

ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool at_line_start = true;
    bool comment = false;
    bool any = false;
    const auto finish_record = [&] {
        if (any || !field.empty() || !record.empty()) {
            record.push_back(field);
            if (out.header.empty()) {
                out.header = record;
            } else {
                out.rows.push_back(record);
            }
        }
        record.clear();
        field.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (at_line_start && !quoted && c == '#' && out.header.empty()) comment = true;
        at_line_start = false;
        if (comment) {
            if (c == '\n') {
                comment = false;
                at_line_start = true;
            }
            continue;
        }
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            finish_record();
            at_line_start = true;
        } else if (c != '\r') {
            field += c;
        }
    }
    finish_record();
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace arborwalk::cli
