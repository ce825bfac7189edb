#pragma once

// RFC-4180 tables with a leading '#' comment block documenting the columns.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace arborwalk::cli {

/// 17 significant digits, "." decimal; NaN becomes an empty field.
std::string format_number(double v);
std::string format_integer(long long v);
/// Quotes the field if it contains a comma, quote, CR or LF.
std::string quote_field(const std::string& field);

struct Column {
    std::string name;
    std::string description;
};

class CsvTable {
public:
    explicit CsvTable(std::vector<Column> columns, std::string title = {});

    const std::vector<Column>& columns() const { return columns_; }
    std::size_t row_count() const { return rows_.size(); }

    /// Throws InputError if the field count does not match the header.
    void add_row(std::vector<std::string> fields);
    /// Appends rows already serialized by row_text().
    void add_serialized(const std::string& text);

    std::string header_text() const;
    /// CRLF-terminated rows.
    std::string rows_text() const;
    std::string text() const { return header_text() + rows_text(); }

    static std::string row_text(const std::vector<std::string>& fields);

private:
    std::vector<Column> columns_;
    std::string title_;
    std::vector<std::string> rows_;
};

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column, or -1.
    int column(const std::string& name) const;
};

/// Skips leading '#' lines; handles quoted fields.
ParsedCsv parse_csv(const std::string& text);

/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace arborwalk::cli
