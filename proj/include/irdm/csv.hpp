#pragma once

#include <string>
#include <vector>

#include "irdm/errors.hpp"

namespace irdm {

// Shortest round-trip formatting; parse(format_double(x)) == x.
std::string format_double(double v);

// Strict double parse of a whole cell (no trailing junk, no empty cell).
double parse_double_cell(const std::string& cell, const std::string& file, std::size_t line,
                         const std::string& column);

// Minimal comma-separated reader for the fixed schemas used by this
// project: UTF-8, '.' decimal point, first row is the header, no quoting.
class CsvReader {
public:
    // Opens `path` and checks that the header starts with `required_header`
    // exactly. Extra columns listed in `optional_columns` may follow, in
    // order; anything else is a SchemaError.
    CsvReader(const std::string& path, const std::vector<std::string>& required_header,
              const std::vector<std::string>& optional_columns = {});

    // Reads the next data row into `cells`. Returns false at EOF.
    // Rows with the wrong cell count raise RowError.
    bool next_row(std::vector<std::string>& cells);

    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }  // 1-based, header is line 1
    std::size_t column_count() const { return column_count_; }
    bool has_column(const std::string& name) const;

private:
    std::string path_;
    std::vector<std::string> header_;
    std::string buffer_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_count_ = 0;
};

void split_csv_line(const std::string& line, std::vector<std::string>& cells);

}  // namespace irdm
