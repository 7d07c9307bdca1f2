#include "irdm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace irdm {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double_cell(const std::string& cell, const std::string& file, std::size_t line,
                         const std::string& column) {
    double out = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw RowError(file, line, "cannot parse '" + cell + "' in column " + column);
    return out;
}

void split_csv_line(const std::string& line, std::vector<std::string>& cells) {
    cells.clear();
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

CsvReader::CsvReader(const std::string& path, const std::vector<std::string>& required_header,
                     const std::vector<std::string>& optional_columns)
    : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    buffer_ = ss.str();

    std::size_t eol = buffer_.find('\n');
    std::string header_line = buffer_.substr(0, eol);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    pos_ = eol == std::string::npos ? buffer_.size() : eol + 1;

    split_csv_line(header_line, header_);
    if (header_.size() < required_header.size())
        throw SchemaError(path + ": header is missing column '" +
                          required_header[header_.size()] + "'");
    for (std::size_t i = 0; i < required_header.size(); ++i)
        if (header_[i] != required_header[i])
            throw SchemaError(path + ": expected column '" + required_header[i] +
                              "' at position " + std::to_string(i + 1) + ", found '" +
                              header_[i] + "'");
    std::size_t next_opt = 0;
    for (std::size_t i = required_header.size(); i < header_.size(); ++i) {
        bool ok = false;
        while (next_opt < optional_columns.size()) {
            if (optional_columns[next_opt++] == header_[i]) {
                ok = true;
                break;
            }
        }
        if (!ok) throw SchemaError(path + ": unexpected column '" + header_[i] + "'");
    }
    column_count_ = header_.size();
}

bool CsvReader::has_column(const std::string& name) const {
    for (const auto& h : header_)
        if (h == name) return true;
    return false;
}

bool CsvReader::next_row(std::vector<std::string>& cells) {
    while (pos_ < buffer_.size()) {
        std::size_t eol = buffer_.find('\n', pos_);
        std::string line = buffer_.substr(pos_, eol == std::string::npos ? std::string::npos
                                                                         : eol - pos_);
        pos_ = eol == std::string::npos ? buffer_.size() : eol + 1;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // tolerate blank trailing lines
        split_csv_line(line, cells);
        if (cells.size() != column_count_)
            throw RowError(path_, line_,
                           "expected " + std::to_string(column_count_) + " cells, found " +
                               std::to_string(cells.size()));
        return true;
    }
    return false;
}

}  // namespace irdm
