// CSV parsing/emission with RFC-4180 quoting and round-trip exact doubles.

#ifndef DIMSCOPE_CSV_IO_HPP
#define DIMSCOPE_CSV_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "dimscope/common.hpp"

namespace dimscope {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named column, or nullopt.
    std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

void write_csv(const std::string& path, const CsvTable& table);
std::string render_csv(const CsvTable& table);

/// Quotes fields containing separators, quotes, or newlines.
std::string csv_escape(const std::string& field);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

double parse_double(const std::string& text);
long parse_long(const std::string& text);

}  // namespace dimscope

#endif  // DIMSCOPE_CSV_IO_HPP
