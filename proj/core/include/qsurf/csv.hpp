#pragma once

#include <string>
#include <vector>

namespace qsurf::csv {

struct Table {
    std::vector<std::string> comments;  // leading lines starting with '#'
    std::vector<std::vector<std::string>> rows;
};

// Reads a whole CSV file.  Lines starting with '#' before any data are kept
// as comments; later '#' lines are skipped.  Empty lines are ignored.
Table read_file(const std::string& path);

Table parse(const std::string& text);

std::vector<std::string> split_line(const std::string& line);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

void write_file(const std::string& path, const std::string& content);

}  // namespace qsurf::csv
