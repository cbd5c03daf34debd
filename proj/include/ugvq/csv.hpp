#pragma once

#include <istream>
#include <string>
#include <vector>

namespace ugvq {

// Minimal CSV support: comma-separated, UTF-8, no quoting, one header row.
// Trailing \r is stripped so files written on Windows parse unchanged.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 if absent
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

} // namespace ugvq
