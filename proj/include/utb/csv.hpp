#pragma once
#include <string>
#include <vector>

namespace utb {

// Minimal CSV support: comma separator, '.' decimal point, header row, no
// quoting. Empty cells read back as NaN.

struct CsvColumns {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one vector per kept header entry
    int64_t rows = 0;
};

// Parses the named columns (all columns when `keep` is empty). Throws Parse
// with the 1-based data row and column name on a non-numeric cell.
CsvColumns read_csv_columns(const std::string& path, const std::vector<std::string>& keep = {});

std::vector<std::string> read_csv_header(const std::string& path);

// Shortest exact decimal encoding; NaN becomes an empty cell.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

}  // namespace utb
