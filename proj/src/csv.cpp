#include "utb/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "utb/error.hpp"

namespace utb {

namespace {

void split_line(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool parse_cell(const std::string& cell, double& out) {
    if (cell.empty()) {
        out = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t')) --last;
    if (first == last) {
        out = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string chomp(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    return line;
}

}  // namespace

std::vector<std::string> read_csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "'" + path + "': missing header row");
    std::vector<std::string> header;
    split_line(chomp(line), header);
    return header;
}

CsvColumns read_csv_columns(const std::string& path, const std::vector<std::string>& keep) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "'" + path + "': missing header row");

    CsvColumns out;
    std::vector<std::string> all;
    split_line(chomp(line), all);

    std::vector<int> col_index;  // index into `all` per kept column
    if (keep.empty()) {
        out.header = all;
        for (int i = 0; i < static_cast<int>(all.size()); ++i) col_index.push_back(i);
    } else {
        for (const auto& name : keep) {
            int found = -1;
            for (int i = 0; i < static_cast<int>(all.size()); ++i)
                if (all[i] == name) {
                    found = i;
                    break;
                }
            if (found < 0) fail(ErrorKind::Config, "column '" + name + "' not found in '" + path + "'");
            col_index.push_back(found);
        }
        out.header = keep;
    }
    out.columns.resize(out.header.size());

    std::vector<std::string> cells;
    int64_t row = 0;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
        ++row;
        split_line(line, cells);
        if (cells.size() != all.size())
            fail(ErrorKind::Parse, "'" + path + "' row " + std::to_string(row) + ": expected " +
                                       std::to_string(all.size()) + " cells, found " +
                                       std::to_string(cells.size()));
        for (size_t c = 0; c < col_index.size(); ++c) {
            double v;
            if (!parse_cell(cells[col_index[c]], v))
                fail(ErrorKind::Parse, "'" + path + "' row " + std::to_string(row) + ", column '" +
                                           out.header[c] + "': non-numeric cell '" +
                                           cells[col_index[c]] + "'");
            out.columns[c].push_back(v);
        }
    }
    out.rows = row;
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const size_t rows = columns.empty() ? 0 : columns[0]->size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << format_double((*columns[c])[r]);
        out << '\n';
    }
    if (!out) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

}  // namespace utb
