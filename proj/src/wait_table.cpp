#include "burstsim/wait_table.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "burstsim/errors.hpp"

namespace burstsim {

namespace {

// Row boundaries in seconds: [1,4,16,64,256,1024,4096] minutes.
constexpr std::int64_t kRowEdgesS[] = {60, 240, 960, 3840, 15360, 61440, 245760};
constexpr int kColEdges[] = {1, 4, 16, 64, 256};

constexpr std::int64_t kDefaultCellsBp[WaitTable::kRows * WaitTable::kCols] = {
    333,  667,   867,  1400, 83967,
    0,    167,   200,  1450, 9125,
    13,   367,   121,  325,  2013,
    6,    982,   1194, 2509, 1464,
    34,   1176,  657,  1007, 559,
    67,   437,   291,  385,  189,
};

}  // namespace

const std::array<const char*, WaitTable::kRows>& WaitTable::row_labels() {
    static const std::array<const char*, kRows> labels = {"1-4", "4-16", "16-64", "64-256", "256-1024", "1024-4096"};
    return labels;
}

const std::array<const char*, WaitTable::kCols>& WaitTable::col_labels() {
    static const std::array<const char*, kCols> labels = {"1-4", "4-16", "16-64", "64-256", ">256"};
    return labels;
}

WaitTable WaitTable::bundled_default() {
    WaitTable table;
    for (std::size_t i = 0; i < table.cells_bp_.size(); ++i) table.cells_bp_[i] = kDefaultCellsBp[i];
    return table;
}

std::int64_t parse_scaled_decimal(const std::string& text, int max_frac, const std::string& where,
                                  std::size_t line) {
    std::int64_t scale = 1;
    for (int i = 0; i < max_frac; ++i) scale *= 10;
    std::int64_t whole = 0;
    std::int64_t frac = 0;
    int frac_digits = 0;
    std::size_t pos = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = whole * 10 + (text[pos] - '0');
        ++pos;
        any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (frac_digits < max_frac) {
                frac = frac * 10 + (text[pos] - '0');
                ++frac_digits;
            } else if (text[pos] != '0') {
                throw ParseError(where, line, "more than " + std::to_string(max_frac) +
                                                  " fractional digits in \"" + text + "\"");
            }
            ++pos;
            any = true;
        }
    }
    if (!any || pos != text.size())
        throw ParseError(where, line, "invalid decimal \"" + text + "\"");
    for (int i = frac_digits; i < max_frac; ++i) frac *= 10;
    return whole * scale + frac;
}

WaitTable WaitTable::from_csv(std::istream& in, const std::string& name) {
    WaitTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(name, 1, "missing header row");
    ++line_no;
    int row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (row >= kRows) throw ParseError(name, line_no, "too many rows");
        std::istringstream cells(line);
        std::string cell;
        if (!std::getline(cells, cell, ',')) throw ParseError(name, line_no, "missing runtime-bin label");
        for (int col = 0; col < kCols; ++col) {
            if (!std::getline(cells, cell, ',')) throw ParseError(name, line_no, "missing cell");
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            table.cells_bp_[static_cast<std::size_t>(row * kCols + col)] =
                parse_scaled_decimal(cell, 2, name, line_no);
        }
        ++row;
    }
    if (row != kRows) throw ParseError(name, line_no, "expected " + std::to_string(kRows) + " rows, got " +
                                                          std::to_string(row));
    return table;
}

WaitTable WaitTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open wait table: " + path);
    return from_csv(in, path);
}

int WaitTable::row_bin(std::int64_t req_walltime_s) {
    if (req_walltime_s < kRowEdgesS[0]) return 0;
    for (int row = 0; row < kRows - 1; ++row) {
        if (req_walltime_s < kRowEdgesS[row + 1]) return row;
    }
    return kRows - 1;  // clamp above 4096 minutes
}

int WaitTable::col_bin(int nodes) {
    for (int col = kCols - 1; col > 0; --col) {
        if (nodes >= kColEdges[col]) return col;
    }
    return 0;
}

double WaitTable::cell_percent(int row, int col) const {
    return static_cast<double>(cell_basis_points(row, col)) / 100.0;
}

SimTime WaitTable::estimate_wait_s(int nodes, std::int64_t req_walltime_s) const {
    const std::int64_t bp = cell_basis_points(row_bin(req_walltime_s), col_bin(nodes));
    // wait = req * (bp / 10000), rounded half-up.
    return (req_walltime_s * bp + 5000) / 10000;
}

std::string WaitTable::to_csv() const {
    std::ostringstream out;
    out << "req_minutes";
    for (const char* label : col_labels()) out << ',' << label;
    out << '\n';
    for (int row = 0; row < kRows; ++row) {
        out << row_labels()[static_cast<std::size_t>(row)];
        for (int col = 0; col < kCols; ++col) {
            const std::int64_t bp = cell_basis_points(row, col);
            out << ',' << bp / 100 << '.' << (bp % 100 < 10 ? "0" : "") << bp % 100;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace burstsim
