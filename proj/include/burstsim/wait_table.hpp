#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "burstsim/time.hpp"

namespace burstsim {

// Historical median queue wait, expressed as a percentage of requested run
// time, binned by requested runtime (minutes) and node count. Rows cover
// [1,4), [4,16), [16,64), [64,256), [256,1024), [1024,4096] minutes; columns
// cover [1,4), [4,16), [16,64), [64,256), [256,inf) nodes. Out-of-range
// requests clamp to the nearest bin. Cells are stored exactly, in basis
// points of a percent, so lookups and estimates are integer arithmetic.
class WaitTable {
public:
    static constexpr int kRows = 6;
    static constexpr int kCols = 5;

    static const std::array<const char*, kRows>& row_labels();
    static const std::array<const char*, kCols>& col_labels();

    // The bundled default: median waits observed on a large production HPC
    // system, shipped as data/wait_table_default.csv.
    static WaitTable bundled_default();

    // CSV with a header row of node bins and a leading runtime-bin column.
    static WaitTable from_csv(std::istream& in, const std::string& name);
    static WaitTable load_csv(const std::string& path);

    static int row_bin(std::int64_t req_walltime_s);
    static int col_bin(int nodes);

    double cell_percent(int row, int col) const;
    std::int64_t cell_basis_points(int row, int col) const { return cells_bp_.at(static_cast<std::size_t>(row * kCols + col)); }

    // Estimated wait for a job: req_walltime_s x cell%, rounded half-up to
    // whole seconds.
    SimTime estimate_wait_s(int nodes, std::int64_t req_walltime_s) const;

    std::string to_csv() const;

private:
    std::array<std::int64_t, kRows * kCols> cells_bp_{};  // percent x 100
};

// Parses a non-negative decimal with at most `max_frac` fractional digits
// into an integer scaled by 10^max_frac. Exact; throws ParseError on junk.
std::int64_t parse_scaled_decimal(const std::string& text, int max_frac, const std::string& where,
                                  std::size_t line);

}  // namespace burstsim
