#pragma once

#include <compare>
#include <cstddef>
#include <string>

#include "wifipos/error.hpp"

namespace wifipos {

// Rectangular survey grid. Cells are indexed 1-based as (row, col), matching
// the "4.6"-style point names used in survey notes.
struct GridSpec {
    int rows = 0;
    int cols = 0;
    double cell_size_m = 1.0;

    int point_count() const { return rows * cols; }

    bool operator==(const GridSpec&) const = default;

    void validate() const {
        if (rows < 1 || cols < 1)
            throw Error("grid must have at least one row and one column");
        if (!(cell_size_m > 0.0))
            throw Error("grid cell size must be positive");
    }
};

struct GridPoint {
    int row = 0;
    int col = 0;

    auto operator<=>(const GridPoint&) const = default;
};

inline bool contains(const GridSpec& grid, GridPoint p) {
    return p.row >= 1 && p.row <= grid.rows && p.col >= 1 && p.col <= grid.cols;
}

// Row-major linear index of a cell, 0-based. Index order coincides with
// lexicographic (row, col) order, which the locator's tie-break relies on.
inline int point_index(const GridSpec& grid, GridPoint p) {
    return (p.row - 1) * grid.cols + (p.col - 1);
}

inline GridPoint point_at(const GridSpec& grid, int index) {
    return GridPoint{index / grid.cols + 1, index % grid.cols + 1};
}

// Boundary cells form the "edge" region; everything else is "inner".
inline bool is_edge(const GridSpec& grid, GridPoint p) {
    return p.row == 1 || p.row == grid.rows || p.col == 1 || p.col == grid.cols;
}

inline std::string to_string(GridPoint p) {
    return std::to_string(p.row) + "," + std::to_string(p.col);
}

} // namespace wifipos
