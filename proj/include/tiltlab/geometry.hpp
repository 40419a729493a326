#pragma once

#include <string>

#include "tiltlab/core.hpp"

namespace tiltlab {

// Most specific class of a board's open region, ordered by strictness:
// every class implies all the ones before it. Monotone carries the axis:
// MonotoneHorizontal means every row slice of the open region is contiguous,
// MonotoneVertical every column slice; boards satisfying both are Convex.
enum class GeometryClass {
    Disconnected,
    Connected,
    Simple,
    MonotoneHorizontal,
    MonotoneVertical,
    Convex,
    Rectangular,
};

std::string to_string(GeometryClass c);

// Rank along the hierarchy chain; both Monotone variants share a rank.
int geometry_rank(GeometryClass c);

// Number of blocked-cell clusters fully enclosed by open cells: 4-connected
// components of the blocked set that cannot reach past the extent through
// 8-connected blocked neighbors.
int hole_count(const Board& board);

// Classifies the open region. Throws std::invalid_argument when the board
// has no open cell.
GeometryClass classify_board(const Board& board);

}  // namespace tiltlab
