#pragma once

#include <cstdint>
#include <vector>

#include "tiltlab/core.hpp"

namespace tiltlab {

// Reference droppability written straight off the definition: set lookups
// for adjacency and a literal walk along the approach ray until it leaves
// the assembly's bounding box. Independent of the library's arithmetic.
bool oracle_droppable(const std::vector<Cell>& assembly, Cell cell,
                      Direction approach);

// Memo-free reference decider: plain backtracking over every seed and
// insertion order using oracle_droppable. Exponential on negatives, so only
// used for cross-checks on small shapes.
bool oracle_buildable(const std::vector<Cell>& cells);

// One canonical representative of every free polyomino with n cells,
// normalized to min x = min y = 1 and sorted.
std::vector<std::vector<Cell>> free_polyominoes(int n);

// True when no cell is simultaneously ray-exposed (some axis ray free of
// shape cells) and removable without disconnecting the rest. A stuck shape
// cannot be built by drops: the last cell placed would have to be exactly
// such a cell. Conversely a smallest unbuildable shape must be stuck, since
// peeling an exposed removable cell off it would leave a smaller
// unbuildable shape.
bool shape_is_stuck(const std::vector<Cell>& cells);

struct StuckScan {
    std::uint64_t fixed = 0;
    std::uint64_t stuck = 0;
};

// Enumerates every fixed polyomino of exactly n cells and counts the stuck
// ones. Streaming, so memory stays flat, but the fixed count grows by ~3.9x
// per cell; keep n modest in tests.
StuckScan scan_stuck(int n);

}  // namespace tiltlab
