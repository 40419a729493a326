#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/sequence.hpp"

namespace tiltlab {

// ---------------------------------------------------------------------------
// Shapes and build orders

// A target polyomino for drop assembly: non-empty, 4-connected, normalized
// so min x = min y = 1.
struct DropShape {
    std::vector<Cell> cells;  // sorted (y,x)

    int height() const;
    int width() const;
    bool contains(int x, int y) const;
    std::size_t size() const { return cells.size(); }
    void validate() const;  // throws std::invalid_argument
};

// Normalizes, sorts and validates.
DropShape make_drop_shape(std::vector<Cell> cells);

// Shape file: "shape <h> <w>" then h grid rows, top row first, 'X' for
// occupied and '.' for empty. Parsing normalizes; serializing emits the
// tight bounding grid.
DropShape parse_shape(const std::string& text);
std::string serialize_shape(const DropShape& shape);

// One insertion: `cell` enters travelling from the `approach` side toward
// the assembly (approach N = the tile arrives moving south).
struct DropStep {
    Cell cell;
    Direction approach = Direction::N;
};

// A witness insertion order: the seed is placed first, then each step's cell
// is dropped. Every prefix stays connected and every step passes droppable().
struct BuildOrder {
    Cell seed;
    std::vector<DropStep> steps;
};

// True iff `cell` is edge-adjacent to the assembly and the open ray from
// `cell` toward the approach side contains no assembly cell.
bool droppable(const std::vector<Cell>& assembly, Cell cell, Direction approach);

// Checks a witness against the shape using droppable() alone: the seed and
// step cells partition the shape and every step is valid for its prefix.
bool valid_build_order(const DropShape& shape, const BuildOrder& order);

inline constexpr int kDropSearchLimit = 16;

// Backtracking search over seeds and insertion orders, memoized on assembly
// subsets. Returns a witness or nullopt (the search space is exhausted, so
// the negative is certified). The steps searched are the physically
// realizable ones: a dropped tile bonds at its first side-contact, so only
// first-contact landings whose lane stays on the gadget side of the anchored
// wall are tried; when that restricted search fails, the verdict is
// re-checked against unrestricted droppable() steps. Throws
// std::invalid_argument when the shape has more than `limit` cells.
std::optional<BuildOrder> find_build_order(const DropShape& shape,
                                           int limit = kDropSearchLimit);

// Thrown by build_drop when the shape admits no build order.
struct NotDropShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tilt sequence templates

// Fuel selection cycle: extraction, i stores, select, j stores. One of the
// two reservoirs is picked per cycle, so (i,j) is (0,1) or (1,0).
TiltSequence seq_fuel_select(int i, int j);
// Per-approach preparation row that routes the selected tile out of the
// selection chamber and the assembly into the matching alignment pose.
TiltSequence seq_approach(Direction d);
// Alignment row: `lane` repetitions of the advance block, then the terminal
// block that launches the tile onto the assembly and returns everything to
// the rest pose.
TiltSequence seq_align(Direction d, int lane);

// ---------------------------------------------------------------------------
// Builder machine

struct DropChamberRect {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // inclusive corners
};

// A generated drop builder: board, initial rest configuration, and the
// bookkeeping compile and verification need.
struct DropBuilderLayout {
    Board board{1, 1, EdgeMode::Open};
    Configuration initial;
    std::map<std::string, DropChamberRect> chambers;

    int h = 0, w = 0;
    int fuel_per_reservoir = 0;
    Cell notch;  // rest-pose cell the assembly's anchored corner occupies

    Label reservoir_label(int reservoir) const;  // 0 or 1
};

// Sticky fuel labels: reservoir 0 holds 'a', reservoir 1 holds 'b'; all
// three affinities are set, so fuel bonds to fuel of either kind.
Label drop_fuel_label(int reservoir);

// Flattened compiled length of a full build is at most this constant times
// h^2 * w (h >= w).
inline constexpr std::uint64_t kDropTiltBoundPerArea = 64;

// Emits the golden builder board for targets fitting h x w, h >= w >= 1.
DropBuilderLayout gen_drop_builder(int h, int w);

// Compiles a witness order into the tilt stream realizing it on `layout`:
// per step a fuel-selection cycle, the approach row, and the alignment row
// whose repetition count is the step's lane index. Appends the flush tail
// that ejects unused fuel so the final configuration holds the assembly
// alone. Throws std::invalid_argument when the order does not fit the
// layout or a lane index falls outside the gadget.
TiltSequence compile_drop_sequence(const BuildOrder& order,
                                   const DropBuilderLayout& layout);

struct DropBuildResult {
    DropBuilderLayout layout;
    BuildOrder order;
    TiltSequence sequence;
    Configuration final_config;
    std::uint64_t tilt_count = 0;
    int flushed_fuel = 0;  // unused fuel tiles ejected by the flush tail
};

// Decide, generate, compile, simulate, verify: the final configuration must
// strongly represent the shape. Throws NotDropShapeError when no build order
// exists, std::invalid_argument when the shape does not fit h x w, and
// std::runtime_error if verification of the simulated result fails.
DropBuildResult build_drop(const DropShape& shape, int h, int w);

}  // namespace tiltlab
