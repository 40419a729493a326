#pragma once

// Core semantics of the tilt model: boards, labeled tiles, polyominoes,
// bonding, the blocked-fixpoint step, maximal tilts and representation
// predicates. Everything here is a pure function on immutable values.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiltlab {

// ---------------------------------------------------------------------------
// Directions

enum class Direction : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

// Offsets use the convention x in 1..m growing east, y in 1..n growing north.
constexpr int dx(Direction d) {
    switch (d) {
        case Direction::E: return 1;
        case Direction::W: return -1;
        default: return 0;
    }
}
constexpr int dy(Direction d) {
    switch (d) {
        case Direction::N: return 1;
        case Direction::S: return -1;
        default: return 0;
    }
}
constexpr Direction opposite(Direction d) {
    switch (d) {
        case Direction::N: return Direction::S;
        case Direction::S: return Direction::N;
        case Direction::E: return Direction::W;
        default: return Direction::E;
    }
}
constexpr char to_char(Direction d) {
    switch (d) {
        case Direction::N: return 'N';
        case Direction::E: return 'E';
        case Direction::S: return 'S';
        default: return 'W';
    }
}
std::optional<Direction> direction_from_char(char c);

// Directions in the deterministic expansion order used by all searches.
constexpr std::array<Direction, 4> kAllDirections = {
    Direction::N, Direction::E, Direction::S, Direction::W};

// ---------------------------------------------------------------------------
// Labels and affinities

// A label is a single printable character. '_' is the reserved sand label
// (epsilon): it bonds with nothing, including itself.
using Label = char;
constexpr Label kSand = '_';

// Symmetric 0/1 affinity relation on labels. Sand can never appear in a pair.
class AffinityMap {
public:
    AffinityMap() = default;

    // Throws std::invalid_argument if either label is sand.
    void add(Label a, Label b);
    bool bonded(Label a, Label b) const {
        return table_[idx(a)][idx(b)];
    }
    bool empty() const { return pairs_.empty(); }
    // Canonicalized (min,max) pairs, sorted; used for serialization.
    std::vector<std::pair<Label, Label>> pairs() const;

    bool operator==(const AffinityMap& other) const { return pairs_ == other.pairs_; }

private:
    static std::size_t idx(Label l) { return static_cast<unsigned char>(l); }
    std::array<std::array<bool, 256>, 256> table_{};
    std::vector<std::pair<Label, Label>> pairs_;
};

using AffinityPtr = std::shared_ptr<const AffinityMap>;

// ---------------------------------------------------------------------------
// Cells and boards

struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    // Row-major order with y as the primary key: matches the canonical
    // (y,x) sort used everywhere.
    friend bool operator<(const Cell& a, const Cell& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

enum class EdgeMode : std::uint8_t {
    Walled,  // the extent boundary blocks motion
    Open,    // polyominoes sliding past the boundary are removed
};

// An m x n board with a set of blocked cells. Immutable once built; shared
// by every configuration derived from it.
class Board {
public:
    Board(int m, int n, EdgeMode mode = EdgeMode::Walled);

    int width() const { return m_; }
    int height() const { return n_; }
    EdgeMode edge_mode() const { return mode_; }

    bool in_extent(int x, int y) const {
        return x >= 1 && x <= m_ && y >= 1 && y <= n_;
    }
    bool blocked(int x, int y) const { return blocked_[index(x, y)]; }
    bool open(int x, int y) const { return !blocked(x, y); }
    void set_blocked(int x, int y, bool value = true);
    // Blocks the full perimeter ring.
    void wall_perimeter();

    std::size_t open_count() const;
    std::vector<Cell> open_cells() const;
    std::vector<Cell> blocked_cells() const;

    std::size_t index(int x, int y) const {
        if (!in_extent(x, y)) throw std::out_of_range("board cell out of extent");
        return static_cast<std::size_t>(y - 1) * m_ + (x - 1);
    }

    bool operator==(const Board& other) const {
        return m_ == other.m_ && n_ == other.n_ && mode_ == other.mode_ &&
               blocked_ == other.blocked_;
    }

private:
    int m_;
    int n_;
    EdgeMode mode_;
    std::vector<char> blocked_;
};

using BoardPtr = std::shared_ptr<const Board>;

// ---------------------------------------------------------------------------
// Tiles, polyominoes, configurations

using TileId = std::int64_t;

struct Tile {
    TileId id = 0;
    int x = 0;
    int y = 0;
    Label label = kSand;
};

// Tiles of one polyomino, kept sorted by (y,x) in canonical form.
struct Polyomino {
    std::vector<Tile> tiles;

    Cell min_cell() const;
    std::vector<Cell> cells() const;
    bool contains(int x, int y) const;
};

// A full configuration. Invariants (checked by validate()):
//  - no tile on a blocked cell, no overlaps
//  - every polyomino is edge-connected and bond-connected
//  - tile ids unique
//  - merge-saturated: no two polyominoes carry adjacent bonded tiles
struct Configuration {
    BoardPtr board;
    AffinityPtr affinity;
    std::vector<Polyomino> polys;

    // Sorts polyominoes by min (y,x) tile and tiles within by (y,x).
    void canonicalize();
    // Sorted (y,x,label) triples over all tiles; the identity used for
    // equality and hashing (tile ids excluded).
    std::vector<std::tuple<int, int, Label>> canonical_cells() const;

    std::size_t tile_count() const;
    const Tile* find_tile(TileId id) const;

    // Throws std::runtime_error describing the first violated invariant.
    void validate() const;
};

// Equality of canonical content: boards, affinities and labeled cells.
bool same_configuration(const Configuration& a, const Configuration& b);

// ---------------------------------------------------------------------------
// Dynamics

// One unit step in direction d: freeze polyominoes against walls and frozen
// neighbors to a fixpoint, translate the rest one unit, drop polyominoes
// leaving an open board, then merge newly bonded polyominoes.
Configuration step(const Configuration& config, Direction d);

// Is step(config, d) == config?
bool is_terminal(const Configuration& config, Direction d);

// Repeated steps until d-terminal. Asserts the max(m,n) progress bound on
// walled boards.
Configuration tilt(const Configuration& config, Direction d);

// Union-find merge of bonded adjacent polyominoes; tile ids preserved.
Configuration merge_bonded(const Configuration& config);

// ---------------------------------------------------------------------------
// Representation predicates

// True iff the configuration is a single polyomino whose cell set is a
// translation of `shape`. Throws on an empty or disconnected shape.
bool strongly_represents(const Configuration& config, const std::vector<Cell>& shape);

// True iff some polyomino is a translation of `shape` and every other
// polyomino is a lone sand tile.
bool weakly_represents(const Configuration& config, const std::vector<Cell>& shape);

// Pattern matching: `grid` is row-major with grid[r][c] the symbol at
// x=c+1, y=h-r (top row first); symbol 0 is a don't-care cell. The map from
// symbols to labels must be injective. True iff under some translation all
// symbol cells carry the mapped label and no other non-sand tile sits in the
// pattern's bounding box.
bool represents_pattern(const Configuration& config,
                        const std::vector<std::vector<int>>& grid,
                        const std::vector<std::pair<int, Label>>& symbol_map);

// Shared helpers.
bool cells_connected(const std::vector<Cell>& cells);
std::vector<Cell> normalize_cells(std::vector<Cell> cells);

}  // namespace tiltlab
