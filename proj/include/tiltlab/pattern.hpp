#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/sequence.hpp"

namespace tiltlab {

// Pixel grid to assemble. cells[r][c] follows text order: row 0 is the top
// row of the target, so cell (r,c) maps to board offset x=c, y=h-1-r within
// the assembly. Entry 0 means sand (no sticky tile in the finished shape);
// entries 1..k pick a color label.
struct PatternSpec {
    int h = 0;
    int w = 0;
    int k = 1;
    std::vector<std::vector<int>> cells;

    bool in_range(int r, int c) const { return r >= 0 && r < h && c >= 0 && c < w; }
    int at(int r, int c) const { return cells.at(r).at(c); }
    bool all_sticky() const;
    bool sticky_connected() const;
    void validate() const;  // throws std::invalid_argument
};

struct ChamberRect {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // inclusive corners
};

// A generated builder machine: the board, the initial tile placement, and the
// bookkeeping needed to compile command streams against it.
struct BuilderLayout {
    Board board{1, 1, EdgeMode::Open};
    Configuration initial;
    std::map<std::string, ChamberRect> chambers;
    bool release_exit = false;

    int h = 0, w = 0, k = 1;
    int verticals = 0;              // serpentine column count
    std::vector<Cell> fuel_path;    // corridor cells, queue front first
    std::vector<Label> fuel_order;  // labels along fuel_path (color/sand alternating)

    // Landmark cells (x column per role; rows derive from h).
    int gate_col = 0;     // two-cell gate: items drop from row h+2 to h+1 here
    int notch_col = 0;    // opening in the comb wall at row h+1
    int transit_col = 0;  // pass-through cell between notch and seat
    int seat_col = 0;     // decision cell column: chute below, lift shaft above
    int tunnel_x1 = 0;    // westmost line-rest cell in the slot row
    int tunnel_x2 = 0;    // eastmost line-rest cell
    int slot_row = 0;     // y of the assembly corridor
    int seat_row = 0;     // y of the decision cell

    Label color_label(int color) const;  // 1..k
};

// Label scheme: colors 1..k use '1'..'9'; sand is kSand. All color pairs
// (including self) have affinity 1.
Label builder_color_label(int color);

// Every compiled build satisfies flattened length <= this constant * h*w*k.
// (The exact count is h*w*(10k-1) + 4h, plus 2 when releasing.)
inline constexpr std::uint64_t kTiltCountPerCell = 16;

BuilderLayout gen_pattern_builder(int h, int w, int k, bool release_exit);

// Command templates driving the builder.
TiltSequence seq_add_tile();     // E,N,E,S
TiltSequence seq_remove_tile();  // E,S,N,E,S
TiltSequence seq_add_line();     // W,N,E,S

// Compiles the command stream that assembles `spec` on `layout`. Pattern mode
// requires every pixel sticky; shape mode (k=1) allows sand pixels but the
// sticky cells must be edge-connected. Both walk rows top to bottom and pixels
// right to left; each pixel consumes its k colors plus separators in fuel
// order. Throws std::invalid_argument on spec/layout mismatch.
TiltSequence compile_pattern_sequence(const PatternSpec& spec, const BuilderLayout& layout);
TiltSequence compile_shape_sequence(const PatternSpec& spec, const BuilderLayout& layout);

struct BuildResult {
    BuilderLayout layout;
    TiltSequence sequence;
    Configuration final_config;
    std::uint64_t tilt_count = 0;
    bool shape_mode = false;
    bool released = false;
};

// Generate + compile + simulate + verify. Pattern mode checks that the result
// is a single polyomino realizing the pixel grid; shape mode checks weak
// representation of the sticky cells. Throws std::runtime_error if the
// verification fails (internal inconsistency), std::invalid_argument on a bad
// spec.
BuildResult build_pattern(const PatternSpec& spec, bool release_exit = false);

// Pattern file format: header "pattern <h> <w> <k>", then h rows of symbols;
// '.' is sand, '1'..'9' are colors (letters a.. map to 10+ and are rejected
// when k < their index).
PatternSpec parse_pattern(const std::string& text);
std::string serialize_pattern(const PatternSpec& spec);

}  // namespace tiltlab
