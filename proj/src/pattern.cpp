#include "tiltlab/pattern.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace tiltlab {

namespace {

constexpr int kMaxColors = 9;

using LabeledCell = std::tuple<int, int, Label>;

}  // namespace

// ---------------------------------------------------------------------------
// PatternSpec

bool PatternSpec::all_sticky() const {
    for (const auto& row : cells)
        for (int v : row)
            if (v == 0) return false;
    return true;
}

bool PatternSpec::sticky_connected() const {
    std::vector<Cell> sticky;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            if (cells[r][c] != 0) sticky.push_back({c, h - 1 - r});
    return !sticky.empty() && cells_connected(sticky);
}

void PatternSpec::validate() const {
    if (h < 1 || w < 1) throw std::invalid_argument("pattern needs h >= 1 and w >= 1");
    if (k < 1 || k > kMaxColors)
        throw std::invalid_argument("pattern needs between 1 and 9 colors");
    if (static_cast<int>(cells.size()) != h)
        throw std::invalid_argument("pattern row count does not match h");
    for (const auto& row : cells) {
        if (static_cast<int>(row.size()) != w)
            throw std::invalid_argument("pattern row width does not match w");
        for (int v : row)
            if (v < 0 || v > k)
                throw std::invalid_argument("pattern symbol outside 0..k");
    }
}

Label builder_color_label(int color) {
    if (color < 1 || color > kMaxColors)
        throw std::invalid_argument("color outside 1..9");
    return static_cast<Label>('0' + color);
}

Label BuilderLayout::color_label(int color) const {
    if (color < 1 || color > k) throw std::invalid_argument("color outside 1..k");
    return builder_color_label(color);
}

// ---------------------------------------------------------------------------
// Board generation
//
// The machine is three chambers side by side. West: a comb of vertical
// columns joined into one serpentine corridor that stores the fuel queue.
// Middle: a two-cell vertical gate, a short wall opening (notch), a transit
// cell, and the decision seat, which sits over an ejection chute (south
// border gap, open edge) and under a lift shaft. East of the seat a w-cell
// tunnel under the slot row collects the current line. North-west: the
// construction chamber, whose east half rests on a one-row ledge; a
// part-built assembly parks there, but a full-height one is too low to clear
// it and stays west.
//
// Every command starts with E, which slides the gate-low resident through
// the notch onto the seat and refills gate-high from the approach run. Add
// tile lifts the seat resident into the slot row and lines it up; Remove
// tile drops it down the chute instead. The trailing S of each command drops
// gate-high back to gate-low, so exactly one fuel item is consumed per
// command.

BuilderLayout gen_pattern_builder(int h, int w, int k, bool release_exit) {
    if (h < 1 || w < 1) throw std::invalid_argument("builder needs h >= 1 and w >= 1");
    if (k < 1 || k > kMaxColors)
        throw std::invalid_argument("builder needs between 1 and 9 colors");

    const int fuel = 2 * k * h * w;
    // Stretch the approach run so the queue tail ends exactly at a column
    // boundary: a partially filled column would compact under a bare N or S
    // and the rest pose would not be one.
    const int pad = fuel <= 3 ? 0 : (fuel - 3) % (h + 1);
    int verts = 2 * k * w - 1;
    while (verts * (h + 1) + pad + 3 < fuel) verts += 2;

    BuilderLayout L;
    L.h = h;
    L.w = w;
    L.k = k;
    L.release_exit = release_exit;
    L.verticals = verts;

    const int riser = 2 * verts;  // eastmost column; the only one poking into the approach row
    const int gate = riser + 2 + pad;
    const int m = gate + w + 4;
    const int n = 2 * h + 5 + (release_exit ? h : 0);
    L.gate_col = gate;
    L.notch_col = gate + 1;
    L.transit_col = gate + 2;
    L.seat_col = gate + 3;
    L.tunnel_x1 = gate + 4;
    L.tunnel_x2 = gate + 3 + w;
    L.slot_row = h + 4;
    L.seat_row = h + 1;

    std::set<std::pair<int, int>> open;
    auto carve = [&](int x, int y) { open.insert({x, y}); };
    // A column "lifts" when it moves items upward and exports from its top;
    // the riser lifts, and the direction alternates westward.
    auto lifts = [&](int x) { return (riser - x) % 4 == 0; };

    for (int x = 2; x <= riser; x += 2)
        for (int y = 2; y <= h + 1; ++y) carve(x, y);
    carve(riser, h + 2);
    // Each wall column between two columns is solid except one feed cell:
    // at the top row when the west neighbour exports from its top.
    for (int x = 3; x < riser; x += 2) carve(x, lifts(x - 1) ? h + 1 : 2);

    for (int x = riser + 1; x < gate; ++x) carve(x, h + 2);  // approach run
    carve(gate, h + 1);
    carve(gate, h + 2);
    carve(gate + 1, h + 1);  // notch
    carve(gate + 2, h + 1);  // transit
    for (int y = 1; y <= h + 4; ++y) carve(gate + 3, y);  // gap, chute, seat, shaft
    for (int x = 2; x <= m - 1; ++x) carve(x, h + 4);     // slot row
    // Construction chamber: west half opens at the slot ceiling, east half
    // sits on the ledge one row higher.
    for (int x = 2; x <= 2 * w + 1; ++x)
        for (int y = h + 5; y <= n - 1; ++y)
            if (y > h + 5 || x <= w + 1) carve(x, y);
    if (release_exit)
        for (int y = 2 * h + 5; y <= 3 * h + 4; ++y) carve(1, y);

    Board board(m, n, EdgeMode::Open);
    for (int x = 1; x <= m; ++x)
        for (int y = 1; y <= n; ++y)
            if (!open.count({x, y})) board.set_blocked(x, y);
    L.board = board;

    // Fuel corridor, queue front first: both gate cells, the approach run
    // east to west, then the serpentine. Lifting columns are walked top to
    // bottom (their front is the top), sinking ones bottom to top.
    auto& path = L.fuel_path;
    path.push_back({gate, h + 1});
    path.push_back({gate, h + 2});
    for (int x = gate - 1; x > riser; --x) path.push_back({x, h + 2});
    path.push_back({riser, h + 2});
    for (int x = riser; x >= 2; x -= 2) {
        if (lifts(x))
            for (int y = h + 1; y >= 2; --y) path.push_back({x, y});
        else
            for (int y = 2; y <= h + 1; ++y) path.push_back({x, y});
        if (x > 2) path.push_back({x - 1, lifts(x - 2) ? h + 1 : 2});
    }
    if (static_cast<int>(path.size()) < fuel)
        throw std::runtime_error("builder fuel corridor shorter than the fuel queue");

    for (int p = 0; p < h * w; ++p)
        for (int c = 1; c <= k; ++c) {
            L.fuel_order.push_back(builder_color_label(c));
            L.fuel_order.push_back(kSand);
        }

    auto affinity = std::make_shared<AffinityMap>();
    for (int a = 1; a <= k; ++a)
        for (int b = a; b <= k; ++b)
            affinity->add(builder_color_label(a), builder_color_label(b));

    Configuration init;
    init.board = std::make_shared<Board>(board);
    init.affinity = affinity;
    for (int i = 0; i < fuel; ++i) {
        Polyomino poly;
        poly.tiles.push_back({i + 1, path[i].x, path[i].y, L.fuel_order[i]});
        init.polys.push_back(std::move(poly));
    }
    init.canonicalize();
    init.validate();
    L.initial = std::move(init);

    L.chambers["fuel"] = {1, 1, gate - 1, h + 3};
    L.chambers["loading"] = {gate, 1, m, h + 4};
    L.chambers["construction"] = {1, h + 4, 2 * w + 2, n};
    return L;
}

// ---------------------------------------------------------------------------
// Compilation

TiltSequence seq_add_tile() {
    return seq_of({Direction::E, Direction::N, Direction::E, Direction::S});
}

TiltSequence seq_remove_tile() {
    return seq_of({Direction::E, Direction::S, Direction::N, Direction::E, Direction::S});
}

TiltSequence seq_add_line() {
    return seq_of({Direction::W, Direction::N, Direction::E, Direction::S});
}

namespace {

// Rows top to bottom, pixels right to left; the fuel queue carries colors
// 1..k with a sand separator after each, so a pixel costs 2k commands: one
// per color item (Add for the pixel's color, Remove otherwise) and one per
// separator. Sand pixels keep their last separator instead, so every pixel
// contributes exactly one tile to the line.
TiltSequence compile_build(const PatternSpec& spec, const BuilderLayout& layout,
                           bool shape_mode, bool with_release) {
    spec.validate();
    if (spec.h != layout.h || spec.w != layout.w || spec.k != layout.k)
        throw std::invalid_argument("pattern dimensions do not match the builder layout");
    if (shape_mode) {
        if (!spec.sticky_connected())
            throw std::invalid_argument("shape mode needs a connected set of non-sand pixels");
    } else if (!spec.all_sticky()) {
        throw std::invalid_argument("pattern mode needs every pixel colored");
    }

    const TiltSequence add = seq_add_tile();
    const TiltSequence rem = seq_remove_tile();
    const TiltSequence line = seq_add_line();
    TiltSequence out;
    for (int r = 0; r < spec.h; ++r) {
        for (int c = spec.w - 1; c >= 0; --c) {
            const int pix = spec.at(r, c);
            for (int color = 1; color <= spec.k; ++color) {
                seq_append(out, pix == color ? add : rem);
                const bool keep_separator = pix == 0 && color == spec.k;
                seq_append(out, keep_separator ? add : rem);
            }
        }
        seq_append(out, line);
    }
    if (with_release && layout.release_exit) {
        seq_append(out, Direction::N);
        seq_append(out, Direction::W);
    }
    return out;
}

}  // namespace

TiltSequence compile_pattern_sequence(const PatternSpec& spec, const BuilderLayout& layout) {
    return compile_build(spec, layout, false, true);
}

TiltSequence compile_shape_sequence(const PatternSpec& spec, const BuilderLayout& layout) {
    return compile_build(spec, layout, true, true);
}

// ---------------------------------------------------------------------------
// Build + verification

namespace {

std::vector<Cell> spec_shape_cells(const PatternSpec& spec) {
    std::vector<Cell> cells;
    for (int r = 0; r < spec.h; ++r)
        for (int c = 0; c < spec.w; ++c)
            if (spec.at(r, c) != 0) cells.push_back({c, spec.h - 1 - r});
    return cells;
}

// Where the finished assembly comes to rest. Without the release exit the
// full-height stack cannot clear the ledge and settles in the west corner of
// the slot row; with it the chamber is taller, the final line clears the
// ledge, and the stack parks on it instead.
std::vector<LabeledCell> expected_pattern_cells(const PatternSpec& spec,
                                                const BuilderLayout& layout) {
    const int x0 = layout.release_exit ? layout.w + 2 : 2;
    const int y_top = layout.release_exit ? 2 * layout.h + 5 : 2 * layout.h + 3;
    std::vector<LabeledCell> out;  // (y,x,label), matching canonical_cells
    for (int r = 0; r < spec.h; ++r)
        for (int c = 0; c < spec.w; ++c)
            out.emplace_back(y_top - r, x0 + c, builder_color_label(spec.at(r, c)));
    std::sort(out.begin(), out.end());
    return out;
}

void verify_build(const PatternSpec& spec, const BuilderLayout& layout,
                  const Configuration& final_config, bool shape_mode) {
    const std::vector<Cell> shape = normalize_cells(spec_shape_cells(spec));
    std::size_t sand_pixels = 0;
    for (int r = 0; r < spec.h; ++r)
        for (int c = 0; c < spec.w; ++c)
            if (spec.at(r, c) == 0) ++sand_pixels;

    if (final_config.tile_count() !=
        static_cast<std::size_t>(spec.h) * spec.w)
        throw std::runtime_error("build left the wrong number of tiles behind");

    if (!shape_mode) {
        if (final_config.polys.size() != 1)
            throw std::runtime_error("pattern build did not end in a single polyomino");
        if (final_config.canonical_cells() != expected_pattern_cells(spec, layout))
            throw std::runtime_error("pattern build ended in the wrong cells");
        if (!strongly_represents(final_config, shape))
            throw std::runtime_error("pattern build does not strongly represent the target");
        std::vector<std::vector<int>> grid = spec.cells;
        std::vector<std::pair<int, Label>> symbols;
        for (int c = 1; c <= spec.k; ++c) symbols.emplace_back(c, builder_color_label(c));
        if (!represents_pattern(final_config, grid, symbols))
            throw std::runtime_error("pattern build does not match the pixel grid");
        return;
    }

    // Shape mode: the sticky tiles must form one polyomino matching the
    // shape and every sand pixel must survive as a lone sand tile. The sand
    // ends up wherever the final compaction drops it, which weak
    // representation leaves unconstrained.
    std::size_t sticky_polys = 0, sand_polys = 0;
    for (const auto& poly : final_config.polys) {
        bool sandy = poly.tiles.size() == 1 && poly.tiles[0].label == kSand;
        if (sandy) {
            ++sand_polys;
            continue;
        }
        ++sticky_polys;
        if (normalize_cells(poly.cells()) != shape)
            throw std::runtime_error("shape build's sticky polyomino has the wrong cells");
    }
    if (sticky_polys != 1 || sand_polys != sand_pixels)
        throw std::runtime_error("shape build left the wrong polyomino inventory");
    if (!weakly_represents(final_config, shape))
        throw std::runtime_error("shape build does not weakly represent the target");
}

}  // namespace

BuildResult build_pattern(const PatternSpec& spec, bool release_exit) {
    spec.validate();
    const bool shape_mode = !spec.all_sticky();

    BuildResult res;
    res.shape_mode = shape_mode;
    res.released = release_exit;
    res.layout = gen_pattern_builder(spec.h, spec.w, spec.k, release_exit);

    const TiltSequence body = compile_build(spec, res.layout, shape_mode, false);
    res.sequence = compile_build(spec, res.layout, shape_mode, true);
    res.tilt_count = res.sequence.length();

    Configuration cur = apply_sequence(res.layout.initial, body);
    verify_build(spec, res.layout, cur, shape_mode);

    if (release_exit) {
        cur = tilt(cur, Direction::N);
        cur = tilt(cur, Direction::W);
        if (!cur.polys.empty())
            throw std::runtime_error("release did not empty the machine");
    }
    res.final_config = std::move(cur);
    return res;
}

// ---------------------------------------------------------------------------
// Pattern files

PatternSpec parse_pattern(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    PatternSpec spec;
    bool have_header = false;
    int rows_seen = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::string at = "pattern line " + std::to_string(lineno) + ": ";
        if (!have_header) {
            std::istringstream hs(line);
            std::string tag;
            hs >> tag;
            if (tag != "pattern")
                throw std::invalid_argument(at + "expected 'pattern <h> <w> <k>'");
            if (!(hs >> spec.h >> spec.w >> spec.k))
                throw std::invalid_argument(at + "malformed pattern header");
            std::string extra;
            if (hs >> extra) throw std::invalid_argument(at + "trailing header fields");
            if (spec.h < 1 || spec.w < 1)
                throw std::invalid_argument(at + "pattern needs h >= 1 and w >= 1");
            if (spec.k < 1 || spec.k > kMaxColors)
                throw std::invalid_argument(at + "pattern needs between 1 and 9 colors");
            have_header = true;
            continue;
        }
        if (rows_seen == spec.h)
            throw std::invalid_argument(at + "more rows than the header declares");
        std::string row = line.substr(start);
        if (static_cast<int>(row.size()) != spec.w)
            throw std::invalid_argument(at + "row needs exactly " +
                                        std::to_string(spec.w) + " symbols");
        std::vector<int> values;
        for (char ch : row) {
            if (ch == '.') {
                values.push_back(0);
            } else if (ch >= '1' && ch <= '9') {
                int v = ch - '0';
                if (v > spec.k)
                    throw std::invalid_argument(at + "color '" + std::string(1, ch) +
                                                "' exceeds k=" + std::to_string(spec.k));
                values.push_back(v);
            } else {
                throw std::invalid_argument(at + "bad symbol '" + std::string(1, ch) +
                                            "' (want '.' or '1'..'9')");
            }
        }
        spec.cells.push_back(std::move(values));
        ++rows_seen;
    }
    if (!have_header) throw std::invalid_argument("pattern file has no header");
    if (rows_seen != spec.h)
        throw std::invalid_argument("pattern file declares " + std::to_string(spec.h) +
                                    " rows but has " + std::to_string(rows_seen));
    spec.validate();
    return spec;
}

std::string serialize_pattern(const PatternSpec& spec) {
    spec.validate();
    std::ostringstream out;
    out << "pattern " << spec.h << ' ' << spec.w << ' ' << spec.k << '\n';
    for (const auto& row : spec.cells) {
        for (int v : row) out << (v == 0 ? '.' : static_cast<char>('0' + v));
        out << '\n';
    }
    return out.str();
}

}  // namespace tiltlab
