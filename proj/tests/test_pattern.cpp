#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tiltlab/pattern.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tiltlab/render.hpp"
#include "tiltlab/sequence.hpp"

using namespace tiltlab;

namespace {

PatternSpec make_spec(int h, int w, int k, std::vector<std::vector<int>> cells) {
    PatternSpec s;
    s.h = h;
    s.w = w;
    s.k = k;
    s.cells = std::move(cells);
    return s;
}

PatternSpec solid_spec(int h, int w, int k, int color = 1) {
    PatternSpec s;
    s.h = h;
    s.w = w;
    s.k = k;
    s.cells.assign(h, std::vector<int>(w, color));
    return s;
}

// The documented command cadence, restated independently of the compiler:
// per pixel (rows top-down, pixels right-to-left), one command per fuel item.
std::vector<TiltSequence> command_list(const PatternSpec& spec) {
    std::vector<TiltSequence> cmds;
    for (int r = 0; r < spec.h; ++r) {
        for (int c = spec.w - 1; c >= 0; --c) {
            const int pix = spec.at(r, c);
            for (int color = 1; color <= spec.k; ++color) {
                cmds.push_back(pix == color ? seq_add_tile() : seq_remove_tile());
                cmds.push_back(pix == 0 && color == spec.k ? seq_add_tile()
                                                           : seq_remove_tile());
            }
        }
        cmds.push_back(seq_add_line());
    }
    return cmds;
}

std::uint64_t expected_tilts(int h, int w, int k, bool released) {
    return static_cast<std::uint64_t>(h) * w * (10 * k - 1) + 4 * h + (released ? 2 : 0);
}

}  // namespace

TEST_CASE("pattern files parse, serialize and reject malformed input") {
    const std::string text = "pattern 2 3 2\n121\n2.1\n";
    PatternSpec spec = parse_pattern(text);
    CHECK(spec.h == 2);
    CHECK(spec.w == 3);
    CHECK(spec.k == 2);
    CHECK(spec.cells == std::vector<std::vector<int>>{{1, 2, 1}, {2, 0, 1}});
    CHECK(serialize_pattern(spec) == text);

    // Comments and blank lines are ignored.
    CHECK(parse_pattern("# target\n\npattern 1 1 1\n# row\n1\n").cells ==
          std::vector<std::vector<int>>{{1}});

    CHECK_THROWS_AS(parse_pattern(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("board 1 1 1\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("pattern 1 1\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("pattern 1 1 1 9\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("pattern 1 2 1\n1\n"), std::invalid_argument);   // short row
    CHECK_THROWS_AS(parse_pattern("pattern 1 1 1\n2\n"), std::invalid_argument);   // color > k
    CHECK_THROWS_AS(parse_pattern("pattern 1 1 1\nx\n"), std::invalid_argument);   // bad symbol
    CHECK_THROWS_AS(parse_pattern("pattern 2 1 1\n1\n"), std::invalid_argument);   // missing row
    CHECK_THROWS_AS(parse_pattern("pattern 1 1 1\n1\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_pattern("pattern 1 1 10\n1\n"), std::invalid_argument);
}

TEST_CASE("builder layout has the pinned dimensions and fuel inventory") {
    // The k=2 layout dimensions and fuel count are fixed quantities.
    BuilderLayout L = gen_pattern_builder(2, 3, 2, false);
    CHECK(L.board.width() == 31);   // 9w + 4
    CHECK(L.board.height() == 9);   // 2h + 5
    CHECK(L.initial.tile_count() == 24);  // 2khw
    int sticky = 0, sand = 0;
    for (const auto& poly : L.initial.polys) {
        REQUIRE(poly.tiles.size() == 1);
        (poly.tiles[0].label == kSand ? sand : sticky)++;
    }
    CHECK(sticky == 12);
    CHECK(sand == 12);

    // Queue order: tile ids follow the corridor path with alternating labels.
    for (int i = 0; i < 24; ++i) {
        const Tile* t = L.initial.find_tile(i + 1);
        REQUIRE(t != nullptr);
        CHECK(Cell{t->x, t->y} == L.fuel_path[i]);
        CHECK(t->label == L.fuel_order[i]);
        CHECK((i % 2 == 0) == (t->label != kSand));
    }
    // Corridor cells are distinct and open.
    std::set<std::pair<int, int>> seen;
    for (const Cell& c : L.fuel_path) {
        CHECK(L.board.open(c.x, c.y));
        CHECK(seen.insert({c.x, c.y}).second);
    }
    CHECK(L.chambers.count("fuel") == 1);
    CHECK(L.chambers.count("loading") == 1);
    CHECK(L.chambers.count("construction") == 1);

    BuilderLayout minimal = gen_pattern_builder(1, 1, 1, false);
    CHECK(minimal.board.width() == 9);
    CHECK(minimal.board.height() == 7);
    CHECK(minimal.initial.tile_count() == 2);

    // Release variant only grows the construction chamber.
    BuilderLayout rel = gen_pattern_builder(2, 3, 2, true);
    CHECK(rel.board.width() == 31);
    CHECK(rel.board.height() == 11);  // 3h + 5

    CHECK_THROWS_AS(gen_pattern_builder(0, 1, 1, false), std::invalid_argument);
    CHECK_THROWS_AS(gen_pattern_builder(1, 0, 1, false), std::invalid_argument);
    CHECK_THROWS_AS(gen_pattern_builder(1, 1, 10, false), std::invalid_argument);
}

TEST_CASE("command templates are the pinned atom lists") {
    CHECK(flatten(seq_add_tile()) ==
          std::vector<Direction>{Direction::E, Direction::N, Direction::E, Direction::S});
    CHECK(flatten(seq_remove_tile()) ==
          std::vector<Direction>{Direction::E, Direction::S, Direction::N, Direction::E,
                                 Direction::S});
    CHECK(flatten(seq_add_line()) ==
          std::vector<Direction>{Direction::W, Direction::N, Direction::E, Direction::S});
}

TEST_CASE("initial configuration is a rest pose") {
    auto specs = std::vector<PatternSpec>{
        solid_spec(1, 1, 1),
        solid_spec(2, 3, 2),
        make_spec(2, 2, 1, {{1, 0}, {1, 1}}),
        solid_spec(5, 1, 1),  // tall-narrow: approach pad and capacity growth
    };
    for (const PatternSpec& spec : specs) {
        CAPTURE(spec.h);
        CAPTURE(spec.w);
        BuilderLayout L = gen_pattern_builder(spec.h, spec.w, spec.k, false);
        // Settled: S and N change nothing.
        CHECK(same_configuration(tilt(L.initial, Direction::S), L.initial));
        CHECK(same_configuration(tilt(L.initial, Direction::N), L.initial));
        // Any single stray tilt before the build leaves the result unchanged:
        // E pre-seats the first fuel item (the first command's own E), W can
        // only shuffle the queue tail backwards along its own corridor.
        const bool shape = !spec.all_sticky();
        const TiltSequence seq =
            shape ? compile_shape_sequence(spec, L) : compile_pattern_sequence(spec, L);
        const auto want = apply_sequence(L.initial, seq).canonical_cells();
        for (Direction d : kAllDirections) {
            CAPTURE(to_char(d));
            Configuration pre = tilt(L.initial, d);
            CHECK(apply_sequence(pre, seq).canonical_cells() == want);
        }
    }
}

TEST_CASE("add, remove and line commands move exactly one fuel item") {
    PatternSpec spec = solid_spec(2, 2, 2);
    BuilderLayout L = gen_pattern_builder(2, 2, 2, false);
    const std::size_t fuel = L.initial.tile_count();

    auto tunnel_tiles = [&](const Configuration& c) {
        std::vector<Label> out;
        for (const auto& poly : c.polys)
            for (const Tile& t : poly.tiles)
                if (t.y == L.slot_row && t.x >= L.tunnel_x1) out.push_back(t.label);
        return out;
    };

    // Add tile: nothing leaves the board, one tile reaches the tunnel.
    Configuration cur = apply_sequence(L.initial, seq_add_tile());
    CHECK(cur.tile_count() == fuel);
    CHECK(tunnel_tiles(cur) == std::vector<Label>{'1'});

    // The following separator removal ejects exactly one sand tile.
    cur = apply_sequence(cur, seq_remove_tile());
    CHECK(cur.tile_count() == fuel - 1);
    CHECK(tunnel_tiles(cur) == std::vector<Label>{'1'});

    // Remove tile on a color item rejects it without touching the line.
    cur = apply_sequence(cur, seq_remove_tile());
    CHECK(cur.tile_count() == fuel - 2);
    CHECK(tunnel_tiles(cur) == std::vector<Label>{'1'});

    // Tile conservation through a full build: only Remove tile ever ejects,
    // and it ejects exactly one item (checked at every single tilt).
    cur = L.initial;
    std::size_t have = fuel;
    for (const TiltSequence& cmd : command_list(spec)) {
        const auto atoms = flatten(cmd);
        const bool removes = atoms.size() == 5 && atoms[1] == Direction::S;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            cur = tilt(cur, atoms[i]);
            const std::size_t expect = removes && i >= 1 ? have - 1 : have;
            CHECK(cur.tile_count() == expect);
        }
        if (removes) --have;
    }
    CHECK(have == static_cast<std::size_t>(spec.h) * spec.w);
}

TEST_CASE("single cell pattern builds to a single tile") {
    BuildResult res = build_pattern(solid_spec(1, 1, 1));
    CHECK(res.tilt_count == 13);
    CHECK_FALSE(res.shape_mode);
    REQUIRE(res.final_config.polys.size() == 1);
    const auto cells = res.final_config.canonical_cells();
    REQUIRE(cells.size() == 1);
    CHECK(cells[0] == std::tuple<int, int, Label>{5, 2, '1'});  // (y, x, label)
    CHECK(strongly_represents(res.final_config, {{0, 0}}));
}

TEST_CASE("all 64 binary 2x3 patterns build and strongly represent") {
    const std::vector<Cell> rect = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
    for (int mask = 0; mask < 64; ++mask) {
        CAPTURE(mask);
        PatternSpec spec = solid_spec(2, 3, 2);
        for (int i = 0; i < 6; ++i) spec.cells[i / 3][i % 3] = ((mask >> i) & 1) + 1;
        BuildResult res = build_pattern(spec);
        CHECK(res.layout.board.width() == 31);
        CHECK(res.layout.board.height() == 9);
        CHECK(res.layout.initial.tile_count() == 24);
        CHECK(res.tilt_count == 122);  // identical for every pattern of this size
        REQUIRE(res.final_config.polys.size() == 1);
        CHECK(strongly_represents(res.final_config, rect));
        std::vector<std::pair<int, Label>> symbols = {{1, '1'}, {2, '2'}};
        CHECK(represents_pattern(res.final_config, spec.cells, symbols));
        // Exact placement: west corner of the slot row, top pattern row on top.
        std::vector<std::tuple<int, int, Label>> want;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c)
                want.emplace_back(7 - r, 2 + c, static_cast<Label>('0' + spec.cells[r][c]));
        std::sort(want.begin(), want.end());
        CHECK(res.final_config.canonical_cells() == want);
    }
}

TEST_CASE("shape mode keeps sand pixels as lone helpers") {
    // Single cell in a 2x2 bounding box: three sand helpers survive.
    BuildResult res = build_pattern(make_spec(2, 2, 1, {{1, 0}, {0, 0}}));
    CHECK(res.shape_mode);
    CHECK(res.final_config.tile_count() == 4);
    CHECK(weakly_represents(res.final_config, {{0, 0}}));
    std::size_t sands = 0;
    for (const auto& poly : res.final_config.polys)
        if (poly.tiles.size() == 1 && poly.tiles[0].label == kSand) ++sands;
    CHECK(sands == 3);

    // L-tromino in a 2x2 box.
    res = build_pattern(make_spec(2, 2, 1, {{1, 0}, {1, 1}}));
    CHECK(weakly_represents(res.final_config, {{0, 0}, {0, 1}, {1, 0}}));
    CHECK(res.final_config.tile_count() == 4);
    // Don't-care matching tolerates the helpers wherever they settled.
    CHECK(represents_pattern(res.final_config, {{1, 0}, {1, 1}},
                             {{1, '1'}}));

    // A full rectangle through the shape path is also a strong representation.
    res = build_pattern(solid_spec(2, 2, 1));
    CHECK_FALSE(res.shape_mode);
    CHECK(strongly_represents(res.final_config, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}));

    BuilderLayout L = gen_pattern_builder(2, 2, 1, false);
    CHECK_THROWS_AS(
        compile_shape_sequence(make_spec(2, 2, 1, {{1, 0}, {0, 1}}), L),  // diagonal
        std::invalid_argument);
    CHECK_THROWS_AS(compile_shape_sequence(make_spec(2, 2, 1, {{0, 0}, {0, 0}}), L),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        compile_pattern_sequence(make_spec(2, 2, 1, {{1, 0}, {1, 1}}), L),  // sand pixel
        std::invalid_argument);
    CHECK_THROWS_AS(compile_pattern_sequence(solid_spec(3, 2, 1), L),  // dims mismatch
                    std::invalid_argument);
}

TEST_CASE("every connected shape within a 3x3 box builds") {
    int shapes = 0;
    for (int mask = 1; mask < 512; ++mask) {
        PatternSpec spec = make_spec(3, 3, 1, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
        std::vector<Cell> cells;
        for (int i = 0; i < 9; ++i)
            if ((mask >> i) & 1) {
                spec.cells[i / 3][i % 3] = 1;
                cells.push_back({i % 3, 2 - i / 3});
            }
        if (!cells_connected(cells)) continue;
        ++shapes;
        CAPTURE(mask);
        BuildResult res = build_pattern(spec);
        CHECK(weakly_represents(res.final_config, normalize_cells(cells)));
        CHECK(res.final_config.tile_count() == 9);
    }
    CHECK(shapes == 218);
}

TEST_CASE("random 3x3 patterned builds with up to three colors") {
    std::mt19937 rng(20260823);
    for (int t = 0; t < 200; ++t) {
        const int k = 1 + static_cast<int>(rng() % 3);
        PatternSpec spec = solid_spec(3, 3, k);
        for (auto& row : spec.cells)
            for (int& v : row) v = 1 + static_cast<int>(rng() % k);
        CAPTURE(t);
        BuildResult res = build_pattern(spec);
        REQUIRE(res.final_config.polys.size() == 1);
        std::vector<std::pair<int, Label>> symbols;
        for (int c = 1; c <= k; ++c) symbols.emplace_back(c, static_cast<Label>('0' + c));
        CHECK(represents_pattern(res.final_config, spec.cells, symbols));
        CHECK(res.tilt_count == expected_tilts(3, 3, k, false));
    }
}

TEST_CASE("release exit slides the finished assembly off the board") {
    PatternSpec spec = solid_spec(2, 3, 2);
    spec.cells = {{1, 2, 1}, {2, 1, 2}};
    BuildResult res = build_pattern(spec, true);
    CHECK(res.released);
    CHECK(res.layout.board.height() == 11);
    CHECK(res.final_config.polys.empty());  // assembly left through the west wall
    const auto dirs = flatten(res.sequence);
    REQUIRE(dirs.size() >= 2);
    CHECK(dirs[dirs.size() - 2] == Direction::N);
    CHECK(dirs.back() == Direction::W);
    CHECK(res.tilt_count == expected_tilts(2, 3, 2, true));

    // Shape mode: helpers leave with the assembly.
    BuildResult shape = build_pattern(make_spec(2, 2, 1, {{1, 0}, {1, 1}}), true);
    CHECK(shape.final_config.polys.empty());
}

TEST_CASE("fuel advance leaves finished rows in place") {
    PatternSpec spec = solid_spec(3, 2, 2);
    spec.cells = {{1, 2}, {2, 2}, {1, 1}};
    BuilderLayout L = gen_pattern_builder(3, 2, 2, false);
    Configuration cur = L.initial;
    int rows_done = 0;
    for (const TiltSequence& cmd : command_list(spec)) {
        const bool is_line = flatten(cmd).front() == Direction::W;
        cur = apply_sequence(cur, cmd);
        if (!is_line || ++rows_done == spec.h) continue;
        // Finished rows park on the construction ledge, east half, newest at
        // the bottom, and every later command leaves them there.
        std::vector<std::tuple<int, int, Label>> want;
        for (int r = 0; r < rows_done; ++r)
            for (int c = 0; c < spec.w; ++c)
                want.emplace_back(L.h + 5 + rows_done - r, spec.w + 2 + c,
                                  static_cast<Label>('0' + spec.cells[r][c]));
        std::sort(want.begin(), want.end());
        std::vector<std::tuple<int, int, Label>> got;
        for (const auto& poly : cur.polys)
            for (const Tile& t : poly.tiles)
                if (t.y > L.slot_row) got.emplace_back(t.y, t.x, t.label);
        std::sort(got.begin(), got.end());
        CHECK(got == want);
    }
    CHECK(strongly_represents(cur, {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}}));
}

TEST_CASE("tilt counts follow the closed form and the per-cell bound") {
    std::mt19937 rng(99);
    for (int t = 0; t < 25; ++t) {
        const int h = 1 + static_cast<int>(rng() % 4);
        const int w = 1 + static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % 3);
        const bool rel = t % 3 == 0;
        PatternSpec spec = solid_spec(h, w, k);
        for (auto& row : spec.cells)
            for (int& v : row) v = 1 + static_cast<int>(rng() % k);
        BuildResult res = build_pattern(spec, rel);
        CAPTURE(h);
        CAPTURE(w);
        CAPTURE(k);
        CHECK(res.tilt_count == expected_tilts(h, w, k, rel));
        CHECK(res.tilt_count <= kTiltCountPerCell * h * w * k);
    }
}

TEST_CASE("build results are deterministic") {
    PatternSpec spec = make_spec(2, 3, 2, {{2, 1, 2}, {1, 1, 2}});
    BuildResult a = build_pattern(spec);
    BuildResult b = build_pattern(spec);
    CHECK(serialize_sequence(a.sequence) == serialize_sequence(b.sequence));
    CHECK(same_configuration(a.final_config, b.final_config));
    CHECK(render_ascii(a.final_config) == render_ascii(b.final_config));
}
