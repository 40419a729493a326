#include "support/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tiltlab {

namespace {

struct FlatTile {
    TileId id;
    int x, y;
    Label label;
};

// Bonded components over the flat tile list (adjacent + affinity-1 labels).
std::vector<std::vector<int>> bonded_components(const std::vector<FlatTile>& tiles,
                                                const AffinityMap& g) {
    const int n = static_cast<int>(tiles.size());
    std::map<std::pair<int, int>, int> at;
    for (int i = 0; i < n; ++i) at[{tiles[i].x, tiles[i].y}] = i;

    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        int c = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            out[c].push_back(i);
            const int nx[4] = {0, 1, 0, -1}, ny[4] = {1, 0, -1, 0};
            for (int k = 0; k < 4; ++k) {
                auto it = at.find({tiles[i].x + nx[k], tiles[i].y + ny[k]});
                if (it == at.end() || comp[it->second] >= 0) continue;
                if (!g.bonded(tiles[i].label, tiles[it->second].label)) continue;
                comp[it->second] = c;
                stack.push_back(it->second);
            }
        }
    }
    return out;
}

}  // namespace

Configuration oracle_tilt(const Configuration& config, Direction d) {
    const Board& board = *config.board;
    const AffinityMap& g = *config.affinity;
    const int mx = dx(d), my = dy(d);
    const bool walled = board.edge_mode() == EdgeMode::Walled;

    std::vector<FlatTile> tiles;
    for (const Polyomino& p : config.polys)
        for (const Tile& t : p.tiles) tiles.push_back({t.id, t.x, t.y, t.label});

    int guard = 4 * (board.width() + board.height()) + 8;
    while (guard-- > 0) {
        auto comps = bonded_components(tiles, g);
        const int nc = static_cast<int>(comps.size());
        if (nc == 0) break;

        std::map<std::pair<int, int>, int> owner;
        for (int c = 0; c < nc; ++c)
            for (int i : comps[c]) owner[{tiles[i].x, tiles[i].y}] = c;

        // stuck(c) iff some chain of pushed-into pieces ends at a wall or
        // blocked cell: reachability in the "translated-onto" graph.
        std::vector<char> stuck(nc, 0);
        std::vector<std::vector<int>> pushes(nc);  // edges c -> pieces it lands on
        std::vector<int> queue;
        for (int c = 0; c < nc; ++c) {
            bool direct = false;
            for (int i : comps[c]) {
                int tx = tiles[i].x + mx, ty = tiles[i].y + my;
                if (!board.in_extent(tx, ty)) {
                    if (walled) direct = true;
                } else if (board.blocked(tx, ty)) {
                    direct = true;
                } else {
                    auto it = owner.find({tx, ty});
                    if (it != owner.end() && it->second != c)
                        pushes[c].push_back(it->second);
                }
            }
            if (direct) {
                stuck[c] = 1;
                queue.push_back(c);
            }
        }
        std::vector<std::vector<int>> pushed_by(nc);
        for (int c = 0; c < nc; ++c)
            for (int t : pushes[c]) pushed_by[t].push_back(c);
        while (!queue.empty()) {
            int c = queue.back();
            queue.pop_back();
            for (int p : pushed_by[c]) {
                if (!stuck[p]) {
                    stuck[p] = 1;
                    queue.push_back(p);
                }
            }
        }

        if (std::all_of(stuck.begin(), stuck.end(), [](char s) { return s != 0; }))
            break;

        std::vector<char> drop(tiles.size(), 0);
        for (int c = 0; c < nc; ++c) {
            if (stuck[c]) continue;
            bool exits = false;
            for (int i : comps[c]) {
                tiles[i].x += mx;
                tiles[i].y += my;
                if (!board.in_extent(tiles[i].x, tiles[i].y)) exits = true;
            }
            if (exits)
                for (int i : comps[c]) drop[i] = 1;
        }
        std::vector<FlatTile> kept;
        for (std::size_t i = 0; i < tiles.size(); ++i)
            if (!drop[i]) kept.push_back(tiles[i]);
        tiles = std::move(kept);
    }
    if (guard < 0) throw std::runtime_error("oracle tilt did not settle");

    Configuration out;
    out.board = config.board;
    out.affinity = config.affinity;
    for (const auto& comp : bonded_components(tiles, g)) {
        Polyomino p;
        for (int i : comp) p.tiles.push_back({tiles[i].id, tiles[i].x, tiles[i].y,
                                              tiles[i].label});
        out.polys.push_back(std::move(p));
    }
    out.canonicalize();
    return out;
}

namespace {

// Partition as a set of pieces, each the sorted full tile records.
std::set<std::vector<std::tuple<TileId, int, int, Label>>> partition_key(
    const Configuration& c) {
    std::set<std::vector<std::tuple<TileId, int, int, Label>>> key;
    for (const Polyomino& p : c.polys) {
        std::vector<std::tuple<TileId, int, int, Label>> piece;
        for (const Tile& t : p.tiles) piece.emplace_back(t.id, t.x, t.y, t.label);
        std::sort(piece.begin(), piece.end());
        key.insert(std::move(piece));
    }
    return key;
}

}  // namespace

bool oracle_matches(const Configuration& start, Direction d,
                    const Configuration& engine_result) {
    Configuration expect = oracle_tilt(start, d);
    return partition_key(expect) == partition_key(engine_result);
}

OracleCount exhaustive_oracle_check(int m, int n, const std::vector<Cell>& walls,
                                    int max_pieces, bool with_dominoes) {
    auto board = std::make_shared<Board>(m, n, EdgeMode::Walled);
    for (const Cell& w : walls) board->set_blocked(w.x, w.y);
    auto g = std::make_shared<AffinityMap>();
    g->add('a', 'a');

    struct Placement {
        std::vector<FlatTile> tiles;  // ids filled per config
        std::uint64_t mask;
    };
    auto bit = [&](int x, int y) {
        return std::uint64_t{1} << ((y - 1) * m + (x - 1));
    };
    std::vector<Placement> placements;
    for (const Cell& c : board->open_cells()) {
        placements.push_back({{{0, c.x, c.y, 'a'}}, bit(c.x, c.y)});
        placements.push_back({{{0, c.x, c.y, 'b'}}, bit(c.x, c.y)});
        if (!with_dominoes) continue;
        if (board->in_extent(c.x + 1, c.y) && board->open(c.x + 1, c.y))
            placements.push_back({{{0, c.x, c.y, 'a'}, {0, c.x + 1, c.y, 'a'}},
                                  bit(c.x, c.y) | bit(c.x + 1, c.y)});
        if (board->in_extent(c.x, c.y + 1) && board->open(c.x, c.y + 1))
            placements.push_back({{{0, c.x, c.y, 'a'}, {0, c.x, c.y + 1, 'a'}},
                                  bit(c.x, c.y) | bit(c.x, c.y + 1)});
    }

    OracleCount count;
    const int np = static_cast<int>(placements.size());
    std::vector<int> chosen;
    auto run_one = [&]() {
        Configuration c;
        c.board = board;
        c.affinity = g;
        TileId id = 1;
        for (int pi : chosen)
            for (const FlatTile& t : placements[pi].tiles)
                c.polys.push_back({{{id++, t.x, t.y, t.label}}});
        c = merge_bonded(c);
        for (Direction d : kAllDirections) {
            Configuration fast = tilt(c, d);
            ++count.checked;
            if (!oracle_matches(c, d, fast)) ++count.mismatches;
        }
    };
    // All index combinations of 1..max_pieces placements with disjoint cells.
    auto recurse = [&](auto&& self, int start, std::uint64_t used) -> void {
        if (!chosen.empty()) run_one();
        if (static_cast<int>(chosen.size()) == max_pieces) return;
        for (int i = start; i < np; ++i) {
            if (placements[i].mask & used) continue;
            chosen.push_back(i);
            self(self, i + 1, used | placements[i].mask);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0, 0);
    return count;
}

}  // namespace tiltlab
