#include "tiltlab/core.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <unordered_set>

namespace tiltlab {

std::optional<Direction> direction_from_char(char c) {
    switch (c) {
        case 'N': case 'n': return Direction::N;
        case 'E': case 'e': return Direction::E;
        case 'S': case 's': return Direction::S;
        case 'W': case 'w': return Direction::W;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// AffinityMap

void AffinityMap::add(Label a, Label b) {
    if (a == kSand || b == kSand)
        throw std::invalid_argument("affinity pairs may not name the sand label");
    if (bonded(a, b)) return;
    table_[idx(a)][idx(b)] = true;
    table_[idx(b)][idx(a)] = true;
    pairs_.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(pairs_.begin(), pairs_.end());
}

std::vector<std::pair<Label, Label>> AffinityMap::pairs() const { return pairs_; }

// ---------------------------------------------------------------------------
// Board

Board::Board(int m, int n, EdgeMode mode) : m_(m), n_(n), mode_(mode) {
    if (m < 1 || n < 1) throw std::invalid_argument("board dimensions must be positive");
    blocked_.assign(static_cast<std::size_t>(m) * n, 0);
}

void Board::set_blocked(int x, int y, bool value) {
    blocked_[index(x, y)] = value ? 1 : 0;
}

void Board::wall_perimeter() {
    for (int x = 1; x <= m_; ++x) {
        set_blocked(x, 1);
        set_blocked(x, n_);
    }
    for (int y = 1; y <= n_; ++y) {
        set_blocked(1, y);
        set_blocked(m_, y);
    }
}

std::size_t Board::open_count() const {
    return blocked_.size() - std::count(blocked_.begin(), blocked_.end(), 1);
}

std::vector<Cell> Board::open_cells() const {
    std::vector<Cell> out;
    for (int y = 1; y <= n_; ++y)
        for (int x = 1; x <= m_; ++x)
            if (open(x, y)) out.push_back({x, y});
    return out;
}

std::vector<Cell> Board::blocked_cells() const {
    std::vector<Cell> out;
    for (int y = 1; y <= n_; ++y)
        for (int x = 1; x <= m_; ++x)
            if (blocked(x, y)) out.push_back({x, y});
    return out;
}

// ---------------------------------------------------------------------------
// Polyomino / Configuration

Cell Polyomino::min_cell() const {
    Cell best{0, 0};
    bool first = true;
    for (const Tile& t : tiles) {
        Cell c{t.x, t.y};
        if (first || c < best) {
            best = c;
            first = false;
        }
    }
    return best;
}

std::vector<Cell> Polyomino::cells() const {
    std::vector<Cell> out;
    out.reserve(tiles.size());
    for (const Tile& t : tiles) out.push_back({t.x, t.y});
    return out;
}

bool Polyomino::contains(int x, int y) const {
    for (const Tile& t : tiles)
        if (t.x == x && t.y == y) return true;
    return false;
}

void Configuration::canonicalize() {
    for (Polyomino& p : polys) {
        std::sort(p.tiles.begin(), p.tiles.end(), [](const Tile& a, const Tile& b) {
            return Cell{a.x, a.y} < Cell{b.x, b.y};
        });
    }
    std::sort(polys.begin(), polys.end(), [](const Polyomino& a, const Polyomino& b) {
        return a.min_cell() < b.min_cell();
    });
}

std::vector<std::tuple<int, int, Label>> Configuration::canonical_cells() const {
    std::vector<std::tuple<int, int, Label>> out;
    out.reserve(tile_count());
    for (const Polyomino& p : polys)
        for (const Tile& t : p.tiles) out.emplace_back(t.y, t.x, t.label);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Configuration::tile_count() const {
    std::size_t n = 0;
    for (const Polyomino& p : polys) n += p.tiles.size();
    return n;
}

const Tile* Configuration::find_tile(TileId id) const {
    for (const Polyomino& p : polys)
        for (const Tile& t : p.tiles)
            if (t.id == id) return &t;
    return nullptr;
}

namespace {

bool adjacent(const Tile& a, const Tile& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1;
}

// Connectivity over a tile list, edges given by `joined`.
template <typename Joined>
bool tiles_connected(const std::vector<Tile>& tiles, Joined joined) {
    if (tiles.empty()) return false;
    std::vector<char> seen(tiles.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < tiles.size(); ++j) {
            if (!seen[j] && joined(tiles[i], tiles[j])) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == tiles.size();
}

}  // namespace

void Configuration::validate() const {
    if (!board) throw std::runtime_error("configuration has no board");
    if (!affinity) throw std::runtime_error("configuration has no affinity map");
    std::set<Cell> used;
    std::unordered_set<TileId> ids;
    for (const Polyomino& p : polys) {
        if (p.tiles.empty()) throw std::runtime_error("empty polyomino");
        for (const Tile& t : p.tiles) {
            if (!board->in_extent(t.x, t.y))
                throw std::runtime_error("tile outside the board extent");
            if (board->blocked(t.x, t.y))
                throw std::runtime_error("tile on a blocked cell");
            if (!used.insert({t.x, t.y}).second)
                throw std::runtime_error("overlapping tiles");
            if (!ids.insert(t.id).second)
                throw std::runtime_error("duplicate tile id");
        }
        if (!tiles_connected(p.tiles, adjacent))
            throw std::runtime_error("polyomino not edge-connected");
        auto bonded_adj = [&](const Tile& a, const Tile& b) {
            return adjacent(a, b) && affinity->bonded(a.label, b.label);
        };
        if (!tiles_connected(p.tiles, bonded_adj))
            throw std::runtime_error("polyomino not bond-connected");
    }
    // Merge saturation: adjacent bonded tiles must share a polyomino.
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i + 1; j < polys.size(); ++j)
            for (const Tile& a : polys[i].tiles)
                for (const Tile& b : polys[j].tiles)
                    if (adjacent(a, b) && affinity->bonded(a.label, b.label))
                        throw std::runtime_error("configuration not merge-saturated");
}

bool same_configuration(const Configuration& a, const Configuration& b) {
    if (!a.board || !b.board || !a.affinity || !b.affinity) return false;
    if (!(a.board == b.board || *a.board == *b.board)) return false;
    if (!(a.affinity == b.affinity || *a.affinity == *b.affinity)) return false;
    return a.canonical_cells() == b.canonical_cells();
}

// ---------------------------------------------------------------------------
// Dynamics

Configuration merge_bonded(const Configuration& config) {
    const std::size_t n = config.polys.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    // Occupancy map for O(tiles) adjacency probing.
    const Board& board = *config.board;
    std::vector<int> owner(static_cast<std::size_t>(board.width()) * board.height(), -1);
    auto at = [&](int x, int y) -> int& {
        return owner[static_cast<std::size_t>(y - 1) * board.width() + (x - 1)];
    };
    for (std::size_t i = 0; i < n; ++i)
        for (const Tile& t : config.polys[i].tiles) at(t.x, t.y) = static_cast<int>(i);

    for (std::size_t i = 0; i < n; ++i) {
        for (const Tile& t : config.polys[i].tiles) {
            for (Direction d : kAllDirections) {
                int nx = t.x + dx(d), ny = t.y + dy(d);
                if (!board.in_extent(nx, ny)) continue;
                int j = at(nx, ny);
                if (j < 0 || static_cast<std::size_t>(j) == i) continue;
                // Find the specific neighbor tile to test labels.
                for (const Tile& u : config.polys[j].tiles) {
                    if (u.x == nx && u.y == ny) {
                        if (config.affinity->bonded(t.label, u.label))
                            unite(i, static_cast<std::size_t>(j));
                        break;
                    }
                }
            }
        }
    }

    Configuration out;
    out.board = config.board;
    out.affinity = config.affinity;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.polys.size());
            out.polys.emplace_back();
        }
        Polyomino& target = out.polys[static_cast<std::size_t>(slot[r])];
        target.tiles.insert(target.tiles.end(), config.polys[i].tiles.begin(),
                            config.polys[i].tiles.end());
    }
    out.canonicalize();
    return out;
}

namespace {

// Fixpoint of the freezing relation for direction d. Returns the frozen
// flags; all-frozen means the configuration is d-terminal for this step.
std::vector<char> freeze_fixpoint(const Configuration& config, Direction d) {
    const Board& board = *config.board;
    const std::size_t n = config.polys.size();
    std::vector<char> frozen(n, 0);

    std::vector<int> owner(static_cast<std::size_t>(board.width()) * board.height(), -1);
    auto at = [&](int x, int y) {
        return owner[static_cast<std::size_t>(y - 1) * board.width() + (x - 1)];
    };
    for (std::size_t i = 0; i < n; ++i)
        for (const Tile& t : config.polys[i].tiles)
            owner[board.index(t.x, t.y)] = static_cast<int>(i);

    const int ddx = dx(d), ddy = dy(d);
    const bool walled = board.edge_mode() == EdgeMode::Walled;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (frozen[i]) continue;
            bool stuck = false;
            for (const Tile& t : config.polys[i].tiles) {
                int nx = t.x + ddx, ny = t.y + ddy;
                if (!board.in_extent(nx, ny)) {
                    // Walled boards block at the edge; open boards let the
                    // polyomino run off (it is removed after the move).
                    if (walled) stuck = true;
                } else if (board.blocked(nx, ny)) {
                    stuck = true;
                } else {
                    int j = at(nx, ny);
                    // Unfrozen polyominoes translate in lockstep and never
                    // block each other.
                    if (j >= 0 && static_cast<std::size_t>(j) != i && frozen[j])
                        stuck = true;
                }
                if (stuck) break;
            }
            if (stuck) {
                frozen[i] = 1;
                changed = true;
            }
        }
    }
    return frozen;
}

}  // namespace

Configuration step(const Configuration& config, Direction d) {
    std::vector<char> frozen = freeze_fixpoint(config, d);
    if (std::all_of(frozen.begin(), frozen.end(), [](char f) { return f != 0; }))
        return config;

    const Board& board = *config.board;
    const int ddx = dx(d), ddy = dy(d);
    Configuration moved;
    moved.board = config.board;
    moved.affinity = config.affinity;
    moved.polys.reserve(config.polys.size());
    for (std::size_t i = 0; i < config.polys.size(); ++i) {
        if (frozen[i]) {
            moved.polys.push_back(config.polys[i]);
            continue;
        }
        Polyomino p = config.polys[i];
        bool exited = false;
        for (Tile& t : p.tiles) {
            t.x += ddx;
            t.y += ddy;
            if (!board.in_extent(t.x, t.y)) exited = true;
        }
        // Whole-polyomino removal on exit; only possible on open boards.
        if (exited) {
            assert(board.edge_mode() == EdgeMode::Open);
            continue;
        }
        moved.polys.push_back(std::move(p));
    }
    return merge_bonded(moved);
}

bool is_terminal(const Configuration& config, Direction d) {
    std::vector<char> frozen = freeze_fixpoint(config, d);
    return std::all_of(frozen.begin(), frozen.end(), [](char f) { return f != 0; });
}

Configuration tilt(const Configuration& config, Direction d) {
    const Board& board = *config.board;
    const int bound = std::max(board.width(), board.height());
    Configuration current = config;
    int moving_steps = 0;
    while (!is_terminal(current, d)) {
        current = step(current, d);
        ++moving_steps;
        if (board.edge_mode() == EdgeMode::Walled) {
            // A polyomino still moving after k steps has net displacement k,
            // so walled boards settle within max(m,n) steps.
            assert(moving_steps <= bound && "tilt exceeded the walled progress bound");
            if (moving_steps > bound)
                throw std::runtime_error("tilt failed to settle within the walled bound");
        } else if (moving_steps > 2 * bound + 2) {
            throw std::runtime_error("tilt failed to settle on an open board");
        }
    }
    current.canonicalize();
    return current;
}

// ---------------------------------------------------------------------------
// Representation predicates

std::vector<Cell> normalize_cells(std::vector<Cell> cells) {
    if (cells.empty()) return cells;
    int mx = cells.front().x, my = cells.front().y;
    for (const Cell& c : cells) {
        mx = std::min(mx, c.x);
        my = std::min(my, c.y);
    }
    for (Cell& c : cells) {
        c.x -= mx;
        c.y -= my;
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

bool cells_connected(const std::vector<Cell>& cells) {
    if (cells.empty()) return false;
    std::set<Cell> all(cells.begin(), cells.end());
    std::vector<Cell> stack{cells.front()};
    std::set<Cell> seen{cells.front()};
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        for (Direction d : kAllDirections) {
            Cell nb{c.x + dx(d), c.y + dy(d)};
            if (all.count(nb) && !seen.count(nb)) {
                seen.insert(nb);
                stack.push_back(nb);
            }
        }
    }
    return seen.size() == all.size();
}

namespace {

std::vector<Cell> checked_shape(const std::vector<Cell>& shape) {
    std::vector<Cell> norm = normalize_cells(shape);
    if (norm.empty()) throw std::invalid_argument("shape is empty");
    if (!cells_connected(norm)) throw std::invalid_argument("shape is not connected");
    return norm;
}

}  // namespace

bool strongly_represents(const Configuration& config, const std::vector<Cell>& shape) {
    std::vector<Cell> want = checked_shape(shape);
    if (config.polys.size() != 1) return false;
    return normalize_cells(config.polys.front().cells()) == want;
}

bool weakly_represents(const Configuration& config, const std::vector<Cell>& shape) {
    // Exists p: p is a translation of the shape and every other polyomino is
    // a lone sand tile. With a single-cell shape a lone sand can itself be
    // the representative, so count the non-sand polyominoes first.
    std::vector<Cell> want = checked_shape(shape);
    const Polyomino* heavy = nullptr;
    std::size_t heavy_count = 0;
    bool sand_matches = false;
    for (const Polyomino& p : config.polys) {
        if (p.tiles.size() == 1 && p.tiles.front().label == kSand) {
            if (want.size() == 1) sand_matches = true;
            continue;
        }
        heavy = &p;
        ++heavy_count;
    }
    if (heavy_count > 1) return false;
    if (heavy_count == 1) return normalize_cells(heavy->cells()) == want;
    return sand_matches;
}

bool represents_pattern(const Configuration& config,
                        const std::vector<std::vector<int>>& grid,
                        const std::vector<std::pair<int, Label>>& symbol_map) {
    if (grid.empty() || grid.front().empty())
        throw std::invalid_argument("pattern grid is empty");
    const int h = static_cast<int>(grid.size());
    const int w = static_cast<int>(grid.front().size());
    for (const auto& row : grid)
        if (static_cast<int>(row.size()) != w)
            throw std::invalid_argument("pattern grid is ragged");

    // Injective symbol -> label map.
    std::vector<std::pair<int, Label>> map = symbol_map;
    std::sort(map.begin(), map.end());
    for (std::size_t i = 0; i + 1 < map.size(); ++i) {
        if (map[i].first == map[i + 1].first)
            throw std::invalid_argument("duplicate symbol in symbol map");
        if (map[i].second == map[i + 1].second)
            throw std::invalid_argument("symbol map is not injective");
    }
    auto label_for = [&](int sym) -> std::optional<Label> {
        for (const auto& [s, l] : map)
            if (s == sym) return l;
        return std::nullopt;
    };

    // Collect labeled tiles by position.
    std::set<std::pair<Cell, Label>> tiles;
    std::set<Cell> nonsand;
    for (const Polyomino& p : config.polys)
        for (const Tile& t : p.tiles) {
            tiles.insert({{t.x, t.y}, t.label});
            if (t.label != kSand) nonsand.insert({t.x, t.y});
        }

    const Board& board = *config.board;
    for (int ox = 1; ox + w - 1 <= board.width(); ++ox) {
        for (int oy = 1; oy + h - 1 <= board.height(); ++oy) {
            bool ok = true;
            for (int r = 0; r < h && ok; ++r) {
                for (int c = 0; c < w && ok; ++c) {
                    int sym = grid[r][c];
                    Cell pos{ox + c, oy + (h - 1 - r)};
                    if (sym == 0) continue;  // don't-care
                    std::optional<Label> want = label_for(sym);
                    if (!want) throw std::invalid_argument("pattern symbol missing from map");
                    if (!tiles.count({pos, *want})) ok = false;
                }
            }
            if (!ok) continue;
            // No stray non-sand tiles inside the bounding box.
            for (const Cell& c : nonsand) {
                if (c.x >= ox && c.x < ox + w && c.y >= oy && c.y < oy + h) {
                    int r = h - 1 - (c.y - oy);
                    int col = c.x - ox;
                    int sym = grid[r][col];
                    if (sym == 0) {
                        ok = false;
                        break;
                    }
                    std::optional<Label> want = label_for(sym);
                    if (!tiles.count({c, *want})) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

}  // namespace tiltlab
