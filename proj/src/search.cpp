#include "tiltlab/search.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

namespace tiltlab {

namespace {

constexpr std::uint32_t kTrackedTag = 0xFF000000u;

std::uint32_t pack_cell(int x, int y, Label label) {
    return (static_cast<std::uint32_t>(x) << 20) |
           (static_cast<std::uint32_t>(y) << 8) |
           static_cast<std::uint8_t>(label);
}

}  // namespace

PackedConfig pack_config(const Configuration& config) {
    PackedConfig out;
    out.reserve(config.tile_count());
    for (const Polyomino& p : config.polys)
        for (const Tile& t : p.tiles) {
            if (t.x > 0xFFF || t.y > 0xFFF)
                throw std::length_error("board too large for packed search states");
            out.push_back(pack_cell(t.x, t.y, t.label));
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t pack_tracked_cell(int x, int y) {
    return kTrackedTag | (static_cast<std::uint32_t>(x) << 12) |
           static_cast<std::uint32_t>(y);
}

std::uint64_t hash_packed(const PackedConfig& packed) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (std::uint32_t w : packed) {
        for (int b = 0; b < 4; ++b) {
            h ^= (w >> (8 * b)) & 0xFF;
            h *= 1099511628211ull;
        }
    }
    return h;
}

Configuration unpack_config(const BoardPtr& board, const AffinityPtr& affinity,
                            const PackedConfig& packed) {
    Configuration c;
    c.board = board;
    c.affinity = affinity;
    int tracked_x = -1, tracked_y = -1;
    for (std::uint32_t w : packed)
        if ((w & kTrackedTag) == kTrackedTag) {
            tracked_x = static_cast<int>((w >> 12) & 0xFFF);
            tracked_y = static_cast<int>(w & 0xFFF);
        }
    TileId next_id = 2;
    for (std::uint32_t w : packed) {
        if ((w & kTrackedTag) == kTrackedTag) continue;
        Tile t;
        t.x = static_cast<int>(w >> 20);
        t.y = static_cast<int>((w >> 8) & 0xFFF);
        t.label = static_cast<Label>(w & 0xFF);
        t.id = (t.x == tracked_x && t.y == tracked_y) ? 1 : next_id++;
        c.polys.push_back({{t}});
    }
    return merge_bonded(c);
}

long ConfigGraph::edge_count() const {
    long total = 0;
    for (const Node& n : nodes)
        for (std::int32_t t : n.next)
            if (t >= 0) ++total;
    return total;
}

int ConfigGraph::depth() const {
    std::vector<int> dist(nodes.size(), -1);
    std::deque<std::int32_t> queue{0};
    dist[0] = 0;
    int best = 0;
    while (!queue.empty()) {
        std::int32_t i = queue.front();
        queue.pop_front();
        for (std::int32_t t : nodes[i].next) {
            if (t < 0 || dist[t] >= 0) continue;
            dist[t] = dist[i] + 1;
            best = std::max(best, dist[t]);
            queue.push_back(t);
        }
    }
    return best;
}

std::vector<Direction> ConfigGraph::path_to(std::int32_t node) const {
    std::vector<Direction> path;
    while (node > 0) {
        path.push_back(static_cast<Direction>(nodes[node].parent_dir));
        node = nodes[node].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

// Visited map from packed form to node index, with full comparison on hash
// collisions.
class VisitedSet {
public:
    // Returns the node index, inserting `idx` when the state is new;
    // `is_new` reports which happened.
    std::int32_t find_or_insert(const PackedConfig& packed, std::int32_t idx,
                                const std::vector<ConfigGraph::Node>& nodes,
                                bool& is_new) {
        auto& bucket = map_[hash_packed(packed)];
        for (std::int32_t i : bucket)
            if (nodes[i].packed == packed) {
                is_new = false;
                return i;
            }
        bucket.push_back(idx);
        is_new = true;
        return idx;
    }

private:
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> map_;
};

}  // namespace

ConfigGraph create_tree(const Configuration& start,
                        const std::vector<NodeFlagger>& flaggers,
                        long node_budget) {
    if (flaggers.size() > 32)
        throw std::invalid_argument("at most 32 node flaggers supported");
    ConfigGraph g;
    g.board = start.board;
    g.affinity = start.affinity;

    Configuration root = start;
    root.canonicalize();
    VisitedSet visited;

    auto add_node = [&](const PackedConfig& packed,
                        const Configuration& config) -> std::int32_t {
        ConfigGraph::Node node;
        node.packed = packed;
        for (std::size_t i = 0; i < flaggers.size(); ++i)
            if (flaggers[i](config)) node.flags |= 1u << i;
        g.nodes.push_back(std::move(node));
        return static_cast<std::int32_t>(g.nodes.size()) - 1;
    };

    {
        PackedConfig packed = pack_config(root);
        std::int32_t idx = add_node(packed, root);
        bool is_new = false;
        visited.find_or_insert(g.nodes[idx].packed, idx, g.nodes, is_new);
    }

    std::vector<std::int32_t> stack{0};
    std::vector<char> expanded{0};
    while (!stack.empty()) {
        std::int32_t idx = stack.back();
        stack.pop_back();
        if (expanded[idx]) continue;
        expanded[idx] = 1;
        Configuration here = unpack_config(g.board, g.affinity, g.nodes[idx].packed);
        // Reverse direction order so the stack pops N,E,S,W first.
        for (int di = 3; di >= 0; --di) {
            Direction d = kAllDirections[di];
            Configuration next = tilt(here, d);
            PackedConfig packed = pack_config(next);
            bool is_new = false;
            std::int32_t target = visited.find_or_insert(
                packed, static_cast<std::int32_t>(g.nodes.size()), g.nodes, is_new);
            if (is_new) {
                if (static_cast<long>(g.nodes.size()) >= node_budget)
                    throw BudgetExceeded("configuration tree exceeds node budget");
                target = add_node(packed, next);
                g.nodes[target].parent = idx;
                g.nodes[target].parent_dir = static_cast<std::int8_t>(d);
                expanded.push_back(0);
                stack.push_back(target);
            }
            g.nodes[idx].next[static_cast<int>(d)] = target;
        }
    }
    return g;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "solved";
        case SolveStatus::Unsolvable: return "unsolvable";
        case SolveStatus::Exhausted: return "exhausted";
    }
    return "?";
}

namespace {

// Shared BFS over tilts. `augment` appends tracking words to the packed
// state; `accept` decides success on the unpacked configuration.
SolveResult bfs_solve(const Configuration& start,
                      const std::function<void(const Configuration&, PackedConfig&)>& augment,
                      const std::function<bool(const Configuration&)>& accept,
                      long budget) {
    struct Rec {
        PackedConfig packed;
        std::int32_t parent;
        std::int8_t dir;
    };
    std::vector<Rec> nodes;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> visited;

    auto find_or_insert = [&](const PackedConfig& packed, bool& is_new) {
        auto& bucket = visited[hash_packed(packed)];
        for (std::int32_t i : bucket)
            if (nodes[i].packed == packed) {
                is_new = false;
                return i;
            }
        is_new = true;
        bucket.push_back(static_cast<std::int32_t>(nodes.size()));
        return static_cast<std::int32_t>(nodes.size());
    };

    SolveResult result;
    auto finish = [&](std::int32_t idx) {
        result.status = SolveStatus::Solved;
        std::vector<Direction> path;
        while (idx > 0) {
            path.push_back(static_cast<Direction>(nodes[idx].dir));
            idx = nodes[idx].parent;
        }
        std::reverse(path.begin(), path.end());
        result.witness = std::move(path);
    };

    Configuration root = start;
    root.canonicalize();
    {
        PackedConfig packed = pack_config(root);
        augment(root, packed);
        bool is_new = false;
        find_or_insert(packed, is_new);
        nodes.push_back({std::move(packed), -1, -1});
        result.nodes_discovered = 1;
        if (accept(root)) {
            finish(0);
            return result;
        }
    }

    std::deque<std::int32_t> queue{0};
    while (!queue.empty()) {
        if (result.nodes_expanded >= budget) {
            result.status = SolveStatus::Exhausted;
            return result;
        }
        std::int32_t idx = queue.front();
        queue.pop_front();
        ++result.nodes_expanded;
        Configuration here = unpack_config(start.board, start.affinity,
                                           nodes[idx].packed);
        for (Direction d : kAllDirections) {
            Configuration next = tilt(here, d);
            PackedConfig packed = pack_config(next);
            augment(next, packed);
            bool is_new = false;
            std::int32_t target = find_or_insert(packed, is_new);
            if (!is_new) continue;
            nodes.push_back({std::move(packed), idx, static_cast<std::int8_t>(d)});
            ++result.nodes_discovered;
            if (accept(next)) {
                finish(target);
                return result;
            }
            queue.push_back(target);
        }
    }
    result.status = SolveStatus::Unsolvable;
    return result;
}

bool any_tile_at(const Configuration& c, Cell target) {
    for (const Polyomino& p : c.polys)
        if (p.contains(target.x, target.y)) return true;
    return false;
}

}  // namespace

SolveResult solve_occupancy(const Configuration& start, Cell target, long budget) {
    if (!start.board->in_extent(target.x, target.y) ||
        start.board->blocked(target.x, target.y))
        throw std::invalid_argument("occupancy target must be an open cell");
    auto no_augment = [](const Configuration&, PackedConfig&) {};
    auto accept = [&](const Configuration& c) { return any_tile_at(c, target); };
    SolveResult r = bfs_solve(start, no_augment, accept, budget);
    if (r.status == SolveStatus::Solved &&
        !any_tile_at(apply_sequence(start, r.witness), target))
        throw std::logic_error("occupancy witness failed replay");
    return r;
}

SolveResult solve_relocation(const Configuration& start, TileId tracked,
                             Cell target, long budget) {
    if (!start.board->in_extent(target.x, target.y) ||
        start.board->blocked(target.x, target.y))
        throw std::invalid_argument("relocation target must be an open cell");
    if (start.find_tile(tracked) == nullptr)
        throw std::invalid_argument("tracked tile id not present");

    // unpack_config re-assigns id 1 to the tile at the tracked position, so
    // normalize the start to track id 1 throughout: swap ids if needed.
    Configuration root = start;
    if (tracked != 1) {
        for (Polyomino& p : root.polys)
            for (Tile& t : p.tiles) {
                if (t.id == 1)
                    t.id = tracked;
                else if (t.id == tracked)
                    t.id = 1;
            }
    }

    auto augment = [&](const Configuration& c, PackedConfig& packed) {
        if (const Tile* t = c.find_tile(1))
            packed.push_back(pack_tracked_cell(t->x, t->y));
    };
    auto accept = [&](const Configuration& c) {
        const Tile* t = c.find_tile(1);
        return t != nullptr && t->x == target.x && t->y == target.y;
    };
    SolveResult r = bfs_solve(root, augment, accept, budget);
    if (r.status == SolveStatus::Solved) {
        Configuration end = apply_sequence(start, r.witness);
        const Tile* t = end.find_tile(tracked);
        if (t == nullptr || t->x != target.x || t->y != target.y)
            throw std::logic_error("relocation witness failed replay");
    }
    return r;
}

SolveResult solve_reconfiguration(const Configuration& start,
                                  const Configuration& goal, long budget) {
    SolveResult r;
    if (!(start.board == goal.board || *start.board == *goal.board))
        return r;  // different arena: unsolvable
    if (start.board->edge_mode() == EdgeMode::Walled) {
        // Tiles are conserved on walled boards: label multisets must match.
        auto labels = [](const Configuration& c) {
            std::vector<Label> out;
            for (const Polyomino& p : c.polys)
                for (const Tile& t : p.tiles) out.push_back(t.label);
            std::sort(out.begin(), out.end());
            return out;
        };
        if (labels(start) != labels(goal)) return r;
    }
    PackedConfig want = pack_config(goal);
    auto no_augment = [](const Configuration&, PackedConfig&) {};
    auto accept = [&](const Configuration& c) { return pack_config(c) == want; };
    r = bfs_solve(start, no_augment, accept, budget);
    if (r.status == SolveStatus::Solved &&
        pack_config(apply_sequence(start, r.witness)) != want)
        throw std::logic_error("reconfiguration witness failed replay");
    return r;
}

}  // namespace tiltlab
