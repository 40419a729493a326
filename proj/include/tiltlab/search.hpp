#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "tiltlab/core.hpp"
#include "tiltlab/sequence.hpp"

namespace tiltlab {

inline constexpr long kDefaultNodeBudget = 10'000'000;

// Compact canonical form: sorted ((x<<20)|(y<<8)|label) words, optionally
// followed by a tagged tracked-position word. Equal vectors ⇔ equal states.
using PackedConfig = std::vector<std::uint32_t>;

PackedConfig pack_config(const Configuration& config);
std::uint32_t pack_tracked_cell(int x, int y);
std::uint64_t hash_packed(const PackedConfig& packed);

// Rebuilds a configuration from its packed cells (any trailing tracked word
// is ignored): the piece partition is recovered as the bonded components.
// The tile at the tracked position, when given, receives id 1.
Configuration unpack_config(const BoardPtr& board, const AffinityPtr& affinity,
                            const PackedConfig& packed);

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reachable-configuration graph under the four tilts.
struct ConfigGraph {
    struct Node {
        PackedConfig packed;
        std::array<std::int32_t, 4> next{-1, -1, -1, -1};  // by Direction index
        std::uint32_t flags = 0;  // bit i = flaggers[i] held
        std::int32_t parent = -1;  // discovery tree
        std::int8_t parent_dir = -1;
    };
    BoardPtr board;
    AffinityPtr affinity;
    std::vector<Node> nodes;  // nodes[0] is the root

    long edge_count() const;
    // Longest shortest-path distance from the root.
    int depth() const;
    // Tilt sequence along the discovery tree from the root to a node.
    std::vector<Direction> path_to(std::int32_t node) const;
};

using NodeFlagger = std::function<bool(const Configuration&)>;

// Exhaustive expansion of every configuration reachable from `start`,
// depth-first with a visited set, children explored in N,E,S,W order.
// Throws BudgetExceeded past `node_budget` discovered nodes.
ConfigGraph create_tree(const Configuration& start,
                        const std::vector<NodeFlagger>& flaggers = {},
                        long node_budget = kDefaultNodeBudget);

enum class SolveStatus { Solved, Unsolvable, Exhausted };

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::Unsolvable;
    std::vector<Direction> witness;  // valid when Solved; shortest, N<E<S<W ties
    long nodes_expanded = 0;
    long nodes_discovered = 0;
};

// Can any tile reach the target cell? Throws std::invalid_argument if the
// target is outside the extent or blocked.
SolveResult solve_occupancy(const Configuration& start, Cell target,
                            long budget = kDefaultNodeBudget);

// Can the tile with this id reach the target cell? The search state is the
// canonical form plus the tracked tile's position.
SolveResult solve_relocation(const Configuration& start, TileId tracked,
                             Cell target, long budget = kDefaultNodeBudget);

// Can the whole configuration be driven to `goal` (canonical equality)?
SolveResult solve_reconfiguration(const Configuration& start,
                                  const Configuration& goal,
                                  long budget = kDefaultNodeBudget);

}  // namespace tiltlab
