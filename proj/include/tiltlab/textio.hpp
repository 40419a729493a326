#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tiltlab/core.hpp"

namespace tiltlab {

// Result of loading a configuration file. Pieces that the file declares
// separately but that touch with bonded labels are merged on load, so
// `config` is always merge-saturated; `piece_tiles` maps each file piece id
// to the tile ids it produced (single-cell pieces keep their id as the tile
// id, multi-cell pieces get fresh ids past the largest declared id).
struct ParsedConfig {
    Configuration config;
    std::map<int, std::vector<TileId>> piece_tiles;
};

struct ConfigParseError : std::runtime_error {
    int line;  // 1-based line number of the offending line
    ConfigParseError(const std::string& what, int line)
        : std::runtime_error(what), line(line) {}
};

// Format:
//   board <m> <n> <walled|open>
//   <n rows of '#'/'.', top row first (y = n)>
//   piece <id> <label-char> (x,y) (x,y)...
//   affinity <a> <b>
// Label '_' is the sand label; it may appear on pieces but not in affinity
// lines. Blank lines are ignored. Piece cells must be edge-connected.
ParsedConfig parse_config(std::string_view text);
ParsedConfig load_config(const std::filesystem::path& path);

// Emits the same format. Polyominoes are split into same-label connected
// chunks (one piece line each, ids renumbered from 1); loading the output
// reassembles them, so serialize/parse round-trips the canonical cell set.
std::string serialize_config(const Configuration& config);
void save_config(const Configuration& config, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tiltlab
