#pragma once

#include <map>
#include <string>

#include "tiltlab/core.hpp"

namespace tiltlab {

struct RenderOptions {
    enum class Format { Ascii, Svg };
    Format format = Format::Ascii;
    int cell_px = 24;
    // Label colors for SVG; labels not listed fall back to a deterministic
    // built-in palette.
    std::map<Label, std::string> palette;
};

// Board grid with tiles overlaid by their label characters; rows printed
// top (y = n) to bottom, '#' blocked, '.' open.
std::string render_ascii(const Configuration& config);

// Standalone SVG: blocked cells, grid, tiles colored by palette, bonded
// shared edges drawn thick. Byte-stable for fixed input and options.
std::string render_svg(const Configuration& config, const RenderOptions& options = {});

std::string render(const Configuration& config, const RenderOptions& options);

}  // namespace tiltlab
