#include "tiltlab/render.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace tiltlab {

std::string render_ascii(const Configuration& config) {
    const Board& board = *config.board;
    std::vector<std::string> rows(board.height(),
                                  std::string(board.width(), '.'));
    auto glyph = [&](int x, int y) -> char& {
        return rows[static_cast<std::size_t>(board.height() - y)]
                   [static_cast<std::size_t>(x - 1)];
    };
    for (const Cell& c : board.blocked_cells()) glyph(c.x, c.y) = '#';
    for (const Polyomino& p : config.polys)
        for (const Tile& t : p.tiles) glyph(t.x, t.y) = t.label;
    std::string out;
    for (const std::string& row : rows) {
        out += row;
        out += '\n';
    }
    return out;
}

namespace {

std::string default_color(Label label) {
    if (label == kSand) return "#d0c8b8";
    // Deterministic hue from the label character.
    static const char* kCycle[] = {"#4878cf", "#d65f5f", "#6acc65", "#b47cc7",
                                   "#c4ad66", "#77bedb", "#ee854a", "#8c613c"};
    return kCycle[static_cast<unsigned char>(label) % 8];
}

}  // namespace

std::string render_svg(const Configuration& config, const RenderOptions& options) {
    const Board& board = *config.board;
    const int s = options.cell_px;
    const int w = board.width() * s, h = board.height() * s;
    // SVG y grows downward; board y grows upward.
    auto px = [&](int x) { return (x - 1) * s; };
    auto py = [&](int y) { return (board.height() - y) * s; };
    auto color = [&](Label l) {
        auto it = options.palette.find(l);
        return it != options.palette.end() ? it->second : default_color(l);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h
        << "\" fill=\"#ffffff\"/>\n";
    for (const Cell& c : board.blocked_cells())
        out << "<rect x=\"" << px(c.x) << "\" y=\"" << py(c.y) << "\" width=\""
            << s << "\" height=\"" << s << "\" fill=\"#3a3a3a\"/>\n";
    // Grid lines.
    out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (int x = 0; x <= board.width(); ++x)
        out << "<line x1=\"" << x * s << "\" y1=\"0\" x2=\"" << x * s
            << "\" y2=\"" << h << "\"/>\n";
    for (int y = 0; y <= board.height(); ++y)
        out << "<line x1=\"0\" y1=\"" << y * s << "\" x2=\"" << w << "\" y2=\""
            << y * s << "\"/>\n";
    out << "</g>\n";

    Configuration canon = config;
    canon.canonicalize();
    const int inset = std::max(1, s / 12);
    for (const Polyomino& p : canon.polys) {
        for (const Tile& t : p.tiles) {
            out << "<rect x=\"" << px(t.x) + inset << "\" y=\"" << py(t.y) + inset
                << "\" width=\"" << s - 2 * inset << "\" height=\""
                << s - 2 * inset << "\" rx=\"" << s / 8 << "\" fill=\""
                << color(t.label) << "\"/>\n";
            if (s >= 14)
                out << "<text x=\"" << px(t.x) + s / 2 << "\" y=\""
                    << py(t.y) + s / 2 + s / 6 << "\" font-size=\"" << s / 2
                    << "\" text-anchor=\"middle\" font-family=\"monospace\">"
                    << t.label << "</text>\n";
        }
        // Thick strokes across bonded shared edges inside the piece.
        out << "<g stroke=\"#222222\" stroke-width=\"" << std::max(2, s / 6)
            << "\" stroke-linecap=\"round\">\n";
        for (const Tile& a : p.tiles)
            for (const Tile& b : p.tiles) {
                if (!(a.x < b.x || (a.x == b.x && a.y < b.y))) continue;
                if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) continue;
                if (!config.affinity->bonded(a.label, b.label)) continue;
                // Midpoint segment across the shared edge.
                int cx = (px(a.x) + px(b.x)) / 2 + s / 2;
                int cy = (py(a.y) + py(b.y)) / 2 + s / 2;
                if (a.y == b.y)
                    out << "<line x1=\"" << cx << "\" y1=\"" << cy - s / 5
                        << "\" x2=\"" << cx << "\" y2=\"" << cy + s / 5 << "\"/>\n";
                else
                    out << "<line x1=\"" << cx - s / 5 << "\" y1=\"" << cy
                        << "\" x2=\"" << cx + s / 5 << "\" y2=\"" << cy << "\"/>\n";
            }
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render(const Configuration& config, const RenderOptions& options) {
    return options.format == RenderOptions::Format::Svg
               ? render_svg(config, options)
               : render_ascii(config);
}

}  // namespace tiltlab
