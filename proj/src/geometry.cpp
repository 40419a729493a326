#include "tiltlab/geometry.hpp"

#include <algorithm>
#include <vector>

namespace tiltlab {

std::string to_string(GeometryClass c) {
    switch (c) {
        case GeometryClass::Disconnected: return "disconnected";
        case GeometryClass::Connected: return "connected";
        case GeometryClass::Simple: return "simple";
        case GeometryClass::MonotoneHorizontal: return "monotone-horizontal";
        case GeometryClass::MonotoneVertical: return "monotone-vertical";
        case GeometryClass::Convex: return "convex";
        case GeometryClass::Rectangular: return "rectangular";
    }
    return "?";
}

int geometry_rank(GeometryClass c) {
    switch (c) {
        case GeometryClass::Disconnected: return 0;
        case GeometryClass::Connected: return 1;
        case GeometryClass::Simple: return 2;
        case GeometryClass::MonotoneHorizontal:
        case GeometryClass::MonotoneVertical: return 3;
        case GeometryClass::Convex: return 4;
        case GeometryClass::Rectangular: return 5;
    }
    return -1;
}

int hole_count(const Board& board) {
    const int m = board.width(), n = board.height();
    // Flood the blocked set plus the surrounding ring with 8-connectivity,
    // starting outside; enclosed blocked components stay unreached.
    std::vector<char> reached(static_cast<std::size_t>(m + 2) * (n + 2), 0);
    auto ridx = [&](int x, int y) {  // x,y in 0..m+1 / 0..n+1
        return static_cast<std::size_t>(y) * (m + 2) + x;
    };
    auto dark = [&](int x, int y) {  // blocked or outside the extent
        return !board.in_extent(x, y) || board.blocked(x, y);
    };
    std::vector<std::pair<int, int>> stack{{0, 0}};
    reached[ridx(0, 0)] = 1;
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int ddx = -1; ddx <= 1; ++ddx)
            for (int ddy = -1; ddy <= 1; ++ddy) {
                int nx = x + ddx, ny = y + ddy;
                if (nx < 0 || nx > m + 1 || ny < 0 || ny > n + 1) continue;
                if (reached[ridx(nx, ny)] || !dark(nx, ny)) continue;
                reached[ridx(nx, ny)] = 1;
                stack.emplace_back(nx, ny);
            }
    }

    // Count 4-connected blocked components with no reached cell.
    std::vector<char> seen(static_cast<std::size_t>(m) * n, 0);
    int holes = 0;
    for (int y = 1; y <= n; ++y) {
        for (int x = 1; x <= m; ++x) {
            if (!board.blocked(x, y) || seen[board.index(x, y)] ||
                reached[ridx(x, y)])
                continue;
            ++holes;
            std::vector<std::pair<int, int>> comp{{x, y}};
            seen[board.index(x, y)] = 1;
            while (!comp.empty()) {
                auto [cx, cy] = comp.back();
                comp.pop_back();
                for (Direction d : kAllDirections) {
                    int nx = cx + dx(d), ny = cy + dy(d);
                    if (!board.in_extent(nx, ny) || !board.blocked(nx, ny)) continue;
                    if (seen[board.index(nx, ny)]) continue;
                    seen[board.index(nx, ny)] = 1;
                    comp.emplace_back(nx, ny);
                }
            }
        }
    }
    return holes;
}

namespace {

bool open_region_connected(const Board& board) {
    std::vector<Cell> open = board.open_cells();
    if (open.empty()) return false;
    std::vector<char> seen(static_cast<std::size_t>(board.width()) * board.height(), 0);
    std::vector<Cell> stack{open.front()};
    seen[board.index(open.front().x, open.front().y)] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        ++reached;
        for (Direction d : kAllDirections) {
            int nx = c.x + dx(d), ny = c.y + dy(d);
            if (!board.in_extent(nx, ny) || board.blocked(nx, ny)) continue;
            if (seen[board.index(nx, ny)]) continue;
            seen[board.index(nx, ny)] = 1;
            stack.push_back({nx, ny});
        }
    }
    return reached == open.size();
}

// Every row of the open region is one contiguous run.
bool rows_contiguous(const Board& board) {
    for (int y = 1; y <= board.height(); ++y) {
        int runs = 0;
        bool in_run = false;
        for (int x = 1; x <= board.width(); ++x) {
            if (board.open(x, y)) {
                if (!in_run) ++runs;
                in_run = true;
            } else {
                in_run = false;
            }
        }
        if (runs > 1) return false;
    }
    return true;
}

bool cols_contiguous(const Board& board) {
    for (int x = 1; x <= board.width(); ++x) {
        int runs = 0;
        bool in_run = false;
        for (int y = 1; y <= board.height(); ++y) {
            if (board.open(x, y)) {
                if (!in_run) ++runs;
                in_run = true;
            } else {
                in_run = false;
            }
        }
        if (runs > 1) return false;
    }
    return true;
}

bool open_is_rectangle(const Board& board) {
    int x0 = board.width() + 1, x1 = 0, y0 = board.height() + 1, y1 = 0;
    std::size_t count = 0;
    for (const Cell& c : board.open_cells()) {
        x0 = std::min(x0, c.x);
        x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y);
        y1 = std::max(y1, c.y);
        ++count;
    }
    return count == static_cast<std::size_t>(x1 - x0 + 1) * (y1 - y0 + 1);
}

}  // namespace

GeometryClass classify_board(const Board& board) {
    if (board.open_count() == 0)
        throw std::invalid_argument("board has no open cells");
    if (!open_region_connected(board)) return GeometryClass::Disconnected;
    if (hole_count(board) > 0) return GeometryClass::Connected;
    bool rows = rows_contiguous(board);
    bool cols = cols_contiguous(board);
    if (rows && cols)
        return open_is_rectangle(board) ? GeometryClass::Rectangular
                                        : GeometryClass::Convex;
    if (rows) return GeometryClass::MonotoneHorizontal;
    if (cols) return GeometryClass::MonotoneVertical;
    return GeometryClass::Simple;
}

}  // namespace tiltlab
