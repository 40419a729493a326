#include "tiltlab/textio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace tiltlab {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    for (std::string& l : lines)
        if (!l.empty() && l.back() == '\r') l.pop_back();
    return lines;
}

struct PieceDecl {
    int id;
    Label label;
    std::vector<Cell> cells;
    int line;
};

// Parses "(x,y) (x,y)..." from `rest`.
std::vector<Cell> parse_cells(const std::string& rest, int line) {
    std::vector<Cell> cells;
    std::istringstream in(rest);
    char c;
    while (in >> c) {
        if (c != '(')
            throw ConfigParseError("expected '(' before cell coordinates", line);
        int x, y;
        char comma, close;
        if (!(in >> x >> comma >> y >> close) || comma != ',' || close != ')')
            throw ConfigParseError("malformed cell, expected (x,y)", line);
        cells.push_back({x, y});
    }
    if (cells.empty())
        throw ConfigParseError("piece declares no cells", line);
    return cells;
}

}  // namespace

ParsedConfig parse_config(std::string_view text) {
    std::vector<std::string> lines = split_lines(text);
    std::size_t li = 0;
    auto next_nonblank = [&]() -> int {
        while (li < lines.size() && trim(lines[li]).empty()) ++li;
        return li < lines.size() ? static_cast<int>(li) + 1 : -1;
    };

    if (next_nonblank() < 0)
        throw ConfigParseError("missing board line", 1);
    {
        std::istringstream in(lines[li]);
        std::string kw, mode;
        int m = 0, n = 0;
        if (!(in >> kw >> m >> n >> mode) || kw != "board")
            throw ConfigParseError("expected: board <m> <n> <walled|open>",
                                   static_cast<int>(li) + 1);
        std::string extra;
        if (in >> extra)
            throw ConfigParseError("trailing tokens after board line",
                                   static_cast<int>(li) + 1);
        if (m < 1 || n < 1)
            throw ConfigParseError("board dimensions must be positive",
                                   static_cast<int>(li) + 1);
        EdgeMode em;
        if (mode == "walled")
            em = EdgeMode::Walled;
        else if (mode == "open")
            em = EdgeMode::Open;
        else
            throw ConfigParseError("edge mode must be 'walled' or 'open'",
                                   static_cast<int>(li) + 1);
        ++li;

        auto board = std::make_shared<Board>(m, n, em);
        // n grid rows, top row first.
        for (int r = 0; r < n; ++r) {
            if (next_nonblank() < 0)
                throw ConfigParseError("missing grid row " + std::to_string(r + 1),
                                       static_cast<int>(lines.size()));
            std::string row = trim(lines[li]);
            if (static_cast<int>(row.size()) != m)
                throw ConfigParseError("grid row has " + std::to_string(row.size()) +
                                           " cells, expected " + std::to_string(m),
                                       static_cast<int>(li) + 1);
            int y = n - r;
            for (int x = 1; x <= m; ++x) {
                char cch = row[static_cast<std::size_t>(x - 1)];
                if (cch == '#')
                    board->set_blocked(x, y);
                else if (cch != '.')
                    throw ConfigParseError("grid cells must be '#' or '.'",
                                           static_cast<int>(li) + 1);
            }
            ++li;
        }

        std::vector<PieceDecl> pieces;
        auto affinity = std::make_shared<AffinityMap>();
        while (next_nonblank() >= 0) {
            int line = static_cast<int>(li) + 1;
            std::istringstream rest(lines[li]);
            std::string head;
            rest >> head;
            if (head == "piece") {
                PieceDecl p;
                p.line = line;
                std::string label_tok;
                if (!(rest >> p.id >> label_tok) || label_tok.size() != 1)
                    throw ConfigParseError(
                        "expected: piece <id> <label-char> (x,y)...", line);
                p.label = label_tok[0];
                std::string tail;
                std::getline(rest, tail);
                p.cells = parse_cells(tail, line);
                pieces.push_back(std::move(p));
            } else if (head == "affinity") {
                std::string a, b, extra;
                if (!(rest >> a >> b) || a.size() != 1 || b.size() != 1)
                    throw ConfigParseError("expected: affinity <a> <b>", line);
                if (rest >> extra)
                    throw ConfigParseError("trailing tokens after affinity line", line);
                if (a[0] == kSand || b[0] == kSand)
                    throw ConfigParseError("sand cannot appear in an affinity pair",
                                           line);
                affinity->add(a[0], b[0]);
            } else {
                throw ConfigParseError("unknown directive '" + head + "'", line);
            }
            ++li;
        }

        // Assemble tiles. Single-cell pieces keep their declared id as the
        // tile id; multi-cell pieces take fresh ids past the declared max.
        TileId next_id = 0;
        std::set<int> piece_ids;
        for (const PieceDecl& p : pieces) {
            if (!piece_ids.insert(p.id).second)
                throw ConfigParseError("duplicate piece id " + std::to_string(p.id),
                                       p.line);
            next_id = std::max(next_id, static_cast<TileId>(p.id));
        }
        ++next_id;

        ParsedConfig out;
        out.config.board = board;
        out.config.affinity = affinity;
        for (const PieceDecl& p : pieces) {
            Polyomino poly;
            for (const Cell& c : p.cells) {
                if (!board->in_extent(c.x, c.y))
                    throw ConfigParseError("piece cell outside the board", p.line);
                if (board->blocked(c.x, c.y))
                    throw ConfigParseError("piece cell on a blocked cell", p.line);
                Tile t;
                t.id = (p.cells.size() == 1) ? static_cast<TileId>(p.id) : next_id++;
                t.x = c.x;
                t.y = c.y;
                t.label = p.label;
                poly.tiles.push_back(t);
                out.piece_tiles[p.id].push_back(t.id);
            }
            if (!cells_connected(poly.cells()))
                throw ConfigParseError("piece cells are not connected", p.line);
            out.config.polys.push_back(std::move(poly));
        }
        out.config = merge_bonded(out.config);
        try {
            out.config.validate();
        } catch (const std::exception& e) {
            throw ConfigParseError(std::string("invalid configuration: ") + e.what(),
                                   static_cast<int>(lines.size()));
        }
        return out;
    }
}

ParsedConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path));
}

std::string serialize_config(const Configuration& config) {
    const Board& board = *config.board;
    std::ostringstream out;
    out << "board " << board.width() << ' ' << board.height() << ' '
        << (board.edge_mode() == EdgeMode::Walled ? "walled" : "open") << '\n';
    for (int y = board.height(); y >= 1; --y) {
        for (int x = 1; x <= board.width(); ++x)
            out << (board.blocked(x, y) ? '#' : '.');
        out << '\n';
    }

    Configuration canon = config;
    canon.canonicalize();
    int piece_id = 1;
    for (const Polyomino& poly : canon.polys) {
        // Same-label connected chunks, so each piece line carries one label.
        std::vector<char> taken(poly.tiles.size(), 0);
        for (std::size_t seed = 0; seed < poly.tiles.size(); ++seed) {
            if (taken[seed]) continue;
            Label label = poly.tiles[seed].label;
            std::vector<std::size_t> chunk{seed};
            taken[seed] = 1;
            for (std::size_t qi = 0; qi < chunk.size(); ++qi) {
                const Tile& a = poly.tiles[chunk[qi]];
                for (std::size_t j = 0; j < poly.tiles.size(); ++j) {
                    const Tile& b = poly.tiles[j];
                    if (!taken[j] && b.label == label &&
                        std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1) {
                        taken[j] = 1;
                        chunk.push_back(j);
                    }
                }
            }
            std::vector<Cell> cells;
            for (std::size_t j : chunk) cells.push_back({poly.tiles[j].x, poly.tiles[j].y});
            std::sort(cells.begin(), cells.end());
            out << "piece " << piece_id++ << ' ' << label;
            for (const Cell& c : cells) out << " (" << c.x << ',' << c.y << ')';
            out << '\n';
        }
    }
    for (const auto& [a, b] : config.affinity->pairs())
        out << "affinity " << a << ' ' << b << '\n';
    return out.str();
}

void save_config(const Configuration& config, const std::filesystem::path& path) {
    write_text_file(path, serialize_config(config));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace tiltlab
