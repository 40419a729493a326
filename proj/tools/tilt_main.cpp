// Command-line front end for the tilt toolkit.
//
// Exit codes: 0 success, 1 a checked property failed (unsolvable, rejected,
// representation mismatch), 2 input/parse error, 3 internal error or
// exhausted budget.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "tiltlab/geometry.hpp"
#include "tiltlab/render.hpp"
#include "tiltlab/search.hpp"
#include "tiltlab/sequence.hpp"
#include "tiltlab/textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tiltlab;

namespace tiltcli {

long default_budget() {
    if (const char* env = std::getenv("TILT_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultNodeBudget;
}

ParsedConfig load_or_exit(const std::string& path) {
    try {
        return load_config(path);
    } catch (const ConfigParseError& e) {
        throw ParseExit{kExitParse,
                        path + ":" + std::to_string(e.line) + ": " + e.what()};
    } catch (const std::exception& e) {
        throw ParseExit{kExitParse, path + ": " + e.what()};
    }
}

TiltSequence sequence_from(const std::string& inline_seq,
                           const std::string& seq_file) {
    std::string text = inline_seq;
    if (!seq_file.empty()) {
        try {
            text = read_text_file(seq_file);
        } catch (const std::exception& e) {
            throw ParseExit{kExitParse, e.what()};
        }
    }
    try {
        return parse_sequence(text);
    } catch (const SequenceParseError& e) {
        throw ParseExit{kExitParse, std::string("sequence: ") + e.what()};
    }
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

}  // namespace tiltcli

using namespace tiltcli;

namespace {

RenderOptions::Format format_from(const std::string& name) {
    if (name == "svg") return RenderOptions::Format::Svg;
    if (name == "ascii") return RenderOptions::Format::Ascii;
    throw ParseExit{kExitParse, "unknown render format '" + name + "'"};
}

json witness_json(const SolveResult& r) {
    json j;
    j["schema"] = 1;
    j["status"] = to_string(r.status);
    j["nodes_expanded"] = r.nodes_expanded;
    j["nodes_discovered"] = r.nodes_discovered;
    if (r.status == SolveStatus::Solved) {
        std::string w;
        for (Direction d : r.witness) {
            if (!w.empty()) w += ',';
            w += to_char(d);
        }
        j["witness"] = w;
        j["witness_length"] = r.witness.size();
    }
    return j;
}

int solve_exit(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return kExitOk;
        case SolveStatus::Unsolvable: return kExitCheckFailed;
        case SolveStatus::Exhausted: return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tilt-model simulator, builders, and search tools"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // ----- simulate ------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Apply a tilt sequence to a configuration");
    std::string sim_config, sim_seq, sim_seqfile, sim_out, sim_trace, sim_format = "ascii";
    sim->add_option("config", sim_config, "configuration file")->required();
    sim->add_option("--seq", sim_seq, "inline tilt sequence");
    sim->add_option("--seqfile", sim_seqfile, "tilt sequence file");
    sim->add_option("-o,--out", sim_out, "output configuration file (default stdout)");
    sim->add_option("--trace", sim_trace, "directory for per-tilt frames");
    sim->add_option("--format", sim_format, "trace frame format: ascii|svg");
    sim->callback([&] {
        ParsedConfig pc = load_or_exit(sim_config);
        TiltSequence seq = sequence_from(sim_seq, sim_seqfile);
        RenderOptions opts;
        opts.format = format_from(sim_format);
        Configuration current = pc.config;
        if (!sim_trace.empty()) {
            fs::create_directories(sim_trace);
            std::vector<Direction> dirs = flatten(seq);
            const char* ext = opts.format == RenderOptions::Format::Svg ? ".svg" : ".txt";
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%06d%s", 0, ext);
            write_text_file(fs::path(sim_trace) / name, render(current, opts));
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                current = tilt(current, dirs[i]);
                std::snprintf(name, sizeof(name), "frame_%06d%s",
                              static_cast<int>(i) + 1, ext);
                write_text_file(fs::path(sim_trace) / name, render(current, opts));
            }
        } else {
            current = apply_sequence(current, seq);
        }
        write_out(sim_out, serialize_config(current));
    });

    // ----- classify ------------------------------------------------------
    auto* cls = app.add_subcommand("classify", "Classify a board's open-region geometry");
    std::string cls_config;
    bool cls_json = false;
    cls->add_option("config", cls_config, "configuration file")->required();
    cls->add_flag("--json", cls_json, "JSON report");
    cls->callback([&] {
        ParsedConfig pc = load_or_exit(cls_config);
        GeometryClass g = classify_board(*pc.config.board);
        int holes = hole_count(*pc.config.board);
        if (cls_json) {
            json j;
            j["schema"] = 1;
            j["class"] = to_string(g);
            j["holes"] = holes;
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << to_string(g) << '\n';
            if (geometry_rank(g) < geometry_rank(GeometryClass::Simple))
                std::cout << "holes " << holes << '\n';
        }
    });

    // ----- tree ----------------------------------------------------------
    auto* tre = app.add_subcommand("tree", "Expand the reachable configuration graph");
    std::string tre_config;
    bool tre_stats = false, tre_json = false;
    long tre_budget = default_budget();
    tre->add_option("config", tre_config, "configuration file")->required();
    tre->add_flag("--stats", tre_stats, "print node/edge counts and depth");
    tre->add_flag("--json", tre_json, "JSON report");
    tre->add_option("--budget", tre_budget, "node budget");
    tre->callback([&] {
        ParsedConfig pc = load_or_exit(tre_config);
        ConfigGraph g = create_tree(pc.config, {}, tre_budget);
        if (tre_json) {
            json j;
            j["schema"] = 1;
            j["nodes"] = g.nodes.size();
            j["edges"] = g.edge_count();
            j["depth"] = g.depth();
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "nodes " << g.nodes.size() << "\nedges " << g.edge_count()
                      << "\ndepth " << g.depth() << '\n';
        }
        (void)tre_stats;
    });

    // ----- solve ---------------------------------------------------------
    auto* sol = app.add_subcommand("solve", "BFS solvers over tilt sequences");
    std::string sol_mode, sol_config, sol_goal, sol_emit;
    long sol_budget = default_budget();
    std::vector<long> sol_target;
    long sol_tile = 0;
    bool sol_json = false;
    sol->add_option("mode", sol_mode, "occupancy|relocation|reconfig")->required();
    sol->add_option("config", sol_config, "configuration file")->required();
    sol->add_option("--target", sol_target, "target cell: x y")->expected(2);
    sol->add_option("--tile", sol_tile, "tracked tile id (relocation)");
    sol->add_option("--goal", sol_goal, "goal configuration file (reconfig)");
    sol->add_option("--budget", sol_budget, "node budget");
    sol->add_option("--emit-seq", sol_emit, "write the witness sequence here");
    sol->add_flag("--json", sol_json, "JSON report");
    sol->callback([&] {
        ParsedConfig pc = load_or_exit(sol_config);
        SolveResult r;
        try {
            if (sol_mode == "occupancy") {
                if (sol_target.size() != 2)
                    throw ParseExit{kExitParse, "occupancy needs --target x y"};
                r = solve_occupancy(pc.config,
                                    {static_cast<int>(sol_target[0]),
                                     static_cast<int>(sol_target[1])},
                                    sol_budget);
            } else if (sol_mode == "relocation") {
                if (sol_target.size() != 2)
                    throw ParseExit{kExitParse, "relocation needs --target x y"};
                r = solve_relocation(pc.config, sol_tile,
                                     {static_cast<int>(sol_target[0]),
                                      static_cast<int>(sol_target[1])},
                                     sol_budget);
            } else if (sol_mode == "reconfig") {
                if (sol_goal.empty())
                    throw ParseExit{kExitParse, "reconfig needs --goal file"};
                ParsedConfig goal = load_or_exit(sol_goal);
                r = solve_reconfiguration(pc.config, goal.config, sol_budget);
            } else {
                throw ParseExit{kExitParse, "unknown solve mode '" + sol_mode + "'"};
            }
        } catch (const std::invalid_argument& e) {
            throw ParseExit{kExitParse, e.what()};
        }
        if (sol_json) {
            std::cout << witness_json(r).dump(2) << '\n';
        } else {
            std::cout << to_string(r.status);
            if (r.status == SolveStatus::Solved) {
                std::cout << " length " << r.witness.size() << " witness ";
                for (Direction d : r.witness) std::cout << to_char(d);
            }
            std::cout << '\n';
        }
        if (!sol_emit.empty() && r.status == SolveStatus::Solved) {
            TiltSequence seq;
            for (Direction d : r.witness) seq_append(seq, d);
            write_text_file(sol_emit, serialize_sequence(seq) + "\n");
        }
        exit_code = solve_exit(r.status);
    });

    // ----- render --------------------------------------------------------
    auto* ren = app.add_subcommand("render", "Render a configuration");
    std::string ren_config, ren_out, ren_format = "ascii";
    int ren_px = 24;
    ren->add_option("config", ren_config, "configuration file")->required();
    ren->add_option("-o,--out", ren_out, "output file (default stdout)");
    ren->add_option("--format", ren_format, "ascii|svg");
    ren->add_option("--cell-px", ren_px, "SVG cell size in pixels");
    ren->callback([&] {
        ParsedConfig pc = load_or_exit(ren_config);
        RenderOptions opts;
        opts.format = format_from(ren_format);
        opts.cell_px = ren_px;
        write_out(ren_out, render(pc.config, opts));
    });

    register_pattern_commands(app, exit_code);
    register_dropshape_commands(app, exit_code);
    register_gadget_commands(app, exit_code);
    register_batch_command(app, exit_code);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitParse;
    } catch (const ParseExit& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return exit_code;
}
