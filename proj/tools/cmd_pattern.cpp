#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "commands.hpp"
#include "tiltlab/pattern.hpp"
#include "tiltlab/render.hpp"
#include "tiltlab/textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tiltlab;
using namespace tiltcli;

namespace {

struct BuildOpts {
    std::string pattern_file;
    std::string out_config;
    std::string emit_seq;
    std::string trace_dir;
    bool release = false;
    bool json_report = false;
};

PatternSpec load_pattern_or_exit(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ParseExit{kExitParse, e.what()};
    }
    try {
        return parse_pattern(text);
    } catch (const std::invalid_argument& e) {
        throw ParseExit{kExitParse, path + ": " + e.what()};
    }
}

void write_trace(const BuildOpts& opts, const BuildResult& res) {
    fs::create_directories(opts.trace_dir);
    RenderOptions ro;
    ro.format = RenderOptions::Format::Svg;
    Configuration cur = res.layout.initial;
    std::uint64_t frame = 0;
    char name[32];
    auto dump = [&] {
        std::snprintf(name, sizeof name, "frame_%06llu.svg",
                      static_cast<unsigned long long>(frame++));
        write_text_file(fs::path(opts.trace_dir) / name, render_svg(cur, ro));
    };
    dump();
    for (Direction d : flatten(res.sequence)) {
        cur = tilt(cur, d);
        dump();
    }
}

void run_build(const BuildOpts& opts, bool shape_mode) {
    PatternSpec spec = load_pattern_or_exit(opts.pattern_file);
    if (shape_mode) {
        if (spec.k != 1)
            throw ParseExit{kExitParse, "build-shape expects a k=1 pattern file"};
        if (!spec.sticky_connected())
            throw ParseExit{kExitParse, "build-shape needs a connected set of non-sand pixels"};
    } else if (!spec.all_sticky()) {
        throw ParseExit{kExitParse, "build-pattern needs every pixel colored; use build-shape for sand"};
    }

    BuildResult res = build_pattern(spec, opts.release);

    if (!opts.emit_seq.empty())
        write_text_file(opts.emit_seq, serialize_sequence(res.sequence) + "\n");
    if (!opts.out_config.empty()) save_config(res.final_config, opts.out_config);
    if (!opts.trace_dir.empty()) write_trace(opts, res);

    const Board& board = res.layout.board;
    if (opts.json_report) {
        json j;
        j["schema"] = 1;
        j["mode"] = shape_mode ? "shape" : "pattern";
        j["h"] = spec.h;
        j["w"] = spec.w;
        j["k"] = spec.k;
        j["board"] = {{"m", board.width()}, {"n", board.height()}};
        j["fuel_tiles"] = res.layout.initial.tile_count();
        j["tilts"] = res.tilt_count;
        j["tilt_bound_constant"] = kTiltCountPerCell;
        j["released"] = res.released;
        j["final_polyominoes"] = res.final_config.polys.size();
        j["verified"] = true;
        write_out("", j.dump(2) + "\n");
    } else {
        std::string line = (shape_mode ? std::string("shape ") : std::string("pattern ")) +
                           std::to_string(spec.h) + "x" + std::to_string(spec.w) + " k=" +
                           std::to_string(spec.k) + ": board " + std::to_string(board.width()) +
                           "x" + std::to_string(board.height()) + ", " +
                           std::to_string(res.layout.initial.tile_count()) + " fuel tiles, " +
                           std::to_string(res.tilt_count) + " tilts, verified\n";
        write_out("", line);
    }
}

}  // namespace

void register_pattern_commands(CLI::App& app, int& exit_code) {
    (void)exit_code;
    auto add = [&](const char* name, const char* help, bool shape_mode) {
        auto* cmd = app.add_subcommand(name, help);
        auto opts = std::make_shared<BuildOpts>();
        cmd->add_option("pattern", opts->pattern_file, "Pattern file")->required();
        cmd->add_flag("--release-exit", opts->release,
                      "Generate the taller chamber and slide the finished assembly off-board");
        cmd->add_option("--emit-seq", opts->emit_seq, "Write the compiled tilt sequence here");
        cmd->add_option("-o,--out", opts->out_config, "Write the final configuration here");
        cmd->add_option("--trace", opts->trace_dir, "Write per-tilt SVG frames into this directory");
        cmd->add_flag("--json", opts->json_report, "Emit a JSON report");
        cmd->callback([opts, shape_mode] { run_build(*opts, shape_mode); });
    };
    add("build-pattern", "Assemble a fully colored pattern on a generated builder board", false);
    add("build-shape", "Assemble a shape (sand allowed) on a generated builder board", true);
}
