#pragma once

// Shared plumbing for the CLI subcommand translation units.

#include <string>

#include "CLI11.hpp"

#include "tiltlab/sequence.hpp"
#include "tiltlab/textio.hpp"

namespace tiltcli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitInternal = 3;

// Thrown by command bodies to abort with a specific exit code.
struct ParseExit {
    int code;
    std::string message;
};

long default_budget();
tiltlab::ParsedConfig load_or_exit(const std::string& path);
tiltlab::TiltSequence sequence_from(const std::string& inline_seq,
                                    const std::string& seq_file);
void write_out(const std::string& path, const std::string& text);

}  // namespace tiltcli

void register_pattern_commands(CLI::App& app, int& exit_code);
void register_dropshape_commands(CLI::App& app, int& exit_code);
void register_gadget_commands(CLI::App& app, int& exit_code);
void register_batch_command(CLI::App& app, int& exit_code);
