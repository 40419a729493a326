#include "commands.hpp"

void register_batch_command(CLI::App&, int&) {}
