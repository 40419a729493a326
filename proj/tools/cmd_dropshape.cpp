#include "commands.hpp"

void register_dropshape_commands(CLI::App&, int&) {}
