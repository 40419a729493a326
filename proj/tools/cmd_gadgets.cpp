#include "commands.hpp"

void register_gadget_commands(CLI::App&, int&) {}
