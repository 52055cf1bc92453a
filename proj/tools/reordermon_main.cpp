#include "reordermon/cli/commands.hpp"

int main(int argc, char** argv) { return reordermon::cli::main_entry(argc, argv); }
