#include "spinekit/cli/commands.hpp"

int main(int argc, char** argv) { return spinekit::cli::run_cli(argc, argv); }
