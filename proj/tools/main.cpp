#include "kelly/cli.hpp"

int main(int argc, char** argv) { return kelly::cli::run_cli(argc, argv); }
