#include "gridcap/cli.hpp"

int main(int argc, char** argv) { return gridcap::cli::run_command(argc, argv); }
