#include "kinspec/cli.hpp"

int main(int argc, char** argv) { return kinspec::cli::run_cli(argc, argv); }
