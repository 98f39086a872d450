#include "bora/cli/cli.hpp"

int main(int argc, char** argv) { return bora::cli::cli_main(argc, argv); }
