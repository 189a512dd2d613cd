#include "bonacci/cli.hpp"

int main(int argc, char** argv) { return bonacci::cli::run_cli(argc, argv); }
