#include "uts/cli.hpp"

int main(int argc, char** argv) { return uts::run_cli(argc, argv); }
