#include "pnask/cli.hpp"

int main(int argc, char** argv) { return pnask::run_cli(argc, argv); }
