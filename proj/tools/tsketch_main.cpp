#include "tsketch/cli.hpp"

int main(int argc, char** argv) { return tsketch::run_cli(argc, argv); }
