#include "expdecomp/cli.hpp"

int main(int argc, char** argv) { return expdecomp::run_cli(argc, argv); }
