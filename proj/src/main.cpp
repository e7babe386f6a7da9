#include "repeval/commands.hpp"

int main(int argc, char** argv) { return repeval::run_cli(argc, argv); }
