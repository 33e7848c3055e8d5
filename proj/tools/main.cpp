#include "bilateral/cli.hpp"

int main(int argc, char** argv) { return bilateral::run_cli(argc, argv); }
