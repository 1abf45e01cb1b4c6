#include "impsel/cli.hpp"

int main(int argc, char** argv) { return impsel::cli_main(argc, argv); }
