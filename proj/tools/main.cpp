#include "henon/cli.hpp"

int main(int argc, char** argv) { return henon::cli_main(argc, argv); }
