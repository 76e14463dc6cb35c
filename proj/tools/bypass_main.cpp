#include "bypass/cli.hpp"

int main(int argc, char** argv) { return bypass::cli_main(argc, argv); }
