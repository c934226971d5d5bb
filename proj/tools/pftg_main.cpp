#include "pftg/cli.hpp"

int main(int argc, char** argv) { return pftg::cli_main(argc, argv); }
