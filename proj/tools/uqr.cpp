#include "uqr/cli.hpp"

int main(int argc, char** argv) { return uqr::cli_main(argc, argv); }
