#include "lotr/cli.hpp"

int main(int argc, char** argv) { return lotr::cli_main(argc, argv); }
