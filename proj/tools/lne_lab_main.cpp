#include "lnelab/cli.hpp"

int main(int argc, char** argv) { return lnelab::cli::run(argc, argv); }
