#include "copolyap/cli.hpp"

int main(int argc, char** argv) { return copolyap::cli::run(argc, argv); }
