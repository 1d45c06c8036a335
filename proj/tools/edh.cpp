#include "edh/cli.hpp"

int main(int argc, char** argv) { return edh::cli::run(argc, argv); }
