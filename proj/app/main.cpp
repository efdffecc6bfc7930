#include "strichartz/cli.hpp"

int main(int argc, char** argv) { return strichartz::cli::run(argc, argv); }
