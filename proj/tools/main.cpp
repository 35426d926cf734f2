#include "chunkblit/cli.hpp"

int main(int argc, char** argv) { return chunkblit::cli::run(argc, argv); }
