#include "ascwave/cli.hpp"

int main(int argc, char** argv) { return ascwave::cli::run(argc, argv); }
