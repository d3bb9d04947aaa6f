#include "cubecx/cli.hpp"

int main(int argc, char** argv) { return cubecx::cli::main(argc, argv); }
