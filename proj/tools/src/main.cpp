#include "igasv/cli.hpp"

int main(int argc, char** argv) { return igasv::cli::main(argc, argv); }
