#include "ucc/cli.hpp"

int main(int argc, char** argv) { return ucc::cli::run(argc, argv); }
