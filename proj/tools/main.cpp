#include "cli.hpp"

int main(int argc, char** argv) { return ybforge::cli::run(argc, argv); }
