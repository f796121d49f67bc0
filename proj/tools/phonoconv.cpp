#include "phonoconv/cli.hpp"

int main(int argc, char** argv) { return phonoconv::cli::run(argc, argv); }
