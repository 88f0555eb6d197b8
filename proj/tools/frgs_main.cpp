#include "frgs/cli.hpp"

int main(int argc, char** argv) { return frgs::cli::run(argc, argv); }
