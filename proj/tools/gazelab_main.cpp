#include "gazelab/cli.hpp"

int main(int argc, char** argv) { return gazelab::cli::run(argc, argv); }
