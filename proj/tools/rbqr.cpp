#include "rbqr/cli.hpp"

int main(int argc, char** argv) { return rbqr::cli::run(argc, argv); }
