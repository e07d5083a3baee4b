#include "sofsim/experiments.hpp"

int main(int argc, char** argv) { return sofsim::cli_main(argc, argv); }
