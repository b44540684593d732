#include "experiments.hpp"

int main(int argc, char** argv) { return xiflow::cli::cli_main(argc, argv); }
