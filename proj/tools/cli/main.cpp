#include "commands.hpp"

int main(int argc, char** argv) { return degsynth::cli::run_main(argc, argv); }
