#include "handsynth/cli.hpp"

int main(int argc, char** argv) { return handsynth::cli_main(argc, argv); }
