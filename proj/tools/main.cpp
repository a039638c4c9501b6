#include "persuasion/cli.hpp"

int main(int argc, char** argv) { return persuasion::cli_main(argc, argv); }
