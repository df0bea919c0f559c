#include "tjlc/cli.hpp"

int main(int argc, char** argv) { return tjlc::cli_main(argc, argv); }
