#include "hsim/cli.hpp"

int main(int argc, char** argv) { return hsim::cli_dispatch(argc, argv); }
