#include "hsiband/cli.hpp"

int main(int argc, char** argv) { return hsiband::cli_dispatch(argc, argv); }
