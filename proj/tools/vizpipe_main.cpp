#include "vizpipe/gateway/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return vizpipe::cli_main(argc, argv, std::cout, std::cerr); }
