#include <iostream>

#include "langest/cli.hpp"

int main(int argc, char** argv) { return langest::dispatch(argc, argv, std::cout, std::cerr); }
