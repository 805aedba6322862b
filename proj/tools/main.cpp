#include <iostream>

#include "zerofree/cli.hpp"

int main(int argc, char** argv) { return zerofree::run(argc, argv, std::cout, std::cerr); }
