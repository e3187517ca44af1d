#include "nlsubdiv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return nlsd::cli::main(argc, argv, std::cout, std::cerr);
}
