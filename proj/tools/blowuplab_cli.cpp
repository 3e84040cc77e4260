#include <iostream>

#include "blowuplab/cli.hpp"

int main(int argc, char** argv) {
    return blowuplab::cli::main(argc, argv, std::cout, std::cerr);
}
