#include <iostream>

#include "acnote/cli.hpp"

int main(int argc, char** argv) {
    return acnote::cli::run(argc, argv, std::cout, std::cerr);
}
