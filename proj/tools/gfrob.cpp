#include <iostream>

#include "gfrob/cli.hpp"

int main(int argc, char** argv) {
    return gfrob::cli::run(argc, argv, std::cout, std::cerr);
}
