#include <iostream>

#include "panelfact/cli.hpp"

int main(int argc, char** argv) {
    return panelfact::run_cli(argc, argv, std::cout, std::cerr);
}
