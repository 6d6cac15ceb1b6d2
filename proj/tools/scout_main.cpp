#include <iostream>
#include <string>
#include <vector>

#include "scout/cli.hpp"

int main(int argc, char** argv) {
    return scout::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
