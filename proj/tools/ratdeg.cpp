#include <iostream>
#include <string>
#include <vector>

#include "ratdeg/shell.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ratdeg::shell::run(args, std::cout, std::cerr);
}
