#include <vector>

#include "fpm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return fpm::cli::run(args);
}
