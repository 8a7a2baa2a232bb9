#include <string>
#include <vector>

#include "hyperroad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hyperroad::run_cli(args);
}
