#include <vector>

#include "quest/cli.hpp"

int main(int argc, char** argv) {
    return quest::cli_run(std::vector<std::string>(argv + 1, argv + argc));
}
