#include <iostream>

#include "msr/cli.hpp"

int main(int argc, char** argv)
{
    return msr::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
