#include "deq/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return deq::cli_main(argc, argv, std::cout, std::cerr);
}
