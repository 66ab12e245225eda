// SPDX-License-Identifier: Apache-2.0
// ------------------------------------------------------------------------

#include <iostream>

#include "jpa/cli.hpp"

int main(int argc, char** argv)
{
    return jpa::cli::run_cli(argc, argv, std::cout, std::cerr);
}
