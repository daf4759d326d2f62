// SPDX-License-Identifier: Apache-2.0

#include "mandel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mandel::cli::run(argc, argv, std::cout, std::cerr); }
