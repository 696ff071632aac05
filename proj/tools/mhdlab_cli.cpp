#include <iostream>

#include "mhdlab/io/commands.hpp"

int main(int argc, char** argv) { return mhdlab::run_command(argc, argv, std::cout, std::cerr); }
