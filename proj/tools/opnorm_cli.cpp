#include <iostream>

#include "opnorm/report.hpp"

int main(int argc, char** argv) { return opnorm::run_cli(argc, argv, std::cout, std::cerr); }
