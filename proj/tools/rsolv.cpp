#include "rsolv/cli.hpp"

int main(int argc, char** argv) { return rsolv::cli::run(argc, argv, std::cout, std::cerr); }
