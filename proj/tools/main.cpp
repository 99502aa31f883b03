#include <iostream>

#include "nambu_em_cli/commands.hpp"

int main(int argc, char** argv) {
  return nambu_em::cli::dispatch(argc, argv, std::cout, std::cerr);
}
