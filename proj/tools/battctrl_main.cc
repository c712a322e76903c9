#include <iostream>

#include "battctrl/cli.h"

int main(int argc, char** argv) {
  return battctrl::RunCli(argc, argv, std::cout, std::cerr);
}
