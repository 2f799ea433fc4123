#include "hdlagent/cli.hpp"

#include <csignal>
#include <iostream>
#include <vector>

namespace {

void on_interrupt(int) { hdlagent::cancel_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);
  std::vector<std::string> args(argv + 1, argv + argc);
  return hdlagent::run_cli(std::move(args), std::cout, std::cerr);
}
