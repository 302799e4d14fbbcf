#include <exception>
#include <iostream>

#include "olr/suites.hpp"

// One line per criterion; exit status is nonzero unless every criterion passes.
int main() {
  bool all = true;
  for (const auto& name : olr::suite_names()) {
    if (name == "all") continue;
    try {
      for (const auto& r : olr::run_suite(name)) {
        std::cout << olr::format_result(r) << std::endl;
        all = all && r.passed;
      }
    } catch (const std::exception& e) {
      std::cout << "suite " << name << " FAIL  error: " << e.what() << std::endl;
      all = false;
    }
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
