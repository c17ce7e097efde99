// Expands an eta / Eisenstein expression given on the command line (default: Delta).

#include <iostream>
#include <string>

#include "qmock/qexpr.hpp"

int main(int argc, char** argv) {
  using namespace qmock;
  const std::string text = argc > 1 ? argv[1] : "eta(q)^24";
  const std::size_t prec = argc > 2 ? std::stoul(argv[2]) : 12;
  try {
    const auto expr = qexpr::parse(text);
    const auto s = qexpr::evaluate(expr, prec, IntegerRing{});
    std::cout << qexpr::print(expr) << " =";
    for (std::size_t n = 0; n < s.prec(); ++n) std::cout << ' ' << s[n].get_str();
    std::cout << " + O(q^" << prec << ")\n";
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
