// Prints a_omega(2(5^{2M} - 1)/3) exactly and mod 23 for M = 1..4.

#include <iostream>

#include "qmock/mocktheta.hpp"

int main() {
  using namespace qmock;
  const std::size_t indices[] = {16, 416, 10416, 260416};
  const auto residues = omega_coeffs(260416, ModularRing(23));
  const auto exact = omega_coeffs(10416, IntegerRing{});
  std::cout << "M,index,a_omega,mod 23\n";
  for (std::size_t M = 1; M <= 4; ++M) {
    const std::size_t n = indices[M - 1];
    const std::string value = n <= exact.upto() ? exact[n].get_str() : "-";
    std::cout << M << ',' << n << ',' << value << ',' << residues[n] << '\n';
  }
}
