// Certifies Phi*_{-8,4} | T_5 = 0 (mod 23) in weight 46 and prints the report.

#include <iostream>

#include "qmock/hecke.hpp"

int main() {
  using namespace qmock;
  const auto setting = CongruenceSetting::make(23, 1, 2);
  MockTables<ModularRing> tables{ModularRing(setting.modulus())};
  const auto rep = eigencheck(TwistParams(-8, 4), setting, 5, 0, 50, tables);
  std::cout << "weight " << setting.k << ", Sturm bound " << rep.sturm << '\n'
            << (rep.certified ? "certified" : "failed") << " to q^" << rep.verified_prec << '\n'
            << "a_omega terms used: " << rep.table_depth.omega << '\n';
  return rep.certified ? 0 : 1;
}
