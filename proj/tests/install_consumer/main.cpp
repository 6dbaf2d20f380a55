#include <finsler/catalog.hpp>
#include <finsler/tensors.hpp>

#include <iostream>

int main() {
  const finsler::Lagrangian L = finsler::build_minkowski(4);
  finsler::Vec x = finsler::Vec::Zero(4);
  finsler::Vec v = finsler::Vec::Zero(4);
  v(0) = 1.0;
  v(1) = 0.3;
  const finsler::Report r = finsler::homogeneity_report(L, x, v);
  std::cout << L.name() << " homogeneity " << (r.passed() ? "pass" : "fail") << "\n";
  return r.passed() ? 0 : 1;
}
