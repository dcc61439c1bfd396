// Walks through the Cremona involution lifted to P^3 blown up at the four
// coordinate points: a positive class pulled back to a negative one, and the
// invariant class that survives.

#include <iostream>

#include "cohodyn.hpp"

using namespace cohodyn;

int main() {
  const MapModel j = builtin("J_X");
  const ModelPtr x = j.source;

  std::cout << "H^{1,1} basis:";
  for (const auto& g : x->bases[1]) std::cout << ' ' << g;
  std::cout << "\nM_1 =\n" << j.pullback.at(1) << "M_2 =\n" << j.pullback.at(2);

  const auto sigma01 = j.variety("Sigma_01");
  std::cout << "J^*[Sigma_01] = " << format_class(pullback_class(j, sigma01.cls)) << '\n';

  SiuLedger ledger(x, 2);
  ledger.add_atom(1, sigma01);
  const SiuLedger once = siu_pullback(j, ledger);
  for (const auto& a : once.atoms()) std::cout << "after one pullback: " << format_atom(a) << '\n';
  const SiuLedger twice = siu_pullback(j, once);
  for (const auto& a : twice.atoms()) std::cout << "after two pullbacks: " << format_atom(a) << '\n';

  const auto obstruction = positivity_obstruction(once.total());
  std::cout << "pairing of the pulled-back class with H: " << to_string(obstruction.mass)
            << (obstruction.obstructed ? " (not a positive class)" : "") << '\n';

  const auto inv = invariant_class_eigen(j, 2, 1);
  std::cout << "fixed classes in H^{2,2}:\n";
  for (const auto& k : inv.kernel) std::cout << "  " << format_class(k) << '\n';

  const auto d1 = dynamical_degree(j, 1, 8, default_root_width(), default_step_cap());
  std::cout << "delta_1 in " << d1.interval.to_string() << " (" << d1.method << ")\n";
}
