#ifndef FPK_FIBRATION_HPP
#define FPK_FIBRATION_HPP

#include "fpk/toric.hpp"

namespace fpk {

// Data model of a trivially fibered Lagrangian torus: toric base and fiber,
// coupling constant, and the per-disk lift data (fiber holonomy exponents and
// vertical area shifts) that the gauge theory supplies as input.
struct FibrationSpec {
  MomentPolytope base = MomentPolytope::simplex(1);
  InteriorPoint base_point;
  MomentPolytope fiber = MomentPolytope::point();
  InteriorPoint fiber_point;
  Rat coupling = Rat(1);
  std::vector<Exponents> holonomy_exponents;  // one row per base disk
  std::vector<Rat> vertical_shift;            // one entry per base disk
  std::vector<int> sign_convention;           // +-1 per base disk
  bool families_mode = false;
  VarSet vars;  // base block then fiber block

  Rat epsilon = Rat(1, 100);
  Rat cutoff = Rat(0);  // 0 = derive from the scenario's areas

  void validate() const;
  Rat effective_cutoff() const;
  std::size_t base_disk_count() const { return base.facets().size(); }
};

struct TwistData {
  std::vector<Rat> alphas;
  long n = 0;
  long k = 0;
  Rat coupling = Rat(1);
};

// Vertical areas acquired by the lifted base disks of the twisted family.
std::vector<Rat> families_shifts(const TwistData& twist);

// Lift of the base potential: y^nu q^e becomes y^nu x^row q^e r^shift, output
// tagged with the fiberwise maximum.
LaurentQR lift_base_potential(const FibrationSpec& spec);

// Toric potential of the fiber in the r variable, included over the maximal
// base critical point.
LaurentQR fiber_inclusion_potential(const FibrationSpec& spec);

// Fiber terms plus the minimal-total-degree slice of the lifted base terms
// (per output tag, ties kept). Discarded lifted terms are reported.
struct SecondOrderResult {
  LaurentQR potential;
  std::vector<DiskMeta> discarded;
};
SecondOrderResult second_order_potential(const FibrationSpec& spec);

// Tower of nested flag-type fibrations. Level i (1-based) is a Clifford torus
// in P^(n+1-i) carrying n+1-i holonomy variables and n+2-i potential terms;
// level energies must decrease strictly down the tower.
struct FlagTower {
  long n = 0;
  long k = 1;
  std::vector<Rat> level_scales;               // size k; level i fiber scale
  std::vector<std::vector<Exponents>> twists;  // twists[j-2][i-1]: level-j variable
                                               // exponents on level i's inverse term
  Rat epsilon = Rat(1, 100);
  Rat cutoff = Rat(0);

  long level_var_count(long level) const { return n + 1 - level; }
  void validate() const;
};

Rat tower_level_energy(const FlagTower& tower, long level);

// Iterated lift through the tower; ScaleOrderViolation if energies do not
// decrease strictly.
LaurentQR kth_order_potential(const FlagTower& tower);

} // namespace fpk

#endif
