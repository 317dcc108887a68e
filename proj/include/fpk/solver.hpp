#ifndef FPK_SOLVER_HPP
#define FPK_SOLVER_HPP

#include "fpk/laurent.hpp"

namespace fpk {

// Root-of-unity tuple solving the critical system mod t. Entries are
// zeta_conductor^exponents[i]; the conductor is the lcm of the entry orders.
struct Seed {
  long conductor = 1;
  std::vector<long> exponents;
  std::vector<Scalar> values;

  static Seed from_exponents(long conductor, std::vector<long> exponents);
  bool operator<(const Seed& other) const;
  bool operator==(const Seed& other) const;
  std::string to_string() const;
};

enum class Verdict { floer_nontrivial_candidate, inconclusive, failed };

struct SolveReport {
  Seed seed;
  std::vector<NovikovSeries> solution;
  Rat achieved_order = Rat(0);
  // per-equation valuation of the final residual; nullopt = vanishes to cutoff
  std::vector<std::optional<Rat>> residual_valuations;
  bool jacobian_unit = false;
  bool hessian_nondegenerate = false;
  Verdict verdict = Verdict::failed;
  int iterations = 0;
  std::vector<Rat> valuation_trace;  // min residual valuation before each step
  bool on_cover = false;
  std::string note;
};

struct SolverOptions {
  Rat target_order = Rat(0);  // 0 = derive from the system
  long conductor_bound = 60;
  bool float_mode = false;
};

// One cleared, t-normalized equation per variable of W. DegenerateDirection
// if W does not depend on some variable.
CriticalSystem build_system(const LaurentT& potential);

// All root-of-unity tuples up to the conductor bound annihilating the system
// mod t. The parallel version partitions the tuple space across threads and
// prunes with a floating-point evaluation before confirming exactly; the
// serial version is the plain exact reference.
std::vector<Seed> find_seeds(const CriticalSystem& sys, long conductor_bound);
std::vector<Seed> find_seeds_serial(const CriticalSystem& sys, long conductor_bound);

struct JacobianModT {
  std::vector<std::vector<Scalar>> matrix;
  Scalar determinant = Scalar(Rat(0));
  bool unit = false;
};

JacobianModT jacobian_mod_t(const CriticalSystem& sys, const Seed& seed);

SolveReport hensel_lift(const CriticalSystem& sys, const Seed& seed, const Rat& target_order);

// True iff det of the matrix of second partials of W at the solution has a
// nonzero leading coefficient.
bool hessian_check(const LaurentT& potential, const std::vector<NovikovSeries>& solution);

// Nonvanishing of the leading coefficient of det of the symbolic system
// Jacobian evaluated at a series point.
bool system_jacobian_unit_at(const CriticalSystem& sys,
                             const std::vector<NovikovSeries>& solution);

// Full pipeline: seeds (found or supplied), per-seed jacobian check, lift,
// hessian check, verdict. Per-seed failures never abort the other seeds.
std::vector<SolveReport> solve_scenario(const LaurentT& potential, const SolverOptions& options,
                                        const std::vector<Seed>* seeds_override = nullptr);

// Same pipeline on a prebuilt system (reduced or covered equations); the
// nondegeneracy flag is taken from the system Jacobian at the solution.
std::vector<SolveReport> solve_system(const CriticalSystem& sys, const SolverOptions& options,
                                      const std::vector<Seed>* seeds_override = nullptr);

// Shared helpers for evaluating systems.
Scalar evaluate_mod_t(const LaurentT& eq, const std::vector<Scalar>& point);
NovikovSeries evaluate_at(const LaurentT& eq, const std::vector<NovikovSeries>& point);
LaurentT truncate_equation(const LaurentT& eq, const Rat& cutoff, SeriesMode mode);

} // namespace fpk

#endif
