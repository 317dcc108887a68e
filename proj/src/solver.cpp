#include "fpk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpk {

Seed Seed::from_exponents(long conductor, std::vector<long> exps) {
  Seed s;
  s.conductor = conductor;
  s.exponents = std::move(exps);
  for (long e : s.exponents)
    s.values.push_back(Scalar::root_of_unity(conductor, e));
  return s;
}

bool Seed::operator<(const Seed& other) const {
  if (conductor != other.conductor)
    return conductor < other.conductor;
  return exponents < other.exponents;
}

bool Seed::operator==(const Seed& other) const {
  return conductor == other.conductor && exponents == other.exponents;
}

std::string Seed::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i)
      out += ", ";
    out += "zeta" + std::to_string(conductor) + "^" + std::to_string(exponents[i]);
  }
  return out + ")";
}

CriticalSystem build_system(const LaurentT& potential) {
  const VarSet& vars = potential.vars();
  std::vector<LaurentT> derivatives;
  for (const auto& name : vars.names) {
    LaurentT d = potential.partial_derivative(name);
    if (d.is_zero())
      throw DegenerateDirection("potential does not depend on variable " + name);
    derivatives.push_back(std::move(d));
  }
  CriticalSystem sys = clear_denominators(derivatives);
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    sys.provenance[i].derived_from = vars.names[i];
    // divide out the t-content so the mod-t system is meaningful
    std::optional<Rat> content;
    for (const auto& [e, t] : sys.equations[i].terms()) {
      auto v = t.coeff.valuation();
      if (v && (!content || *v < *content))
        content = *v;
    }
    if (content && *content > 0) {
      LaurentT normalized(sys.vars);
      for (const auto& [e, t] : sys.equations[i].terms())
        normalized.add_term(e, t.coeff.shifted(-*content));
      sys.equations[i] = std::move(normalized);
      sys.provenance[i].t_content = *content;
    }
  }
  return sys;
}

namespace {

Scalar scalar_pow(Scalar base, long k) {
  Scalar out(Rat(1));
  while (k > 0) {
    if (k & 1)
      out = out * base;
    k >>= 1;
    if (k > 0)
      base = base * base;
  }
  return out;
}

} // namespace

Scalar evaluate_mod_t(const LaurentT& eq, const std::vector<Scalar>& point) {
  Scalar acc(Rat(0));
  for (const auto& [e, t] : eq.terms()) {
    Scalar c = t.coeff.coefficient_at(Rat(0));
    if (c.is_zero())
      continue;
    for (std::size_t i = 0; i < e.size(); ++i) {
      long k = to_long(e[i]);
      if (k < 0)
        throw ConfigError("mod-t evaluation expects a cleared system");
      if (k > 0)
        c = c * scalar_pow(point[i], k);
    }
    acc = acc + c;
  }
  return acc;
}

NovikovSeries evaluate_at(const LaurentT& eq, const std::vector<NovikovSeries>& point) {
  std::map<std::string, NovikovSeries> named;
  for (std::size_t i = 0; i < point.size(); ++i)
    named.emplace(eq.vars().names[i], point[i]);
  return evaluate(eq, named);
}

LaurentT truncate_equation(const LaurentT& eq, const Rat& cutoff, SeriesMode mode) {
  LaurentT out(eq.vars());
  for (const auto& [e, t] : eq.terms()) {
    NovikovSeries c(mode, cutoff);
    for (const auto& [exp, s] : t.coeff.terms())
      c.add_term(exp, s);
    out.add_term(e, c, t.meta);
  }
  return out;
}

namespace {

// Lists the exact-conductor tuples for one N; exponent tuples must have
// entry orders with lcm exactly N so each seed is visited once.
bool exact_conductor(const std::vector<long>& exps, long n) {
  long l = 1;
  for (long e : exps) {
    long order = n / gcd_long(e, n);
    l = lcm_long(l, order);
  }
  return l == n;
}

struct ModTSystem {
  std::vector<LaurentT> equations;  // cleared, normalized
  std::size_t nvars = 0;

  explicit ModTSystem(const CriticalSystem& sys) : nvars(sys.vars.size()) {
    for (const auto& eq : sys.equations)
      equations.push_back(eq);
  }

  bool exact_zero(const std::vector<Scalar>& point) const {
    for (const auto& eq : equations)
      if (!evaluate_mod_t(eq, point).is_zero())
        return false;
    return true;
  }

  // numeric pre-filter: true if every residual is numerically tiny
  bool numeric_zero(const std::vector<long>& exps, long n) const {
    for (const auto& eq : equations) {
      std::complex<double> acc(0.0, 0.0);
      for (const auto& [e, t] : eq.terms()) {
        Scalar c = t.coeff.coefficient_at(Rat(0));
        if (c.is_zero())
          continue;
        long phase = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
          phase = (phase + to_long(e[i]) % n * exps[i]) % n;
        double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
        acc += c.to_complex() * std::complex<double>(std::cos(angle), std::sin(angle));
      }
      if (std::abs(acc) > 1e-7)
        return false;
    }
    return true;
  }
};

std::vector<long> unrank_tuple(unsigned long long rank, long n, std::size_t d) {
  std::vector<long> exps(d);
  for (std::size_t i = 0; i < d; ++i) {
    exps[d - 1 - i] = static_cast<long>(rank % static_cast<unsigned long long>(n));
    rank /= static_cast<unsigned long long>(n);
  }
  return exps;
}

} // namespace

std::vector<Seed> find_seeds_serial(const CriticalSystem& sys, long conductor_bound) {
  if (conductor_bound < 1)
    throw ConfigError("conductor bound must be at least 1");
  ModTSystem mod_t(sys);
  std::size_t d = sys.vars.size();
  std::vector<Seed> seeds;
  for (long n = 1; n <= conductor_bound; ++n) {
    unsigned long long total = 1;
    for (std::size_t i = 0; i < d; ++i)
      total *= static_cast<unsigned long long>(n);
    for (unsigned long long rank = 0; rank < total; ++rank) {
      std::vector<long> exps = unrank_tuple(rank, n, d);
      if (!exact_conductor(exps, n))
        continue;
      Seed seed = Seed::from_exponents(n, exps);
      if (mod_t.exact_zero(seed.values))
        seeds.push_back(std::move(seed));
    }
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

std::vector<Seed> find_seeds(const CriticalSystem& sys, long conductor_bound) {
  if (conductor_bound < 1)
    throw ConfigError("conductor bound must be at least 1");
  ModTSystem mod_t(sys);
  std::size_t d = sys.vars.size();
  std::vector<Seed> seeds;
  for (long n = 1; n <= conductor_bound; ++n) {
    cyclotomic_field(n);  // warm the cache outside the parallel region
    unsigned long long total = 1;
    for (std::size_t i = 0; i < d; ++i)
      total *= static_cast<unsigned long long>(n);
    std::vector<Seed> found;
#ifdef _OPENMP
#pragma omp parallel
    {
      std::vector<Seed> local;
#pragma omp for schedule(static)
      for (long long rank = 0; rank < static_cast<long long>(total); ++rank) {
        std::vector<long> exps = unrank_tuple(static_cast<unsigned long long>(rank), n, d);
        if (!exact_conductor(exps, n))
          continue;
        if (!mod_t.numeric_zero(exps, n))
          continue;
        Seed seed = Seed::from_exponents(n, exps);
        if (mod_t.exact_zero(seed.values))
          local.push_back(std::move(seed));
      }
#pragma omp critical
      found.insert(found.end(), local.begin(), local.end());
    }
#else
    for (unsigned long long rank = 0; rank < total; ++rank) {
      std::vector<long> exps = unrank_tuple(rank, n, d);
      if (!exact_conductor(exps, n))
        continue;
      if (!mod_t.numeric_zero(exps, n))
        continue;
      Seed seed = Seed::from_exponents(n, exps);
      if (mod_t.exact_zero(seed.values))
        found.push_back(std::move(seed));
    }
#endif
    seeds.insert(seeds.end(), found.begin(), found.end());
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

namespace {

std::vector<std::vector<Scalar>> scalar_matrix_inverse(std::vector<std::vector<Scalar>> a) {
  std::size_t n = a.size();
  std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar(Rat(0))));
  for (std::size_t i = 0; i < n; ++i)
    inv[i][i] = Scalar(Rat(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero())
      ++pivot;
    if (pivot == n)
      throw JacobianNotUnit("singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Scalar p = a[col][col].invert();
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] = a[col][c] * p;
      inv[col][c] = inv[col][c] * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero())
        continue;
      Scalar f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] = a[r][c] - f * a[col][c];
        inv[r][c] = inv[r][c] - f * inv[col][c];
      }
    }
  }
  return inv;
}

Scalar scalar_matrix_det(std::vector<std::vector<Scalar>> a) {
  std::size_t n = a.size();
  Scalar det(Rat(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero())
      ++pivot;
    if (pivot == n)
      return Scalar(Rat(0));
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det = det * a[col][col];
    Scalar inv = a[col][col].invert();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero())
        continue;
      Scalar f = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c)
        a[r][c] = a[r][c] - f * a[col][c];
    }
  }
  return det;
}

std::vector<std::vector<LaurentT>> symbolic_jacobian(const CriticalSystem& sys) {
  std::vector<std::vector<LaurentT>> jac;
  for (const auto& eq : sys.equations) {
    std::vector<LaurentT> row;
    for (const auto& name : sys.vars.names)
      row.push_back(eq.partial_derivative(name));
    jac.push_back(std::move(row));
  }
  return jac;
}

// Number of distinct exponents reachable below the cutoff from the degree
// monoid of the system; bounds the Newton iteration count.
std::size_t attainable_exponent_count(const CriticalSystem& sys, const Rat& cutoff) {
  std::set<Rat> generators;
  for (const auto& eq : sys.equations)
    for (const auto& [e, t] : eq.terms())
      for (const auto& [exp, c] : t.coeff.terms())
        if (exp > 0 && exp < cutoff)
          generators.insert(exp);
  std::set<Rat> reach{Rat(0)};
  bool grew = true;
  while (grew && reach.size() < 4096) {
    grew = false;
    for (const auto& base : std::vector<Rat>(reach.begin(), reach.end()))
      for (const auto& g : generators) {
        Rat next = base + g;
        if (next < cutoff && reach.insert(next).second)
          grew = true;
      }
  }
  return reach.size();
}

} // namespace

JacobianModT jacobian_mod_t(const CriticalSystem& sys, const Seed& seed) {
  if (seed.values.size() != sys.vars.size())
    throw ConfigError("seed length does not match system");
  auto jac = symbolic_jacobian(sys);
  JacobianModT out;
  out.matrix.resize(jac.size());
  for (std::size_t i = 0; i < jac.size(); ++i)
    for (std::size_t j = 0; j < jac[i].size(); ++j)
      out.matrix[i].push_back(evaluate_mod_t(jac[i][j], seed.values));
  out.determinant = scalar_matrix_det(out.matrix);
  out.unit = !out.determinant.is_zero();
  return out;
}

SolveReport hensel_lift(const CriticalSystem& sys, const Seed& seed, const Rat& target_order) {
  if (target_order <= 0)
    throw ConfigError("target order must be positive");
  SolveReport report;
  report.seed = seed;
  report.on_cover = sys.on_cover;
  SeriesMode mode = SeriesMode::ring;

  std::vector<LaurentT> equations;
  for (const auto& eq : sys.equations)
    equations.push_back(truncate_equation(eq, target_order, mode));
  CriticalSystem working{sys.vars, equations, sys.provenance, sys.on_cover};

  JacobianModT jac0 = jacobian_mod_t(working, seed);
  report.jacobian_unit = jac0.unit;
  if (!jac0.unit)
    throw JacobianNotUnit("Jacobian is not a unit mod t at seed " + seed.to_string());
  auto jac0_inv = scalar_matrix_inverse(jac0.matrix);
  auto jac_sym = symbolic_jacobian(working);

  std::size_t n = working.vars.size();
  std::vector<NovikovSeries> current;
  for (const auto& v : seed.values)
    current.push_back(NovikovSeries::constant(v, mode, target_order));

  auto residual_of = [&](const std::vector<NovikovSeries>& point) {
    std::vector<NovikovSeries> res;
    for (const auto& eq : working.equations)
      res.push_back(evaluate_at(eq, point));
    return res;
  };
  auto min_valuation = [&](const std::vector<NovikovSeries>& res) -> std::optional<Rat> {
    std::optional<Rat> v;
    for (const auto& r : res) {
      auto rv = r.valuation();
      if (rv && (!v || *rv < *v))
        v = rv;
    }
    return v;  // nullopt = all residuals vanish mod cutoff
  };
  // scalar-matrix preconditioned refinement solving J(point) * x = rhs
  auto solve_linear = [&](const std::vector<std::vector<NovikovSeries>>& jac,
                          const std::vector<NovikovSeries>& rhs) {
    std::vector<NovikovSeries> x(n, NovikovSeries(mode, target_order));
    std::vector<NovikovSeries> r = rhs;
    std::size_t guard = 0;
    while (true) {
      bool all_zero = true;
      for (const auto& ri : r)
        if (!ri.is_zero())
          all_zero = false;
      if (all_zero)
        return x;
      std::vector<NovikovSeries> delta(n, NovikovSeries(mode, target_order));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (r[j].is_zero() || jac0_inv[i][j].is_zero())
            continue;
          delta[i] = delta[i] + NovikovSeries::constant(jac0_inv[i][j], mode, target_order) * r[j];
        }
      for (std::size_t i = 0; i < n; ++i)
        x[i] = x[i] + delta[i];
      for (std::size_t i = 0; i < n; ++i) {
        NovikovSeries acc = rhs[i];
        for (std::size_t j = 0; j < n; ++j)
          acc = acc - jac[i][j] * x[j];
        r[i] = acc;
      }
      if (++guard > 4096)
        throw NoProgress("linear refinement failed to terminate");
    }
  };

  std::size_t iteration_cap = 2 * attainable_exponent_count(working, target_order) + 4;
  std::vector<NovikovSeries> residual = residual_of(current);
  std::optional<Rat> best = min_valuation(residual);
  while (best && *best < target_order) {
    if (*best == 0)
      throw NoProgress("seed residual has valuation 0; not an approximate root");
    report.valuation_trace.push_back(*best);
    std::vector<std::vector<NovikovSeries>> jac(n, std::vector<NovikovSeries>());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        jac[i].push_back(evaluate_at(jac_sym[i][j], current));
    std::vector<NovikovSeries> step = solve_linear(jac, residual);
    for (std::size_t i = 0; i < n; ++i)
      current[i] = current[i] - step[i];
    ++report.iterations;
    residual = residual_of(current);
    std::optional<Rat> next = min_valuation(residual);
    if (next && *next <= *best)
      throw NoProgress("residual valuation failed to increase at " + rat_to_string(*best));
    best = next;
    if (report.iterations > static_cast<int>(iteration_cap))
      throw NoProgress("iteration cap exceeded");
  }

  report.solution = std::move(current);
  report.achieved_order = target_order;
  for (const auto& r : residual)
    report.residual_valuations.push_back(r.valuation());
  return report;
}

namespace {

NovikovSeries series_matrix_det(const std::vector<std::vector<NovikovSeries>>& m, const Rat& cutoff) {
  std::size_t n = m.size();
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i)
    cols[i] = i;
  std::function<NovikovSeries(std::size_t, const std::vector<std::size_t>&)> det =
      [&](std::size_t row, const std::vector<std::size_t>& remaining) -> NovikovSeries {
    if (remaining.size() == 1)
      return m[row][remaining[0]];
    NovikovSeries acc(SeriesMode::field, cutoff);
    for (std::size_t idx = 0; idx < remaining.size(); ++idx) {
      if (m[row][remaining[idx]].is_zero())
        continue;
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < remaining.size(); ++j)
        if (j != idx)
          rest.push_back(remaining[j]);
      NovikovSeries contrib = m[row][remaining[idx]] * det(row + 1, rest);
      acc = idx % 2 == 0 ? acc + contrib : acc - contrib;
    }
    return acc;
  };
  return det(0, cols);
}

std::vector<std::vector<NovikovSeries>> second_partials_at(const LaurentT& potential,
                                                           const std::vector<NovikovSeries>& sol) {
  const VarSet& vars = potential.vars();
  std::size_t n = vars.size();
  Rat cutoff = sol[0].cutoff();
  std::map<std::string, NovikovSeries> point;
  for (std::size_t k = 0; k < n; ++k)
    point.emplace(vars.names[k], sol[k].with_mode(SeriesMode::field));
  std::vector<std::vector<NovikovSeries>> hess(n);
  for (std::size_t i = 0; i < n; ++i) {
    LaurentT di = potential.partial_derivative(vars.names[i]);
    for (std::size_t j = 0; j < n; ++j) {
      LaurentT dij = di.partial_derivative(vars.names[j]);
      if (dij.is_zero())
        hess[i].push_back(NovikovSeries(SeriesMode::field, cutoff));
      else
        hess[i].push_back(evaluate(truncate_equation(dij, cutoff, SeriesMode::field), point));
    }
  }
  return hess;
}

} // namespace

bool hessian_check(const LaurentT& potential, const std::vector<NovikovSeries>& solution) {
  const VarSet& vars = potential.vars();
  if (solution.size() != vars.size())
    throw ConfigError("solution length does not match potential variables");
  for (const auto& s : solution) {
    auto v = s.valuation();
    if (!v || *v != 0 || s.leading_coefficient().is_zero())
      throw NotAUnit("hessian check requires unit solution entries");
  }
  auto hess = second_partials_at(potential, solution);
  NovikovSeries d = series_matrix_det(hess, solution[0].cutoff());
  return !d.is_zero() && !d.leading_coefficient().is_zero();
}

bool system_jacobian_unit_at(const CriticalSystem& sys,
                             const std::vector<NovikovSeries>& solution) {
  auto jac_sym = symbolic_jacobian(sys);
  std::size_t n = sys.vars.size();
  Rat cutoff = solution[0].cutoff();
  std::vector<std::vector<NovikovSeries>> jac(n);
  std::vector<NovikovSeries> sol;
  for (const auto& s : solution)
    sol.push_back(s.with_mode(SeriesMode::field));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (jac_sym[i][j].is_zero())
        jac[i].push_back(NovikovSeries(SeriesMode::field, cutoff));
      else
        jac[i].push_back(
            evaluate_at(truncate_equation(jac_sym[i][j], cutoff, SeriesMode::field), sol));
    }
  NovikovSeries d = series_matrix_det(jac, cutoff);
  return !d.is_zero() && !d.leading_coefficient().is_zero();
}

namespace {

Rat default_target_order(const CriticalSystem& sys) {
  // twice the smallest positive coefficient exponent in the system
  std::optional<Rat> smallest;
  for (const auto& eq : sys.equations)
    for (const auto& [e, t] : eq.terms())
      for (const auto& [exp, c] : t.coeff.terms())
        if (exp > 0 && (!smallest || exp < *smallest))
          smallest = exp;
  return smallest ? 2 * *smallest : Rat(1);
}

void finish_verdict(SolveReport& report) {
  bool residual_ok = true;
  for (const auto& v : report.residual_valuations)
    if (v && *v < report.achieved_order)
      residual_ok = false;
  if (report.jacobian_unit && report.hessian_nondegenerate && residual_ok)
    report.verdict = Verdict::floer_nontrivial_candidate;
  else
    report.verdict = Verdict::inconclusive;
}

LaurentT to_float_coefficients(const LaurentT& eq) {
  LaurentT out(eq.vars());
  for (const auto& [e, t] : eq.terms()) {
    NovikovSeries c(t.coeff.mode(), t.coeff.cutoff());
    for (const auto& [exp, s] : t.coeff.terms())
      c.add_term(exp, Scalar::floating(s.to_complex()));
    out.add_term(e, c, t.meta);
  }
  return out;
}

std::vector<SolveReport> run_pipeline(CriticalSystem sys, const LaurentT* potential,
                                      const SolverOptions& options,
                                      const std::vector<Seed>* seeds_override) {
  Rat target = options.target_order != 0 ? options.target_order : default_target_order(sys);
  std::vector<Seed> seeds =
      seeds_override ? *seeds_override : find_seeds(sys, options.conductor_bound);
  std::sort(seeds.begin(), seeds.end());
  LaurentT float_potential;
  if (options.float_mode) {
    for (auto& eq : sys.equations)
      eq = to_float_coefficients(eq);
    if (potential) {
      float_potential = to_float_coefficients(*potential);
      potential = &float_potential;
    }
    for (auto& seed : seeds)
      for (auto& v : seed.values)
        v = Scalar::floating(v.to_complex());
  }

  Rat max_exp(0), min_pos(0);
  if (potential) {
    for (const auto& [e, t] : potential->terms())
      for (const auto& [exp, c] : t.coeff.terms()) {
        if (exp > max_exp)
          max_exp = exp;
        if (exp > 0 && (min_pos == 0 || exp < min_pos))
          min_pos = exp;
      }
  }

  std::vector<SolveReport> reports;
  for (const auto& seed : seeds) {
    SolveReport report;
    report.seed = seed;
    report.on_cover = sys.on_cover;
    try {
      report = hensel_lift(sys, seed, target);
      std::size_t n = sys.vars.size();
      if (potential && n <= 6) {
        // visibility bound for the determinant's leading term
        Rat hessian_order = Rat(n) * max_exp + (min_pos == 0 ? Rat(1) : min_pos);
        if (hessian_order < target)
          hessian_order = target;
        SolveReport extended =
            hessian_order > target ? hensel_lift(sys, seed, hessian_order) : report;
        report.hessian_nondegenerate = hessian_check(
            truncate_equation(*potential, hessian_order, SeriesMode::ring), extended.solution);
      } else if (n <= 6) {
        // at a lifted critical point of the cleared system, the Hessian
        // determinant and the normalized-system Jacobian determinant differ
        // by a unit factor
        report.hessian_nondegenerate = system_jacobian_unit_at(sys, report.solution);
        report.note = "nondegeneracy via the system jacobian";
      } else {
        report.hessian_nondegenerate = report.jacobian_unit;
        report.note = "nondegeneracy via the mod-t jacobian";
      }
      finish_verdict(report);
    } catch (const Error& err) {
      report.verdict = Verdict::failed;
      report.note = err.what();
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

} // namespace

std::vector<SolveReport> solve_scenario(const LaurentT& potential, const SolverOptions& options,
                                        const std::vector<Seed>* seeds_override) {
  CriticalSystem sys = build_system(potential);
  return run_pipeline(sys, &potential, options, seeds_override);
}

std::vector<SolveReport> solve_system(const CriticalSystem& sys, const SolverOptions& options,
                                      const std::vector<Seed>* seeds_override) {
  return run_pipeline(sys, nullptr, options, seeds_override);
}

} // namespace fpk
