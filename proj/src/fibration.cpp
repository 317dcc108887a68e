#include "fpk/fibration.hpp"

#include <algorithm>

namespace fpk {

void FibrationSpec::validate() const {
  if (coupling <= 0)
    throw ConfigError("coupling must be positive");
  std::size_t disks = base_disk_count();
  if (holonomy_exponents.size() != disks)
    throw ConfigError("holonomy exponent rows must match base disk count");
  std::size_t fiber_vars = vars.size() - vars.base_count;
  for (const auto& row : holonomy_exponents)
    if (row.size() != fiber_vars)
      throw ConfigError("holonomy exponent row length must match fiber variable count");
  if (vertical_shift.size() != disks)
    throw ConfigError("vertical shift length must match base disk count");
  if (sign_convention.size() != disks)
    throw ConfigError("sign convention length must match base disk count");
  for (int s : sign_convention)
    if (s != 1 && s != -1)
      throw ConfigError("signs must be +-1");
  if (static_cast<long>(vars.base_count) != base.dimension())
    throw ConfigError("base variable block must match base dimension");
  if (static_cast<long>(fiber_vars) != fiber.dimension())
    throw ConfigError("fiber variable block must match fiber dimension");
  require_interior(base, base_point);
  if (fiber.dimension() > 0) {
    require_interior(fiber, fiber_point);
    if (!families_mode && !monotone_check(fiber, fiber_point).monotone)
      throw MonotonicityViolation("fiber torus must be monotone outside families mode");
  }
  if (!families_mode) {
    for (const auto& s : vertical_shift)
      if (s != 0)
        throw ConfigError("flat mode forces zero vertical shifts");
  }
}

Rat FibrationSpec::effective_cutoff() const {
  if (cutoff > 0)
    return cutoff;
  Rat smallest(0), largest(0);
  auto scan = [&](const MomentPolytope& p, const InteriorPoint& u) {
    if (p.dimension() == 0)
      return;
    for (const auto& d : disk_classes(p, u)) {
      if (smallest == 0 || d.area < smallest)
        smallest = d.area;
      if (d.area > largest)
        largest = d.area;
    }
  };
  scan(base, base_point);
  scan(fiber, fiber_point);
  if (smallest == 0)
    throw ConfigError("cannot derive a cutoff without disk areas");
  Rat by_smallest = 3 * smallest;
  Rat by_span = largest + smallest;
  return by_smallest > by_span ? by_smallest : by_span;
}

std::vector<Rat> families_shifts(const TwistData& twist) {
  long n = twist.n;
  if (static_cast<long>(twist.alphas.size()) != n)
    throw ConfigError("alpha vector length must equal n");
  Rat sum(0);
  for (const auto& a : twist.alphas) {
    if (a <= 0)
      throw InvalidPoint("alpha must be positive");
    sum += a;
  }
  if (sum >= twist.coupling)
    throw InvalidPoint("alpha must be interior to the scaled simplex");
  Rat balanced = twist.coupling / Rat(n + 1);
  std::vector<Rat> shifts;
  for (const auto& a : twist.alphas)
    shifts.push_back(balanced - a);
  shifts.push_back(sum - Rat(n) * balanced);
  return shifts;
}

LaurentQR lift_base_potential(const FibrationSpec& spec) {
  spec.validate();
  Rat cutoff = spec.effective_cutoff();
  auto classes = disk_classes(spec.base, spec.base_point);
  LaurentQR out(spec.vars);
  std::size_t nb = spec.vars.base_count;
  std::size_t nf = spec.vars.size() - nb;
  for (std::size_t d = 0; d < classes.size(); ++d) {
    Exponents e(spec.vars.size(), Int(0));
    for (std::size_t i = 0; i < nb; ++i)
      e[i] = classes[d].boundary_class[i];
    for (std::size_t i = 0; i < nf; ++i)
      e[nb + i] = spec.holonomy_exponents[d][i];
    DiskMeta meta;
    meta.label = "lift_" + std::to_string(d + 1);
    meta.maslov = 2;
    meta.base_area = classes[d].area;
    meta.vert_area = spec.vertical_shift[d];
    meta.sign = spec.sign_convention[d];
    meta.output = "x_M^M";
    Scalar c(Rat(meta.sign));
    out.add_term(e,
                 BiNovikovSeries::monomial(meta.base_area, meta.vert_area, c, spec.epsilon, cutoff),
                 meta);
  }
  return out;
}

LaurentQR fiber_inclusion_potential(const FibrationSpec& spec) {
  spec.validate();
  Rat cutoff = spec.effective_cutoff();
  LaurentQR out(spec.vars);
  if (spec.fiber.dimension() == 0)
    return out;
  std::size_t nb = spec.vars.base_count;
  for (const auto& d : disk_classes(spec.fiber, spec.fiber_point)) {
    Exponents e(spec.vars.size(), Int(0));
    for (std::size_t i = 0; i < d.boundary_class.size(); ++i)
      e[nb + i] = d.boundary_class[i];
    DiskMeta meta;
    meta.label = "fiber_" + std::to_string(d.facet_index + 1);
    meta.maslov = 2;
    meta.base_area = Rat(0);
    meta.vert_area = d.area;
    meta.sign = 1;
    meta.output = "x_M^M";
    out.add_term(e,
                 BiNovikovSeries::monomial(Rat(0), d.area, Scalar(Rat(1)), spec.epsilon, cutoff),
                 meta);
  }
  return out;
}

namespace {

// Keeps, per output tag, only the terms of minimal total degree (ties kept).
LaurentQR minimal_degree_slice(const LaurentQR& lifted, std::vector<DiskMeta>* discarded) {
  std::map<std::string, Rat> minima;
  for (const auto& [e, t] : lifted.terms()) {
    if (!t.meta)
      throw ConfigError("lifted terms must carry disk metadata");
    Rat total = t.meta->base_area + t.meta->vert_area;
    auto it = minima.find(t.meta->output);
    if (it == minima.end() || total < it->second)
      minima[t.meta->output] = total;
  }
  LaurentQR kept(lifted.vars());
  for (const auto& [e, t] : lifted.terms()) {
    Rat total = t.meta->base_area + t.meta->vert_area;
    if (total == minima[t.meta->output])
      kept.add_term(e, t.coeff, t.meta);
    else if (discarded)
      discarded->push_back(*t.meta);
  }
  return kept;
}

} // namespace

SecondOrderResult second_order_potential(const FibrationSpec& spec) {
  SecondOrderResult result;
  LaurentQR lifted = lift_base_potential(spec);
  LaurentQR kept = minimal_degree_slice(lifted, &result.discarded);
  result.potential = fiber_inclusion_potential(spec) + kept;
  return result;
}

void FlagTower::validate() const {
  if (n < 2)
    throw ConfigError("tower needs ambient dimension at least 2");
  if (k < 1 || k > n)
    throw ConfigError("tower depth must satisfy 1 <= k <= n");
  if (static_cast<long>(level_scales.size()) != k)
    throw ConfigError("one scale per level required");
  for (const auto& s : level_scales)
    if (s <= 0)
      throw ConfigError("level scales must be positive");
  for (long level = 2; level <= k; ++level) {
    if (tower_level_energy(*this, level - 1) <= tower_level_energy(*this, level))
      throw ScaleOrderViolation("level energies must decrease strictly down the tower");
  }
  if (!twists.empty()) {
    if (static_cast<long>(twists.size()) != k - 1)
      throw ConfigError("twists must cover levels 2..k");
    for (long j = 2; j <= k; ++j) {
      const auto& per_level = twists[j - 2];
      if (static_cast<long>(per_level.size()) != j - 1)
        throw ConfigError("level twists must cover earlier levels");
      for (const auto& row : per_level)
        if (static_cast<long>(row.size()) != level_var_count(j))
          throw ConfigError("twist row length must match level variable count");
    }
  }
}

Rat tower_level_energy(const FlagTower& tower, long level) {
  // Clifford area of the level's fiber P^(n+1-level) at the barycenter.
  return tower.level_scales[level - 1] / Rat(tower.n + 2 - level);
}

LaurentQR kth_order_potential(const FlagTower& tower) {
  tower.validate();
  Rat cutoff = tower.cutoff;
  if (cutoff == 0) {
    Rat e_min = tower_level_energy(tower, tower.k);
    Rat e_max = tower_level_energy(tower, 1);
    Rat by_smallest = 3 * e_min;
    Rat by_span = e_max + e_min;
    cutoff = by_smallest > by_span ? by_smallest : by_span;
  }

  std::vector<std::string> names;
  for (long level = 1; level <= tower.k; ++level)
    for (long j = 1; j <= tower.level_var_count(level); ++j)
      names.push_back("x" + std::to_string(level) + "_" + std::to_string(j));
  VarSet vars(names, static_cast<std::size_t>(tower.n));

  LaurentQR out(vars);
  std::size_t offset = 0;
  std::vector<std::size_t> level_offsets;
  for (long level = 1; level <= tower.k; ++level) {
    level_offsets.push_back(offset);
    long width = tower.level_var_count(level);
    Rat energy = tower_level_energy(tower, level);
    // q degrees for already-lifted levels, r for the deepest one
    Rat rho = level < tower.k ? energy : Rat(0);
    Rat eta = level < tower.k ? Rat(0) : energy;
    for (long j = 0; j <= width; ++j) {
      Exponents e(vars.size(), Int(0));
      DiskMeta meta;
      meta.maslov = 2;
      meta.base_area = rho;
      meta.vert_area = eta;
      meta.sign = 1;
      meta.output = "x_M^M";
      if (j < width) {
        e[offset + j] = 1;
        meta.label = "L" + std::to_string(level) + "_" + std::to_string(j + 1);
      } else {
        for (long i = 0; i < width; ++i)
          e[offset + i] = -1;
        // twists from deeper levels act on this inverse term
        if (!tower.twists.empty()) {
          for (long deeper = level + 1; deeper <= tower.k; ++deeper) {
            const auto& row = tower.twists[deeper - 2][level - 1];
            std::size_t deeper_offset = 0;
            for (long l = 1; l < deeper; ++l)
              deeper_offset += tower.level_var_count(l);
            for (std::size_t i = 0; i < row.size(); ++i)
              e[deeper_offset + i] -= row[i];
          }
        }
        meta.label = "L" + std::to_string(level) + "_inv";
      }
      out.add_term(e, BiNovikovSeries::monomial(rho, eta, Scalar(Rat(1)), tower.epsilon, cutoff),
                   meta);
    }
    offset += width;
  }
  return out;
}

} // namespace fpk
