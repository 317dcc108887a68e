#include "fpk/toric.hpp"

#include <algorithm>

namespace fpk {

namespace {

// Linear constraint sum(coeffs_i * x_i) + constant >= 0.
struct LinIneq {
  std::vector<Rat> coeffs;
  Rat constant;
};

// Fourier-Motzkin elimination of variable `var` from the system.
std::vector<LinIneq> eliminate(const std::vector<LinIneq>& system, std::size_t var) {
  std::vector<LinIneq> lower, upper, free;
  for (const auto& ineq : system) {
    if (ineq.coeffs[var] > 0)
      lower.push_back(ineq);
    else if (ineq.coeffs[var] < 0)
      upper.push_back(ineq);
    else
      free.push_back(ineq);
  }
  std::vector<LinIneq> out = free;
  for (const auto& lo : lower)
    for (const auto& up : upper) {
      // lo: a x >= ..., up: -b x >= ... with a,b > 0; combine b*lo + a*up
      Rat a = lo.coeffs[var];
      Rat b = -up.coeffs[var];
      LinIneq combined;
      combined.coeffs.resize(lo.coeffs.size());
      for (std::size_t i = 0; i < lo.coeffs.size(); ++i)
        combined.coeffs[i] = b * lo.coeffs[i] + a * up.coeffs[i];
      combined.constant = b * lo.constant + a * up.constant;
      out.push_back(std::move(combined));
    }
  for (auto& ineq : out)
    ineq.coeffs[var] = 0;
  return out;
}

// Feasibility of the system over the remaining variables after eliminating
// all of them: every constant must be >= 0.
bool feasible(std::vector<LinIneq> system, std::size_t nvars) {
  for (std::size_t v = 0; v < nvars; ++v)
    system = eliminate(system, v);
  for (const auto& ineq : system)
    if (ineq.constant < 0)
      return false;
  return true;
}

} // namespace

MomentPolytope::MomentPolytope(long dimension, std::vector<Facet> facets, Rat scale)
    : dimension_(dimension), facets_(std::move(facets)), scale_(std::move(scale)) {
  validate();
}

MomentPolytope MomentPolytope::simplex(long dimension, Rat scale) {
  std::vector<Facet> facets;
  for (long i = 0; i < dimension; ++i) {
    Facet f;
    f.normal.assign(dimension, Int(0));
    f.normal[i] = 1;
    f.offset = Rat(0);
    facets.push_back(std::move(f));
  }
  Facet last;
  last.normal.assign(dimension, Int(-1));
  last.offset = Rat(-1);
  facets.push_back(std::move(last));
  return MomentPolytope(dimension, std::move(facets), std::move(scale));
}

MomentPolytope MomentPolytope::point() { return MomentPolytope(0, {}, Rat(1)); }

void MomentPolytope::validate() const {
  if (dimension_ < 0)
    throw ConfigError("negative dimension");
  if (scale_ <= 0)
    throw ConfigError("polytope scale must be positive");
  if (dimension_ == 0) {
    if (!facets_.empty())
      throw ConfigError("0-dimensional polytope cannot have facets");
    return;
  }
  for (const auto& f : facets_) {
    if (static_cast<long>(f.normal.size()) != dimension_)
      throw ConfigError("facet normal has wrong dimension");
    Int g(0);
    for (const auto& c : f.normal)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g != 1)
      throw ConfigError("facet normal must be primitive");
  }
  // Bounded: the recession cone {<normal_i, u> >= 0} contains no ray. For each
  // coordinate direction, check infeasibility of the cone cut by u_j = +-1.
  std::size_t n = static_cast<std::size_t>(dimension_);
  for (std::size_t j = 0; j < n; ++j) {
    for (int sign : {1, -1}) {
      std::vector<LinIneq> system;
      for (const auto& f : facets_) {
        LinIneq ineq;
        ineq.coeffs.resize(n);
        for (std::size_t i = 0; i < n; ++i)
          ineq.coeffs[i] = Rat(f.normal[i]);
        // substitute u_j = sign
        ineq.constant = sign * ineq.coeffs[j];
        ineq.coeffs[j] = 0;
        system.push_back(std::move(ineq));
      }
      if (feasible(std::move(system), n))
        throw ConfigError("polytope is unbounded");
    }
  }
  // Full-dimensional: the slack system <normal_i, u> - offset_i - lambda >= 0
  // admits lambda > 0. Eliminate u, then read the upper bounds on lambda.
  std::vector<LinIneq> slack_system;
  for (const auto& f : facets_) {
    LinIneq ineq;
    ineq.coeffs.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i)
      ineq.coeffs[i] = Rat(f.normal[i]);
    ineq.coeffs[n] = Rat(-1);
    ineq.constant = -f.offset;
    slack_system.push_back(std::move(ineq));
  }
  for (std::size_t v = 0; v < n; ++v)
    slack_system = eliminate(slack_system, v);
  // remaining constraints are of the form c_lambda * lambda + const >= 0
  Rat best_upper;  // smallest upper bound on lambda; unset means unbounded above
  bool has_upper = false;
  for (const auto& ineq : slack_system) {
    const Rat& c = ineq.coeffs[n];
    if (c < 0) {
      Rat bound = ineq.constant / (-c);
      if (!has_upper || bound < best_upper) {
        best_upper = bound;
        has_upper = true;
      }
    } else if (c == 0 && ineq.constant < 0) {
      throw ConfigError("polytope is empty");
    }
  }
  if (has_upper && best_upper <= 0)
    throw ConfigError("polytope is not full-dimensional");
}

Rat MomentPolytope::slack(const Facet& f, const std::vector<Rat>& u) const {
  Rat s(0);
  for (std::size_t i = 0; i < f.normal.size(); ++i)
    s += Rat(f.normal[i]) * u[i];
  return s - f.offset;
}

void require_interior(const MomentPolytope& p, const InteriorPoint& u) {
  if (static_cast<long>(u.coords.size()) != p.dimension())
    throw InvalidPoint("point dimension mismatch");
  for (const auto& f : p.facets())
    if (p.slack(f, u.coords) <= 0)
      throw InvalidPoint("point is not interior to the polytope");
}

std::vector<DiskClass> disk_classes(const MomentPolytope& p, const InteriorPoint& u) {
  require_interior(p, u);
  std::vector<DiskClass> out;
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    const Facet& f = p.facets()[i];
    DiskClass d;
    d.facet_index = i;
    d.boundary_class = f.normal;
    d.area = p.scale() * p.slack(f, u.coords);
    d.maslov = 2;
    out.push_back(std::move(d));
  }
  return out;
}

LaurentQR toric_potential(const MomentPolytope& p, const InteriorPoint& u, const VarSet& vars,
                          FormalVariable formal, const Rat& epsilon, const Rat& cutoff,
                          const std::string& output_tag, const std::string& label_prefix) {
  if (static_cast<long>(vars.size()) != p.dimension())
    throw ConfigError("variable count does not match polytope dimension");
  LaurentQR out(vars);
  auto classes = disk_classes(p, u);
  for (const auto& d : classes) {
    Exponents e(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i)
      e[i] = d.boundary_class[i];
    Rat rho = formal == FormalVariable::q ? d.area : Rat(0);
    Rat eta = formal == FormalVariable::r ? d.area : Rat(0);
    DiskMeta meta;
    meta.label = label_prefix + "_" + std::to_string(d.facet_index + 1);
    meta.maslov = d.maslov;
    meta.base_area = rho;
    meta.vert_area = eta;
    meta.sign = 1;
    meta.output = output_tag;
    out.add_term(e, BiNovikovSeries::monomial(rho, eta, Scalar(Rat(1)), epsilon, cutoff), meta);
  }
  return out;
}

MonotoneResult monotone_check(const MomentPolytope& p, const InteriorPoint& u) {
  require_interior(p, u);
  MonotoneResult result;
  result.monotone = true;
  for (const auto& f : p.facets()) {
    result.distances.push_back(p.slack(f, u.coords));
    if (result.distances.back() != result.distances.front())
      result.monotone = false;
  }
  return result;
}

} // namespace fpk
