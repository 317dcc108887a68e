#include "fpk/laurent.hpp"

#include <algorithm>
#include <set>

namespace fpk {

VarSet::VarSet(std::vector<std::string> names_in, std::size_t base_count_in)
    : names(std::move(names_in)), base_count(base_count_in) {
  if (base_count > names.size())
    throw ConfigError("base block larger than variable set");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size())
    throw ConfigError("duplicate variable names");
}

std::size_t VarSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name)
      return i;
  throw ConfigError("unknown variable: " + name);
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m;
  m.rows.assign(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i)
    m.rows[i][i] = 1;
  return m;
}

Int IntMatrix::determinant() const {
  std::size_t n = size();
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = Rat(rows[i][j]);
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0)
      ++pivot;
    if (pivot == n)
      return Int(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    Rat inv = Rat(1) / a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0)
        continue;
      Rat f = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c)
        a[r][c] -= f * a[col][c];
    }
  }
  if (det.get_den() != 1)
    throw ConfigError("non-integer determinant");
  return det.get_num();
}

IntMatrix IntMatrix::inverse_unimodular() const {
  std::size_t n = size();
  Int det = determinant();
  if (det != 1 && det != -1)
    throw ConfigError("matrix is not unimodular");
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n)), inv(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = Rat(rows[i][j]);
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (a[pivot][col] == 0)
      ++pivot;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Rat p = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0)
        continue;
      Rat f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  IntMatrix out;
  out.rows.assign(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (inv[i][j].get_den() != 1)
        throw ConfigError("unimodular inverse not integral");
      out.rows[i][j] = inv[i][j].get_num();
    }
  return out;
}

Exponents IntMatrix::apply(const Exponents& v) const {
  std::size_t n = size();
  if (v.size() != n)
    throw ConfigError("vector length does not match matrix size");
  Exponents out(n, Int(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i] += rows[i][j] * v[j];
  return out;
}

LaurentT collapse(const LaurentQR& p, SeriesMode mode) {
  LaurentT out(p.vars());
  for (const auto& [e, t] : p.terms())
    out.add_term(e, collapse(t.coeff, mode), t.meta);
  return out;
}

CriticalSystem clear_denominators(const std::vector<LaurentT>& eqs) {
  CriticalSystem sys;
  for (const auto& eq : eqs) {
    if (eq.is_zero())
      throw ConfigError("cannot clear a zero equation");
    if (sys.equations.empty())
      sys.vars = eq.vars();
    std::size_t n = eq.vars().size();
    Exponents mins(n, Int(0));
    for (const auto& [e, t] : eq.terms())
      for (std::size_t i = 0; i < n; ++i)
        if (e[i] < mins[i])
          mins[i] = e[i];
    LaurentT cleared(eq.vars());
    for (const auto& [e, t] : eq.terms()) {
      Exponents shifted = e;
      for (std::size_t i = 0; i < n; ++i)
        shifted[i] -= mins[i];
      cleared.add_term(shifted, t.coeff, t.meta);
    }
    Exponents clearing(n);
    for (std::size_t i = 0; i < n; ++i)
      clearing[i] = -mins[i];
    sys.equations.push_back(std::move(cleared));
    sys.provenance.push_back(Provenance{"", std::move(clearing), Rat(0)});
  }
  return sys;
}

NovikovSeries evaluate(const LaurentT& p, const std::map<std::string, NovikovSeries>& point) {
  const VarSet& vars = p.vars();
  std::vector<const NovikovSeries*> values(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    auto it = point.find(vars.names[i]);
    if (it == point.end())
      throw ConfigError("evaluation point missing variable " + vars.names[i]);
    values[i] = &it->second;
  }
  std::optional<NovikovSeries> acc;
  for (const auto& [e, t] : p.terms()) {
    NovikovSeries term = t.coeff;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0)
        continue;
      term = term * values[i]->pow(e[i]);
    }
    acc = acc ? *acc + term : term;
  }
  if (!acc) {
    // zero polynomial: produce a zero series matching the point's shape
    if (point.empty())
      throw ConfigError("cannot evaluate the zero polynomial with no point data");
    const NovikovSeries& model = point.begin()->second;
    return NovikovSeries(model.mode(), model.cutoff());
  }
  return *acc;
}

} // namespace fpk
