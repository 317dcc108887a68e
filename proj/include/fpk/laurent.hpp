#ifndef FPK_LAURENT_HPP
#define FPK_LAURENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpk/novikov.hpp"

namespace fpk {

// Ordered holonomy variables, partitioned into a base block followed by a
// fiber block.
struct VarSet {
  std::vector<std::string> names;
  std::size_t base_count = 0;

  VarSet() = default;
  VarSet(std::vector<std::string> names_in, std::size_t base_count_in);
  std::size_t size() const { return names.size(); }
  std::size_t index_of(const std::string& name) const;
  bool operator==(const VarSet& other) const {
    return names == other.names && base_count == other.base_count;
  }
};

// Per-term disk bookkeeping carried alongside coefficients.
struct DiskMeta {
  std::string label;
  int maslov = 2;
  Rat base_area = Rat(0);
  Rat vert_area = Rat(0);
  int sign = 1;
  std::string output;  // critical-point tag of the configuration's output
};

using Exponents = std::vector<Int>;

// Square integer matrix helpers (exponent changes of basis).
struct IntMatrix {
  std::vector<std::vector<Int>> rows;
  std::size_t size() const { return rows.size(); }
  static IntMatrix identity(std::size_t n);
  Int determinant() const;  // fraction-free elimination
  IntMatrix inverse_unimodular() const;
  Exponents apply(const Exponents& v) const;  // matrix * column vector
};

template <typename Coeff>
class LaurentPoly {
public:
  struct Term {
    Coeff coeff;
    std::optional<DiskMeta> meta;
  };

  LaurentPoly() = default;
  explicit LaurentPoly(VarSet vars) : vars_(std::move(vars)) {}

  const VarSet& vars() const { return vars_; }
  const std::map<Exponents, Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(const Exponents& exps, const Coeff& coeff,
                std::optional<DiskMeta> meta = std::nullopt) {
    if (exps.size() != vars_.size())
      throw ConfigError("exponent vector length does not match variable count");
    if (coeff.is_zero())
      return;
    if (meta) {
      if constexpr (std::is_same_v<Coeff, BiNovikovSeries>) {
        // disk metadata must agree with the coefficient's degree
        if (coeff.terms().size() == 1 &&
            (coeff.terms()[0].first.first != meta->base_area ||
             coeff.terms()[0].first.second != meta->vert_area))
          throw ConfigError("disk metadata disagrees with the coefficient degree");
      }
    }
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
      terms_.emplace(exps, Term{coeff, std::move(meta)});
    } else {
      it->second.coeff = it->second.coeff + coeff;
      if (it->second.coeff.is_zero())
        terms_.erase(it);
      else if (meta)
        it->second.meta = std::move(meta);
    }
  }

  LaurentPoly operator+(const LaurentPoly& other) const {
    require_same_vars(other);
    LaurentPoly out(vars_);
    for (const auto& [e, t] : terms_)
      out.add_term(e, t.coeff, t.meta);
    for (const auto& [e, t] : other.terms_)
      out.add_term(e, t.coeff, t.meta);
    return out;
  }

  LaurentPoly operator-() const {
    LaurentPoly out(vars_);
    for (const auto& [e, t] : terms_)
      out.add_term(e, -t.coeff, t.meta);
    return out;
  }

  LaurentPoly operator-(const LaurentPoly& other) const { return *this + (-other); }

  // products drop metadata
  LaurentPoly operator*(const LaurentPoly& other) const {
    require_same_vars(other);
    LaurentPoly out(vars_);
    for (const auto& [ea, ta] : terms_)
      for (const auto& [eb, tb] : other.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i)
          e[i] = ea[i] + eb[i];
        out.add_term(e, ta.coeff * tb.coeff);
      }
    return out;
  }

  bool operator==(const LaurentPoly& other) const {
    if (!(vars_ == other.vars_) || terms_.size() != other.terms_.size())
      return false;
    auto it = terms_.begin();
    auto jt = other.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
      if (it->first != jt->first || !(it->second.coeff == jt->second.coeff))
        return false;
    }
    return true;
  }
  bool operator!=(const LaurentPoly& other) const { return !(*this == other); }

  LaurentPoly partial_derivative(const std::string& var) const {
    std::size_t idx = vars_.index_of(var);
    LaurentPoly out(vars_);
    for (const auto& [e, t] : terms_) {
      if (e[idx] == 0)
        continue;
      Exponents shifted = e;
      shifted[idx] -= 1;
      out.add_term(shifted, scale_coeff(t.coeff, Rat(e[idx])));
    }
    return out;
  }

  // exponent vectors transformed by a unimodular matrix
  LaurentPoly substitute_monomial(const IntMatrix& a) const {
    if (a.size() != vars_.size())
      throw ConfigError("change-of-basis size does not match variable count");
    Int det = a.determinant();
    if (det != 1 && det != -1)
      throw ConfigError("change of basis must be unimodular");
    LaurentPoly out(vars_);
    for (const auto& [e, t] : terms_)
      out.add_term(a.apply(e), t.coeff, t.meta);
    return out;
  }

  // Covering substitution used only inside the solver pipeline: variable i of
  // the new set maps each old variable j to new_exponents[j][i]. Not required
  // to be invertible; solutions are reported on the cover.
  LaurentPoly substitute_cover(const VarSet& new_vars,
                               const std::vector<Exponents>& old_var_images) const {
    if (old_var_images.size() != vars_.size())
      throw ConfigError("cover substitution needs one image per variable");
    LaurentPoly out(new_vars);
    for (const auto& [e, t] : terms_) {
      Exponents img(new_vars.size(), Int(0));
      for (std::size_t j = 0; j < e.size(); ++j)
        for (std::size_t i = 0; i < new_vars.size(); ++i)
          img[i] += e[j] * old_var_images[j][i];
      out.add_term(img, t.coeff, t.meta);
    }
    return out;
  }

  std::string to_string() const {
    if (terms_.empty())
      return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, t] : terms_) {
      if (!first)
        out += " + ";
      first = false;
      out += "(" + t.coeff.to_string() + ")";
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
          continue;
        out += "*" + vars_.names[i];
        if (e[i] != 1)
          out += "^" + e[i].get_str();
      }
    }
    return out;
  }

private:
  VarSet vars_;
  std::map<Exponents, Term> terms_;

  void require_same_vars(const LaurentPoly& other) const {
    if (!(vars_ == other.vars_))
      throw ConfigError("variable sets differ");
  }

  static Coeff scale_coeff(const Coeff& c, const Rat& factor);
};

using LaurentQR = LaurentPoly<BiNovikovSeries>;
using LaurentT = LaurentPoly<NovikovSeries>;

template <>
inline NovikovSeries LaurentPoly<NovikovSeries>::scale_coeff(const NovikovSeries& c,
                                                             const Rat& factor) {
  NovikovSeries out(c.mode(), c.cutoff());
  for (const auto& [e, s] : c.terms())
    out.add_term(e, s * Scalar(factor));
  return out;
}

template <>
inline BiNovikovSeries LaurentPoly<BiNovikovSeries>::scale_coeff(const BiNovikovSeries& c,
                                                                 const Rat& factor) {
  BiNovikovSeries out(c.epsilon(), c.cutoff());
  for (const auto& [e, s] : c.terms())
    out.add_term(e.first, e.second, s * Scalar(factor));
  return out;
}

LaurentT collapse(const LaurentQR& p, SeriesMode mode = SeriesMode::ring);

// One cleared polynomial equation per variable, with the bookkeeping of how
// each was produced.
struct Provenance {
  std::string derived_from;   // variable differentiated, or a pipeline note
  Exponents clearing;         // monomial the equation was multiplied by
  Rat t_content = Rat(0);     // power of t divided out during normalization
};

struct CriticalSystem {
  VarSet vars;
  std::vector<LaurentT> equations;
  std::vector<Provenance> provenance;
  bool on_cover = false;  // solutions live on a covering variable
};

// Multiplies each equation by the minimal monomial making exponents >= 0.
CriticalSystem clear_denominators(const std::vector<LaurentT>& eqs);

// Substitution homomorphism at a tuple of unit series.
NovikovSeries evaluate(const LaurentT& p, const std::map<std::string, NovikovSeries>& point);

} // namespace fpk

#endif
