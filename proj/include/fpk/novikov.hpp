#ifndef FPK_NOVIKOV_HPP
#define FPK_NOVIKOV_HPP

#include <optional>
#include <utility>
#include <vector>

#include "fpk/cyclotomic.hpp"
#include "fpk/rational.hpp"

namespace fpk {

enum class SeriesMode { ring, field };

// Truncated element of the one-variable Novikov ring: a finite sum of
// c * t^alpha with rational alpha, stored below the cutoff. In ring mode all
// exponents are >= 0; field mode admits arbitrary exponents.
class NovikovSeries {
public:
  NovikovSeries() = default;
  NovikovSeries(SeriesMode mode, Rat cutoff) : mode_(mode), cutoff_(std::move(cutoff)) {}
  static NovikovSeries constant(const Scalar& c, SeriesMode mode, const Rat& cutoff);
  static NovikovSeries monomial(const Rat& exponent, const Scalar& c, SeriesMode mode,
                                const Rat& cutoff);

  SeriesMode mode() const { return mode_; }
  const Rat& cutoff() const { return cutoff_; }
  const std::vector<std::pair<Rat, Scalar>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // min exponent of the stored terms; nullopt encodes +infinity (zero series)
  std::optional<Rat> valuation() const;
  Scalar coefficient_at(const Rat& exponent) const;
  Scalar leading_coefficient() const;

  NovikovSeries operator+(const NovikovSeries& other) const;
  NovikovSeries operator-(const NovikovSeries& other) const;
  NovikovSeries operator*(const NovikovSeries& other) const;
  NovikovSeries operator-() const;
  bool operator==(const NovikovSeries& other) const;
  bool operator!=(const NovikovSeries& other) const { return !(*this == other); }

  NovikovSeries invert() const;
  NovikovSeries exp() const;
  NovikovSeries pow(const Int& e) const;
  NovikovSeries truncated(const Rat& new_cutoff) const;
  NovikovSeries with_mode(SeriesMode mode) const;
  // multiplies by t^shift (field mode may go negative)
  NovikovSeries shifted(const Rat& shift) const;

  void add_term(const Rat& exponent, const Scalar& c);
  std::string to_string() const;

private:
  SeriesMode mode_ = SeriesMode::ring;
  Rat cutoff_ = Rat(1);
  std::vector<std::pair<Rat, Scalar>> terms_;

  void check_compatible(const NovikovSeries& other) const;
};

// Truncated element of the two-variable ring separating base energy (first
// exponent) from vertical energy (second). Every stored term satisfies
// rho >= 0 and (1-epsilon)*rho + eta >= 0; the cutoff bounds rho + eta.
class BiNovikovSeries {
public:
  BiNovikovSeries() = default;
  BiNovikovSeries(Rat epsilon, Rat cutoff);
  static BiNovikovSeries constant(const Scalar& c, const Rat& epsilon, const Rat& cutoff);
  static BiNovikovSeries monomial(const Rat& rho, const Rat& eta, const Scalar& c,
                                  const Rat& epsilon, const Rat& cutoff);

  const Rat& epsilon() const { return epsilon_; }
  const Rat& cutoff() const { return cutoff_; }
  const std::vector<std::pair<std::pair<Rat, Rat>, Scalar>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::optional<Rat> total_valuation() const;  // min rho+eta

  BiNovikovSeries operator+(const BiNovikovSeries& other) const;
  BiNovikovSeries operator-(const BiNovikovSeries& other) const;
  BiNovikovSeries operator*(const BiNovikovSeries& other) const;
  BiNovikovSeries operator-() const;
  bool operator==(const BiNovikovSeries& other) const;
  bool operator!=(const BiNovikovSeries& other) const { return !(*this == other); }

  BiNovikovSeries invert() const;
  BiNovikovSeries exp() const;
  BiNovikovSeries pow(const Int& e) const;

  void add_term(const Rat& rho, const Rat& eta, const Scalar& c);
  void validate_membership() const;
  std::string to_string() const;

private:
  Rat epsilon_ = Rat(1, 100);
  Rat cutoff_ = Rat(1);
  std::vector<std::pair<std::pair<Rat, Rat>, Scalar>> terms_;

  void check_compatible(const BiNovikovSeries& other) const;
};

// The collapse homomorphism onto the one-variable ring, q^a r^b -> t^(a+b).
NovikovSeries collapse(const BiNovikovSeries& a, SeriesMode mode = SeriesMode::ring);

} // namespace fpk

#endif
