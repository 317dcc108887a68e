#ifndef FPK_CYCLOTOMIC_HPP
#define FPK_CYCLOTOMIC_HPP

#include <complex>
#include <vector>

#include "fpk/rational.hpp"

namespace fpk {

// Field data for Q(zeta_n): the n-th cyclotomic polynomial and reduced powers
// x^j mod Phi_n for j in [deg, n). Cached per conductor; shared const access.
struct CycloField {
  long conductor = 1;
  std::vector<Int> minimal_poly;              // monic, ascending, degree phi(n)
  std::vector<std::vector<Rat>> power_table;  // x^(deg+i) reduced, i < n-deg
  long degree() const { return static_cast<long>(minimal_poly.size()) - 1; }
};

const CycloField& cyclotomic_field(long conductor);

// Element of Q(zeta_N) against the power basis (exact mode) or a complex
// double (float mode). Exact and float values never mix in one computation.
class Scalar {
public:
  enum class Mode { exact, floating };
  static constexpr double float_zero_tol = 1e-10;

  Scalar() : Scalar(Rat(0)) {}
  explicit Scalar(const Rat& value);
  explicit Scalar(long value) : Scalar(Rat(value)) {}
  static Scalar root_of_unity(long order, long power);
  static Scalar floating(std::complex<double> value);

  Mode mode() const { return mode_; }
  long conductor() const { return conductor_; }
  bool is_zero() const;
  bool is_rational() const;
  Rat as_rational() const;  // requires is_rational()

  Scalar operator+(const Scalar& other) const;
  Scalar operator-(const Scalar& other) const;
  Scalar operator*(const Scalar& other) const;
  Scalar operator-() const;
  bool operator==(const Scalar& other) const;
  bool operator!=(const Scalar& other) const { return !(*this == other); }

  Scalar invert() const;  // NotAUnit on zero

  std::complex<double> to_complex() const;
  std::string to_string() const;

  // Re-expresses the element in Q(zeta_target); conductor must divide target.
  Scalar embedded(long target_conductor) const;

private:
  Mode mode_ = Mode::exact;
  long conductor_ = 1;
  std::vector<Rat> coeffs_;  // size phi(conductor) in exact mode
  std::complex<double> value_{0.0, 0.0};

  void reduce_conductor_to_rational();
  static void promote(Scalar& a, Scalar& b);
};

} // namespace fpk

#endif
