#include "fpk/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace fpk {

namespace {

// Polynomials are coefficient vectors, ascending degree, no trailing zeros.
std::vector<Int> poly_trim(std::vector<Int> p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
  return p;
}

// Exact division of integer polynomials, used to build Phi_n from x^n - 1.
std::vector<Int> poly_div_exact(std::vector<Int> num, const std::vector<Int>& den) {
  num = poly_trim(num);
  std::vector<Int> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Int(0));
  while (num.size() >= den.size() && !num.empty()) {
    Int c = num.back() / den.back();
    size_t shift = num.size() - den.size();
    q[shift] = c;
    for (size_t i = 0; i < den.size(); ++i)
      num[shift + i] -= c * den[i];
    num = poly_trim(num);
  }
  return q;
}

std::vector<Int> cyclotomic_poly(long n, std::map<long, std::vector<Int>>& cache) {
  auto it = cache.find(n);
  if (it != cache.end())
    return it->second;
  std::vector<Int> result(n + 1, Int(0));
  result[0] = -1;
  result[n] = 1;  // x^n - 1
  for (long d = 1; d < n; ++d) {
    if (n % d == 0)
      result = poly_div_exact(result, cyclotomic_poly(d, cache));
  }
  cache[n] = result;
  return result;
}

std::mutex field_mutex;
std::map<long, CycloField> field_cache;

// Reduces a rational polynomial modulo the (monic) minimal polynomial.
std::vector<Rat> reduce_mod(std::vector<Rat> p, const std::vector<Int>& min_poly) {
  long deg = static_cast<long>(min_poly.size()) - 1;
  for (long i = static_cast<long>(p.size()) - 1; i >= deg; --i) {
    if (p[i] == 0)
      continue;
    Rat c = p[i];
    p[i] = 0;
    for (long j = 0; j < deg; ++j)
      p[i - deg + j] -= c * Rat(min_poly[j]);
  }
  p.resize(deg, Rat(0));
  return p;
}

std::vector<Rat> poly_mul_rat(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] += a[i] * b[j];
  }
  return out;
}

bool poly_is_zero(const std::vector<Rat>& p) {
  for (const auto& c : p)
    if (c != 0)
      return false;
  return true;
}

// Extended Euclid over Q[x]: returns s with s*a == gcd (mod m), where m is the
// minimal polynomial. a must be invertible (gcd a nonzero constant).
std::vector<Rat> field_inverse(const std::vector<Rat>& a, const std::vector<Int>& min_poly) {
  auto trim = [](std::vector<Rat> p) {
    while (!p.empty() && p.back() == 0)
      p.pop_back();
    return p;
  };
  std::vector<Rat> r0(min_poly.size());
  for (size_t i = 0; i < min_poly.size(); ++i)
    r0[i] = Rat(min_poly[i]);
  std::vector<Rat> r1 = trim(a);
  std::vector<Rat> s0{Rat(0)}, s1{Rat(1)};
  while (!(r1.size() == 1)) {
    if (r1.empty())
      throw NotAUnit("zero divisor in cyclotomic inversion");
    // divide r0 by r1
    std::vector<Rat> q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, Rat(0));
    std::vector<Rat> rem = r0;
    while (rem.size() >= r1.size() && !rem.empty()) {
      Rat c = rem.back() / r1.back();
      size_t shift = rem.size() - r1.size();
      q[shift] += c;
      for (size_t i = 0; i < r1.size(); ++i)
        rem[shift + i] -= c * r1[i];
      rem = trim(rem);
    }
    std::vector<Rat> s2 = s0;
    {
      auto qs1 = poly_mul_rat(q, s1);
      if (s2.size() < qs1.size())
        s2.resize(qs1.size(), Rat(0));
      for (size_t i = 0; i < qs1.size(); ++i)
        s2[i] -= qs1[i];
    }
    r0 = r1;
    r1 = rem;
    s0 = s1;
    s1 = trim(s2);
  }
  Rat lead = r1[0];
  std::vector<Rat> out = s1.empty() ? std::vector<Rat>{Rat(0)} : s1;
  for (auto& c : out)
    c /= lead;
  return reduce_mod(out, min_poly);
}

} // namespace

const CycloField& cyclotomic_field(long conductor) {
  if (conductor < 1)
    throw ConfigError("conductor must be positive");
  std::lock_guard<std::mutex> lock(field_mutex);
  auto it = field_cache.find(conductor);
  if (it != field_cache.end())
    return it->second;
  static std::map<long, std::vector<Int>> poly_cache;
  CycloField field;
  field.conductor = conductor;
  field.minimal_poly = cyclotomic_poly(conductor, poly_cache);
  long deg = field.degree();
  for (long j = deg; j < conductor; ++j) {
    std::vector<Rat> p(j + 1, Rat(0));
    p[j] = 1;
    field.power_table.push_back(reduce_mod(std::move(p), field.minimal_poly));
  }
  return field_cache.emplace(conductor, std::move(field)).first->second;
}

Scalar::Scalar(const Rat& value) : conductor_(1), coeffs_{value} {}

Scalar Scalar::root_of_unity(long order, long power) {
  if (order < 1)
    throw ConfigError("root of unity order must be positive");
  power %= order;
  if (power < 0)
    power += order;
  long g = gcd_long(power, order);
  order /= g;
  power /= g;  // primitive representation
  if (order == 1)
    return Scalar(Rat(1));
  if (order == 2)
    return Scalar(Rat(-1));
  const CycloField& field = cyclotomic_field(order);
  Scalar s;
  s.conductor_ = order;
  s.coeffs_.assign(field.degree(), Rat(0));
  if (power < field.degree())
    s.coeffs_[power] = 1;
  else
    s.coeffs_ = field.power_table[power - field.degree()];
  return s;
}

Scalar Scalar::floating(std::complex<double> value) {
  Scalar s;
  s.mode_ = Mode::floating;
  s.coeffs_.clear();
  if (std::abs(value.real()) < float_zero_tol)
    value.real(0.0);
  if (std::abs(value.imag()) < float_zero_tol)
    value.imag(0.0);
  s.value_ = value;
  return s;
}

bool Scalar::is_zero() const {
  if (mode_ == Mode::floating)
    return value_ == std::complex<double>(0.0, 0.0);
  for (const auto& c : coeffs_)
    if (c != 0)
      return false;
  return true;
}

bool Scalar::is_rational() const {
  if (mode_ == Mode::floating)
    return false;
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0)
      return false;
  return true;
}

Rat Scalar::as_rational() const {
  if (!is_rational())
    throw ConfigError("scalar is not rational");
  return coeffs_[0];
}

Scalar Scalar::embedded(long target) const {
  if (mode_ == Mode::floating)
    return *this;
  if (target == conductor_)
    return *this;
  if (target % conductor_ != 0)
    throw ConfigError("conductor does not divide embedding target");
  const CycloField& field = cyclotomic_field(target);
  long stride = target / conductor_;
  std::vector<Rat> p(field.degree(), Rat(0));
  auto add_power = [&](long e, const Rat& c) {
    e %= target;
    if (e < field.degree()) {
      p[e] += c;
    } else {
      const auto& row = field.power_table[e - field.degree()];
      for (long j = 0; j < field.degree(); ++j)
        p[j] += c * row[j];
    }
  };
  for (size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0)
      add_power(static_cast<long>(i) * stride, coeffs_[i]);
  Scalar s;
  s.conductor_ = target;
  s.coeffs_ = std::move(p);
  return s;
}

void Scalar::reduce_conductor_to_rational() {
  if (mode_ == Mode::floating || conductor_ == 1)
    return;
  for (size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0)
      return;
  coeffs_.resize(1);
  conductor_ = 1;
}

void Scalar::promote(Scalar& a, Scalar& b) {
  if (a.mode_ != b.mode_) {
    // exact values embed into float mode through their complex value
    if (a.mode_ == Mode::exact)
      a = floating(a.to_complex());
    else
      b = floating(b.to_complex());
  }
  if (a.mode_ == Mode::floating)
    return;
  if (a.conductor_ == b.conductor_)
    return;
  long target = lcm_long(a.conductor_, b.conductor_);
  a = a.embedded(target);
  b = b.embedded(target);
}

Scalar Scalar::operator+(const Scalar& other) const {
  Scalar a = *this, b = other;
  promote(a, b);
  if (a.mode_ == Mode::floating)
    return floating(a.value_ + b.value_);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    a.coeffs_[i] += b.coeffs_[i];
  a.reduce_conductor_to_rational();
  return a;
}

Scalar Scalar::operator-(const Scalar& other) const { return *this + (-other); }

Scalar Scalar::operator-() const {
  Scalar s = *this;
  if (s.mode_ == Mode::floating) {
    s.value_ = -s.value_;
    return s;
  }
  for (auto& c : s.coeffs_)
    c = -c;
  return s;
}

Scalar Scalar::operator*(const Scalar& other) const {
  Scalar a = *this, b = other;
  promote(a, b);
  if (a.mode_ == Mode::floating)
    return floating(a.value_ * b.value_);
  if (a.conductor_ == 1) {
    Scalar s = a;
    s.coeffs_[0] *= b.coeffs_[0];
    return s;
  }
  const CycloField& field = cyclotomic_field(a.conductor_);
  auto prod = poly_mul_rat(a.coeffs_, b.coeffs_);
  Scalar s;
  s.conductor_ = a.conductor_;
  s.coeffs_ = reduce_mod(std::move(prod), field.minimal_poly);
  s.reduce_conductor_to_rational();
  return s;
}

bool Scalar::operator==(const Scalar& other) const { return (*this - other).is_zero(); }

Scalar Scalar::invert() const {
  if (is_zero())
    throw NotAUnit("inverting zero scalar");
  if (mode_ == Mode::floating)
    return floating(1.0 / value_);
  if (conductor_ == 1) {
    Scalar s = *this;
    s.coeffs_[0] = Rat(1) / coeffs_[0];
    return s;
  }
  const CycloField& field = cyclotomic_field(conductor_);
  Scalar s;
  s.conductor_ = conductor_;
  s.coeffs_ = field_inverse(coeffs_, field.minimal_poly);
  s.reduce_conductor_to_rational();
  return s;
}

std::complex<double> Scalar::to_complex() const {
  if (mode_ == Mode::floating)
    return value_;
  std::complex<double> acc(0.0, 0.0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0)
      continue;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(conductor_);
    acc += coeffs_[i].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

std::string Scalar::to_string() const {
  std::ostringstream out;
  if (mode_ == Mode::floating) {
    out << value_.real();
    if (value_.imag() != 0.0)
      out << (value_.imag() > 0 ? "+" : "") << value_.imag() << "i";
    return out.str();
  }
  if (is_rational())
    return rat_to_string(coeffs_[0]);
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0)
      continue;
    if (!first)
      out << " + ";
    first = false;
    out << rat_to_string(coeffs_[i]);
    if (i > 0)
      out << "*zeta" << conductor_ << "^" << i;
  }
  return out.str();
}

} // namespace fpk
