#include "fpk/novikov.hpp"

#include <algorithm>
#include <sstream>

namespace fpk {

NovikovSeries NovikovSeries::constant(const Scalar& c, SeriesMode mode, const Rat& cutoff) {
  NovikovSeries s(mode, cutoff);
  s.add_term(Rat(0), c);
  return s;
}

NovikovSeries NovikovSeries::monomial(const Rat& exponent, const Scalar& c, SeriesMode mode,
                                      const Rat& cutoff) {
  NovikovSeries s(mode, cutoff);
  s.add_term(exponent, c);
  return s;
}

void NovikovSeries::add_term(const Rat& exponent, const Scalar& c) {
  if (c.is_zero())
    return;
  if (mode_ == SeriesMode::ring && exponent < 0)
    throw MembershipError("negative exponent in ring-mode Novikov series");
  if (exponent >= cutoff_)
    return;  // eager truncation
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                             [](const auto& term, const Rat& e) { return term.first < e; });
  if (it != terms_.end() && it->first == exponent) {
    it->second = it->second + c;
    if (it->second.is_zero())
      terms_.erase(it);
  } else {
    terms_.insert(it, {exponent, c});
  }
}

void NovikovSeries::check_compatible(const NovikovSeries& other) const {
  if (mode_ != other.mode_ || cutoff_ != other.cutoff_)
    throw ConfigError("Novikov series cutoff/mode mismatch");
}

std::optional<Rat> NovikovSeries::valuation() const {
  if (terms_.empty())
    return std::nullopt;
  return terms_.front().first;
}

Scalar NovikovSeries::coefficient_at(const Rat& exponent) const {
  for (const auto& [e, c] : terms_)
    if (e == exponent)
      return c;
  return Scalar(Rat(0));
}

Scalar NovikovSeries::leading_coefficient() const {
  if (terms_.empty())
    return Scalar(Rat(0));
  return terms_.front().second;
}

NovikovSeries NovikovSeries::operator+(const NovikovSeries& other) const {
  check_compatible(other);
  NovikovSeries out(mode_, cutoff_);
  for (const auto& [e, c] : terms_)
    out.add_term(e, c);
  for (const auto& [e, c] : other.terms_)
    out.add_term(e, c);
  return out;
}

NovikovSeries NovikovSeries::operator-() const {
  NovikovSeries out(mode_, cutoff_);
  for (const auto& [e, c] : terms_)
    out.terms_.emplace_back(e, -c);
  return out;
}

NovikovSeries NovikovSeries::operator-(const NovikovSeries& other) const {
  return *this + (-other);
}

NovikovSeries NovikovSeries::operator*(const NovikovSeries& other) const {
  check_compatible(other);
  NovikovSeries out(mode_, cutoff_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : other.terms_) {
      Rat e = ea + eb;
      if (e < cutoff_)
        out.add_term(e, ca * cb);
    }
  return out;
}

bool NovikovSeries::operator==(const NovikovSeries& other) const {
  if (mode_ != other.mode_ || cutoff_ != other.cutoff_ || terms_.size() != other.terms_.size())
    return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].first != other.terms_[i].first || terms_[i].second != other.terms_[i].second)
      return false;
  return true;
}

NovikovSeries NovikovSeries::truncated(const Rat& new_cutoff) const {
  NovikovSeries out(mode_, new_cutoff);
  for (const auto& [e, c] : terms_)
    out.add_term(e, c);
  return out;
}

NovikovSeries NovikovSeries::with_mode(SeriesMode mode) const {
  NovikovSeries out(mode, cutoff_);
  for (const auto& [e, c] : terms_)
    out.add_term(e, c);
  return out;
}

NovikovSeries NovikovSeries::shifted(const Rat& shift) const {
  NovikovSeries out(mode_, cutoff_);
  for (const auto& [e, c] : terms_)
    out.add_term(e + shift, c);
  return out;
}

NovikovSeries NovikovSeries::invert() const {
  if (terms_.empty())
    throw NotAUnit("inverting the zero series");
  Rat v = terms_.front().first;
  if (mode_ == SeriesMode::ring && v != 0)
    throw NotAUnit("ring-mode series with positive valuation is not a unit");
  Scalar lead_inv = terms_.front().second.invert();
  // a = c t^v (1 + h); a^-1 = c^-1 t^-v sum (-h)^n
  NovikovSeries h(mode_, cutoff_);
  for (size_t i = 1; i < terms_.size(); ++i)
    h.add_term(terms_[i].first - v, lead_inv * terms_[i].second);
  NovikovSeries acc = constant(Scalar(Rat(1)), mode_, cutoff_);
  NovikovSeries power = acc;
  NovikovSeries neg_h = -h;
  while (!h.is_zero()) {
    power = power * neg_h;
    if (power.is_zero())
      break;
    acc = acc + power;
  }
  NovikovSeries out(mode_, cutoff_);
  for (const auto& [e, c] : acc.terms_) {
    Rat shifted_e = e - v;
    if (mode_ == SeriesMode::ring && shifted_e < 0)
      throw NotAUnit("inverse leaves the ring");
    if (shifted_e < cutoff_)
      out.add_term(shifted_e, lead_inv * c);
  }
  return out;
}

NovikovSeries NovikovSeries::exp() const {
  Scalar c0 = coefficient_at(Rat(0));
  NovikovSeries positive(mode_, cutoff_);
  for (const auto& [e, c] : terms_) {
    if (e < 0)
      throw ConfigError("exp requires non-negative valuation");
    if (e > 0)
      positive.add_term(e, c);
  }
  Scalar front(Rat(1));
  if (!c0.is_zero()) {
    if (c0.mode() == Scalar::Mode::exact)
      throw ConfigError("exp of a nonzero constant term leaves the exact coefficient field");
    front = Scalar::floating(std::exp(c0.to_complex()));
  }
  NovikovSeries acc = constant(front, mode_, cutoff_);
  if (positive.is_zero())
    return acc;
  NovikovSeries power = constant(front, mode_, cutoff_);
  Rat minexp = *positive.valuation();
  Int factorial(1);
  for (long n = 1; Rat(n) * minexp < cutoff_; ++n) {
    power = power * positive;
    factorial *= n;
    if (power.is_zero())
      break;
    NovikovSeries term(mode_, cutoff_);
    Rat f(factorial);
    for (const auto& [e, c] : power.terms_)
      term.add_term(e, c * Scalar(Rat(1) / f));
    acc = acc + term;
  }
  return acc;
}

NovikovSeries NovikovSeries::pow(const Int& e) const {
  if (e < 0)
    return invert().pow(-e);
  NovikovSeries base = *this;
  NovikovSeries out = constant(Scalar(Rat(1)), mode_, cutoff_);
  Int k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t()))
      out = out * base;
    k >>= 1;
    if (k > 0)
      base = base * base;
  }
  return out;
}

std::string NovikovSeries::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first)
      out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    if (e != 0)
      out << "*t^" << rat_to_string(e);
  }
  return out.str();
}

BiNovikovSeries::BiNovikovSeries(Rat epsilon, Rat cutoff)
    : epsilon_(std::move(epsilon)), cutoff_(std::move(cutoff)) {
  if (epsilon_ <= 0 || epsilon_ >= 1)
    throw ConfigError("epsilon must lie in (0,1)");
}

BiNovikovSeries BiNovikovSeries::constant(const Scalar& c, const Rat& epsilon, const Rat& cutoff) {
  BiNovikovSeries s(epsilon, cutoff);
  s.add_term(Rat(0), Rat(0), c);
  return s;
}

BiNovikovSeries BiNovikovSeries::monomial(const Rat& rho, const Rat& eta, const Scalar& c,
                                          const Rat& epsilon, const Rat& cutoff) {
  BiNovikovSeries s(epsilon, cutoff);
  s.add_term(rho, eta, c);
  return s;
}

void BiNovikovSeries::add_term(const Rat& rho, const Rat& eta, const Scalar& c) {
  if (c.is_zero())
    return;
  if (rho < 0)
    throw MembershipError("negative base exponent");
  if ((Rat(1) - epsilon_) * rho + eta < 0)
    throw MembershipError("term violates the (1-epsilon)*rho + eta >= 0 bound");
  if (rho + eta >= cutoff_)
    return;
  std::pair<Rat, Rat> key{rho, eta};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const auto& term, const std::pair<Rat, Rat>& k) {
                               return term.first < k;
                             });
  if (it != terms_.end() && it->first == key) {
    it->second = it->second + c;
    if (it->second.is_zero())
      terms_.erase(it);
  } else {
    terms_.insert(it, {key, c});
  }
}

void BiNovikovSeries::validate_membership() const {
  for (const auto& [e, c] : terms_) {
    if (e.first < 0 || (Rat(1) - epsilon_) * e.first + e.second < 0 || e.first + e.second >= cutoff_)
      throw MembershipError("stored term violates ring membership");
    if (c.is_zero())
      throw MembershipError("stored zero coefficient");
  }
}

void BiNovikovSeries::check_compatible(const BiNovikovSeries& other) const {
  if (epsilon_ != other.epsilon_ || cutoff_ != other.cutoff_)
    throw ConfigError("two-variable series epsilon/cutoff mismatch");
}

std::optional<Rat> BiNovikovSeries::total_valuation() const {
  std::optional<Rat> best;
  for (const auto& [e, c] : terms_) {
    Rat total = e.first + e.second;
    if (!best || total < *best)
      best = total;
  }
  return best;
}

BiNovikovSeries BiNovikovSeries::operator+(const BiNovikovSeries& other) const {
  check_compatible(other);
  BiNovikovSeries out(epsilon_, cutoff_);
  for (const auto& [e, c] : terms_)
    out.add_term(e.first, e.second, c);
  for (const auto& [e, c] : other.terms_)
    out.add_term(e.first, e.second, c);
  return out;
}

BiNovikovSeries BiNovikovSeries::operator-() const {
  BiNovikovSeries out(epsilon_, cutoff_);
  for (const auto& [e, c] : terms_)
    out.terms_.emplace_back(e, -c);
  return out;
}

BiNovikovSeries BiNovikovSeries::operator-(const BiNovikovSeries& other) const {
  return *this + (-other);
}

BiNovikovSeries BiNovikovSeries::operator*(const BiNovikovSeries& other) const {
  check_compatible(other);
  BiNovikovSeries out(epsilon_, cutoff_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : other.terms_)
      out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return out;
}

bool BiNovikovSeries::operator==(const BiNovikovSeries& other) const {
  if (epsilon_ != other.epsilon_ || cutoff_ != other.cutoff_ ||
      terms_.size() != other.terms_.size())
    return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].first != other.terms_[i].first || terms_[i].second != other.terms_[i].second)
      return false;
  return true;
}

BiNovikovSeries BiNovikovSeries::invert() const {
  if (terms_.empty())
    throw NotAUnit("inverting the zero series");
  // unit iff the (0,0) term is an invertible scalar and leads the series
  const auto& lead = terms_.front();
  if (lead.first.first != 0 || lead.first.second != 0)
    throw NotAUnit("two-variable series without constant term is not a unit");
  Scalar lead_inv = lead.second.invert();
  BiNovikovSeries h(epsilon_, cutoff_);
  for (size_t i = 1; i < terms_.size(); ++i)
    h.add_term(terms_[i].first.first, terms_[i].first.second, lead_inv * terms_[i].second);
  BiNovikovSeries acc = constant(Scalar(Rat(1)), epsilon_, cutoff_);
  BiNovikovSeries power = acc;
  BiNovikovSeries neg_h = -h;
  while (!power.is_zero()) {
    power = power * neg_h;
    if (power.is_zero())
      break;
    acc = acc + power;
  }
  BiNovikovSeries out(epsilon_, cutoff_);
  for (const auto& [e, c] : acc.terms_)
    out.add_term(e.first, e.second, lead_inv * c);
  return out;
}

BiNovikovSeries BiNovikovSeries::exp() const {
  Scalar c0(Rat(0));
  BiNovikovSeries positive(epsilon_, cutoff_);
  for (const auto& [e, c] : terms_) {
    if (e.first == 0 && e.second == 0)
      c0 = c;
    else
      positive.add_term(e.first, e.second, c);
  }
  Scalar front(Rat(1));
  if (!c0.is_zero()) {
    if (c0.mode() == Scalar::Mode::exact)
      throw ConfigError("exp of a nonzero constant term leaves the exact coefficient field");
    front = Scalar::floating(std::exp(c0.to_complex()));
  }
  BiNovikovSeries acc = constant(front, epsilon_, cutoff_);
  if (positive.is_zero())
    return acc;
  BiNovikovSeries power = constant(front, epsilon_, cutoff_);
  Rat minexp = *positive.total_valuation();
  if (minexp <= 0)
    throw ConfigError("exp requires positive total valuation beyond the constant term");
  Int factorial(1);
  for (long n = 1; Rat(n) * minexp < cutoff_; ++n) {
    power = power * positive;
    factorial *= n;
    if (power.is_zero())
      break;
    Rat f(factorial);
    BiNovikovSeries term(epsilon_, cutoff_);
    for (const auto& [e, c] : power.terms_)
      term.add_term(e.first, e.second, c * Scalar(Rat(1) / f));
    acc = acc + term;
  }
  return acc;
}

BiNovikovSeries BiNovikovSeries::pow(const Int& e) const {
  if (e < 0)
    return invert().pow(-e);
  BiNovikovSeries base = *this;
  BiNovikovSeries out = constant(Scalar(Rat(1)), epsilon_, cutoff_);
  Int k = e;
  while (k > 0) {
    if (mpz_odd_p(k.get_mpz_t()))
      out = out * base;
    k >>= 1;
    if (k > 0)
      base = base * base;
  }
  return out;
}

std::string BiNovikovSeries::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first)
      out << " + ";
    first = false;
    out << "(" << c.to_string() << ")";
    if (e.first != 0)
      out << "*q^" << rat_to_string(e.first);
    if (e.second != 0)
      out << "*r^" << rat_to_string(e.second);
  }
  return out.str();
}

NovikovSeries collapse(const BiNovikovSeries& a, SeriesMode mode) {
  NovikovSeries out(mode, a.cutoff());
  for (const auto& [e, c] : a.terms())
    out.add_term(e.first + e.second, c);
  return out;
}

} // namespace fpk
