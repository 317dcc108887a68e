#ifndef FPK_RATIONAL_HPP
#define FPK_RATIONAL_HPP

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace fpk {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct NotAUnit : Error {
  using Error::Error;
};
struct InvalidPoint : Error {
  using Error::Error;
};
struct MonotonicityViolation : Error {
  using Error::Error;
};
struct ScaleOrderViolation : Error {
  using Error::Error;
};
struct DegenerateDirection : Error {
  using Error::Error;
};
struct JacobianNotUnit : Error {
  using Error::Error;
};
struct NoProgress : Error {
  using Error::Error;
};
struct MembershipError : Error {
  using Error::Error;
};
struct Unsupported : Error {
  using Error::Error;
};

inline Rat make_rat(long num, long den = 1) {
  if (den == 0)
    throw ConfigError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "-p", or "p/q" with arbitrary-precision parts.
inline Rat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      Int whole(text);
      return Rat(whole);
    }
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0)
      throw ConfigError("zero denominator in rational literal: " + text);
    Rat r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed rational literal: " + text);
  }
}

inline std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1)
    return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline long to_long(const Int& z) {
  if (!z.fits_slong_p())
    throw ConfigError("integer too large for this operation: " + z.get_str());
  return z.get_si();
}

inline long gcd_long(long a, long b) {
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

inline long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

} // namespace fpk

#endif
