#pragma once
#include <gmpxx.h>
#include <string>
#include <string_view>

#include "pvpatch/errors.hpp"

namespace pvp {

// Exact rationals. mpq_class canonical form is gcd-reduced with positive
// denominator, which is exactly the invariant this type promises.
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
  if (d == 0) fail(Errc::BadInput, "rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string rat_str(const Rational& q) { return q.get_str(); }

inline Rational rat_parse(std::string_view s) {
  Rational q;
  if (q.set_str(std::string(s).c_str(), 10) != 0)
    fail(Errc::BadInput, "unparsable rational '" + std::string(s) + "'");
  if (sgn(q.get_den()) == 0) fail(Errc::BadInput, "zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

} // namespace pvp
