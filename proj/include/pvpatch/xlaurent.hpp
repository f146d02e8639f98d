#pragma once
#include <string>
#include <vector>

#include "pvpatch/poly.hpp"
#include "pvpatch/rational.hpp"

namespace pvp {

// Window-truncated Laurent series in x over Q.
//
// Invariants: `lo` is a guaranteed lower bound of the support (coefficients
// below `lo` are exactly zero); coefficients are stored for every exponent in
// [lo, hi]. If `exact_hi` the element has no support above `hi` (it is a
// Laurent polynomial); otherwise exponents above `hi` are unknown and equality
// is only meaningful up to `hi`. Arithmetic tracks the guaranteed window.
struct XLaurent {
  int lo = 0;
  int hi = -1; // inclusive; hi = lo - 1 means no stored coefficients
  std::vector<Rational> c;
  bool exact_lo = true; // support bound; stays valid through every operation
  bool exact_hi = true;

  XLaurent() = default; // exact zero

  static XLaurent zero() { return XLaurent(); }
  static XLaurent mono(int e, const Rational& q);
  static XLaurent from_poly(const Poly& p);
  // all-zero window [l, h], unknown above h
  static XLaurent unknown_beyond(int h);

  bool is_exact_zero() const { return c.empty() && exact_hi; }
  // true when every stored coefficient is zero (may still be inexact)
  bool stored_zero() const;
  int known_hi() const { return hi; }
  Rational coeff(int e) const;
  int valuation() const; // lowest nonzero stored exponent; requires !stored_zero()

  void normalize();

  XLaurent add(const XLaurent& o) const;
  XLaurent neg() const;
  XLaurent sub(const XLaurent& o) const { return add(o.neg()); }
  XLaurent mul(const XLaurent& o, int hi_cap) const;
  XLaurent scale(const Rational& q) const;
  XLaurent inv(int hi_cap) const; // InsufficientPrecision if nonzeroness uncertifiable
  XLaurent derive() const;
  XLaurent shift(int k) const; // multiply by x^k
  XLaurent truncate_hi(int h) const;
  XLaurent part_ge(int e) const; // terms with exponent >= e
  XLaurent part_le(int e) const; // terms with exponent <= e; exact by construction

  // agreement on the joint known range (exponents <= min of knowledge bounds,
  // treating exact ends as unbounded)
  bool agrees_with(const XLaurent& o) const;
  bool operator==(const XLaurent& o) const;

  bool is_finite_support() const { return exact_hi; }
  Poly to_poly() const; // requires exact_hi and lo >= 0

  std::string str() const;
};

} // namespace pvp
