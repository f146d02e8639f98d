#pragma once
#include <string>
#include <vector>

#include "pvpatch/xlaurent.hpp"

namespace pvp {

// Working precision of a run: everything is computed modulo t^t_prec with
// x-windows capped at x_hi (x_lo is the reporting floor and the reconstruction
// equation range; supports below it are kept, not silently dropped).
struct SeriesCtx {
  int t_prec = 10;
  int x_lo = -12;
  int x_hi = 12;
};

// Truncated series sum_i t^i c_i(x) with XLaurent coefficients.
//
// `t_lo` is a guaranteed lower bound of the t-support; rows are stored for
// t-exponents [t_lo, t_lo + rows.size()). If `t_exact`, there is no support at
// or above the end of the stored rows; otherwise higher t-terms are unknown
// and equality is meaningful only below the knowledge bound.
struct TSeries {
  int t_lo = 0;
  std::vector<XLaurent> rows;
  bool t_exact = true;

  TSeries() = default; // exact zero

  static TSeries zero() { return TSeries(); }
  static TSeries from_xl(const XLaurent& x0, int t_exp = 0);
  static TSeries from_rational(const Rational& q);
  static TSeries tpow(int k) { return from_xl(XLaurent::mono(0, Rational(1)), k); }

  bool is_exact_zero() const;
  // exclusive t knowledge bound (large sentinel when t_exact)
  int known_t_end() const;
  int t_end_stored() const { return t_lo + static_cast<int>(rows.size()); }
  XLaurent coeff_t(int e) const;
  const XLaurent& row(int idx) const { return rows[idx]; }

  void normalize();

  TSeries add(const TSeries& o, const SeriesCtx& ctx) const;
  TSeries neg() const;
  TSeries sub(const TSeries& o, const SeriesCtx& ctx) const { return add(o.neg(), ctx); }
  TSeries mul(const TSeries& o, const SeriesCtx& ctx) const;
  TSeries scale(const Rational& q) const;
  TSeries inv(const SeriesCtx& ctx) const;
  TSeries derive() const;       // d/dx, t constant
  TSeries mul_tpow(int k) const;
  TSeries clamp(const SeriesCtx& ctx) const;

  // certified t-valuation: index of the first row with a certified nonzero
  // coefficient; rows that are all-zero but inexact make it uncertifiable
  int t_valuation() const;

  bool agrees_with(const TSeries& o, const SeriesCtx& ctx) const;
  bool operator==(const TSeries& o) const;

  // order of this series viewed as a residual: smallest t-exponent with a
  // nonzero known coefficient, or the knowledge bound if none (i.e. the
  // residual vanishes to working precision)
  int residual_order(const SeriesCtx& ctx) const;
  bool is_zero_to_precision(const SeriesCtx& ctx) const {
    return residual_order(ctx) >= ctx.t_prec;
  }

  std::string str() const;
};

} // namespace pvp
