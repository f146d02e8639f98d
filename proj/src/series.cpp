#include "pvpatch/series.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <sstream>

#include "pvpatch/kernel.hpp"

namespace pvp {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 4;
inline int eff_end(const TSeries& a) { return a.t_exact ? kInf : a.t_end_stored(); }
} // namespace

TSeries TSeries::from_xl(const XLaurent& x0, int t_exp) {
  TSeries s;
  if (x0.is_exact_zero()) return s;
  s.t_lo = t_exp;
  s.rows = {x0};
  return s;
}

TSeries TSeries::from_rational(const Rational& q) {
  return from_xl(XLaurent::mono(0, q));
}

bool TSeries::is_exact_zero() const {
  if (!t_exact) return false;
  for (const auto& r : rows)
    if (!r.is_exact_zero()) return false;
  return true;
}

int TSeries::known_t_end() const { return eff_end(*this); }

XLaurent TSeries::coeff_t(int e) const {
  if (e < t_lo || e >= t_end_stored()) return XLaurent::zero();
  return rows[e - t_lo];
}

void TSeries::normalize() {
  std::size_t drop = 0;
  while (drop < rows.size() && rows[drop].is_exact_zero()) ++drop;
  if (drop) {
    rows.erase(rows.begin(), rows.begin() + static_cast<long>(drop));
    t_lo += static_cast<int>(drop);
  }
  if (t_exact) {
    while (!rows.empty() && rows.back().is_exact_zero()) rows.pop_back();
    if (rows.empty()) t_lo = 0;
  }
}

TSeries TSeries::clamp(const SeriesCtx& ctx) const {
  TSeries r = *this;
  if (r.t_end_stored() > ctx.t_prec) {
    r.rows.resize(static_cast<std::size_t>(std::max(0, ctx.t_prec - r.t_lo)));
    r.t_exact = false;
  }
  for (auto& row : r.rows) row = row.truncate_hi(ctx.x_hi);
  r.normalize();
  return r;
}

TSeries TSeries::add(const TSeries& o, const SeriesCtx& ctx) const {
  if (is_exact_zero()) return o.clamp(ctx);
  if (o.is_exact_zero()) return clamp(ctx);
  TSeries r;
  const bool exact = t_exact && o.t_exact;
  long end = exact ? std::max(t_end_stored(), o.t_end_stored())
                   : std::min(eff_end(*this), eff_end(o));
  bool capped = false;
  if (end > ctx.t_prec) {
    end = ctx.t_prec;
    capped = true;
  }
  const int bot = std::min(t_lo, o.t_lo);
  r.t_exact = exact && !capped;
  r.t_lo = bot;
  if (end <= bot) {
    r.t_exact = false;
    return r; // support bound kept, nothing known at or above it
  }
  r.rows.assign(static_cast<std::size_t>(end - bot), XLaurent());
  for (int e = bot; e < end; ++e) r.rows[e - bot] = coeff_t(e).add(o.coeff_t(e));
  r.normalize();
  return r;
}

TSeries TSeries::neg() const {
  TSeries r = *this;
  for (auto& row : r.rows) row = row.neg();
  return r;
}

TSeries TSeries::mul(const TSeries& o, const SeriesCtx& ctx) const {
  if (is_exact_zero() || o.is_exact_zero()) return TSeries();
  TSeries r;
  const bool exact = t_exact && o.t_exact;
  long end;
  if (exact) {
    end = static_cast<long>(t_end_stored()) + o.t_end_stored() - 1;
  } else {
    end = std::min(static_cast<long>(eff_end(*this)) + o.t_lo,
                   static_cast<long>(eff_end(o)) + t_lo);
  }
  bool capped = false;
  if (end > ctx.t_prec) {
    end = ctx.t_prec;
    capped = true;
  }
  const long bot = static_cast<long>(t_lo) + o.t_lo;
  r.t_lo = static_cast<int>(bot);
  r.t_exact = exact && !capped;
  if (end <= bot) {
    r.t_exact = false;
    return r; // support bound kept, nothing known at or above it
  }
  const long n_rows = end - bot;
  r.rows.assign(static_cast<std::size_t>(n_rows), XLaurent());
  const auto& a = *this;
#pragma omp parallel for schedule(dynamic) if (kernel::parallel_enabled())
  for (long k = 0; k < n_rows; ++k) {
    const long tdeg = bot + k;
    XLaurent acc;
    for (int i = a.t_lo; i < a.t_end_stored(); ++i) {
      const long j = tdeg - i;
      if (j < o.t_lo || j >= o.t_end_stored()) continue;
      const XLaurent& ra = a.rows[i - a.t_lo];
      const XLaurent& rb = o.rows[j - o.t_lo];
      if (ra.is_exact_zero() || rb.is_exact_zero()) continue;
      acc = acc.add(ra.mul(rb, ctx.x_hi));
    }
    r.rows[static_cast<std::size_t>(k)] = acc;
  }
  r.normalize();
  return r;
}

TSeries TSeries::scale(const Rational& q) const {
  if (rat_is_zero(q)) return TSeries();
  TSeries r = *this;
  for (auto& row : r.rows) row = row.scale(q);
  return r;
}

TSeries TSeries::inv(const SeriesCtx& ctx) const {
  TSeries a = *this;
  a.normalize();
  const int v = a.t_valuation(); // throws if uncertifiable
  const long rel_known = a.t_exact ? static_cast<long>(kInf)
                                   : static_cast<long>(a.t_end_stored()) - v;
  const long rel = std::min(rel_known, static_cast<long>(ctx.t_prec) - (-static_cast<long>(v)));
  if (rel <= 0) fail(Errc::PrecisionExhausted, "series inverse falls above the t-precision cap");
  const XLaurent lead = a.coeff_t(v);
  const XLaurent lead_inv = lead.inv(ctx.x_hi);
  TSeries r;
  r.t_lo = -v;
  r.t_exact = false; // conservatively truncated (exact only for monomials)
  if (a.t_exact && a.t_end_stored() - a.t_lo == 1) {
    r.rows = {lead_inv};
    r.t_exact = true;
    return r;
  }
  r.rows.assign(static_cast<std::size_t>(rel), XLaurent());
  r.rows[0] = lead_inv;
  for (long k = 1; k < rel; ++k) {
    XLaurent acc;
    for (long j = 1; j <= k; ++j) {
      const XLaurent aj = a.coeff_t(static_cast<int>(v + j));
      if (aj.is_exact_zero()) continue;
      const XLaurent& bk = r.rows[static_cast<std::size_t>(k - j)];
      if (bk.is_exact_zero()) continue;
      acc = acc.add(aj.mul(bk, ctx.x_hi));
    }
    r.rows[static_cast<std::size_t>(k)] = lead_inv.mul(acc, ctx.x_hi).neg();
  }
  r.normalize();
  return r;
}

TSeries TSeries::derive() const {
  TSeries r = *this;
  for (auto& row : r.rows) row = row.derive();
  r.normalize();
  return r;
}

TSeries TSeries::mul_tpow(int k) const {
  TSeries r = *this;
  if (r.rows.empty() && r.t_exact) return r;
  r.t_lo += k;
  return r;
}

int TSeries::t_valuation() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].is_exact_zero()) continue;
    if (rows[i].stored_zero()) {
      // all-zero window but inexact: nonzeroness of this row is unknowable
      fail(Errc::InsufficientPrecision, "t-valuation blocked by an uncertifiable row");
    }
    return t_lo + static_cast<int>(i);
  }
  if (t_exact) fail(Errc::BadInput, "t-valuation of exact zero");
  fail(Errc::InsufficientPrecision, "no certified nonzero row inside the precision window");
}

bool TSeries::agrees_with(const TSeries& o, const SeriesCtx& ctx) const {
  const int end = std::min({eff_end(*this), eff_end(o), ctx.t_prec});
  const int bot = std::min(t_lo, o.t_lo);
  for (int e = bot; e < end; ++e) {
    if (!coeff_t(e).agrees_with(o.coeff_t(e))) return false;
  }
  return true;
}

bool TSeries::operator==(const TSeries& o) const {
  return t_lo == o.t_lo && t_exact == o.t_exact && rows == o.rows;
}

int TSeries::residual_order(const SeriesCtx& ctx) const {
  const int end = std::min(eff_end(*this), ctx.t_prec);
  for (int e = t_lo; e < end; ++e) {
    if (!coeff_t(e).stored_zero()) return e;
  }
  return end;
}

std::string TSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].is_exact_zero()) continue;
    if (!first) os << " + ";
    os << "t^" << (t_lo + static_cast<int>(i)) << "*(" << rows[i].str() << ")";
    first = false;
  }
  if (first) os << "0";
  if (!t_exact) os << " + O(t^" << t_end_stored() << ")";
  return os.str();
}

} // namespace pvp
