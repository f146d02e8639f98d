#include "pvpatch/xlaurent.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pvp {

namespace {
constexpr int kInf = std::numeric_limits<int>::max() / 4;
inline int eff_hi(const XLaurent& a) { return a.exact_hi ? kInf : a.hi; }
} // namespace

XLaurent XLaurent::mono(int e, const Rational& q) {
  XLaurent r;
  if (rat_is_zero(q)) return r;
  r.lo = e;
  r.hi = e;
  r.c = {q};
  return r;
}

XLaurent XLaurent::from_poly(const Poly& p) {
  XLaurent r;
  if (p.is_zero()) return r;
  r.lo = 0;
  r.hi = p.deg();
  r.c = p.c;
  r.normalize();
  return r;
}

XLaurent XLaurent::unknown_beyond(int h) {
  XLaurent r;
  r.lo = h + 1;
  r.hi = h;
  r.exact_hi = false;
  return r;
}

bool XLaurent::stored_zero() const {
  for (const auto& q : c)
    if (!rat_is_zero(q)) return false;
  return true;
}

Rational XLaurent::coeff(int e) const {
  if (e < lo || e > hi) return Rational(0);
  return c[e - lo];
}

int XLaurent::valuation() const {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!rat_is_zero(c[i])) return lo + static_cast<int>(i);
  fail(Errc::InsufficientPrecision, "valuation of a window with no nonzero coefficient");
}

void XLaurent::normalize() {
  std::size_t drop = 0;
  while (drop < c.size() && rat_is_zero(c[drop])) ++drop;
  if (drop) {
    c.erase(c.begin(), c.begin() + static_cast<long>(drop));
    lo += static_cast<int>(drop);
  }
  if (exact_hi) {
    while (!c.empty() && rat_is_zero(c.back())) {
      c.pop_back();
      --hi;
    }
    if (c.empty()) {
      lo = 0;
      hi = -1;
    } else {
      hi = lo + static_cast<int>(c.size()) - 1;
    }
  } else if (c.empty()) {
    lo = hi + 1;
  }
}

XLaurent XLaurent::add(const XLaurent& o) const {
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  XLaurent r;
  const int h = std::min(eff_hi(*this), eff_hi(o));
  r.exact_hi = (h >= kInf / 2);
  const int top = r.exact_hi ? std::max(hi, o.hi) : h;
  const int bot = std::min(lo, o.lo);
  if (top < bot) {
    // nothing jointly known beyond support bounds
    r = unknown_beyond(top);
    return r;
  }
  r.lo = bot;
  r.hi = top;
  r.c.assign(static_cast<std::size_t>(top - bot + 1), Rational(0));
  for (int e = bot; e <= top; ++e) r.c[e - bot] = coeff(e) + o.coeff(e);
  r.normalize();
  return r;
}

XLaurent XLaurent::neg() const {
  XLaurent r = *this;
  for (auto& q : r.c) q = -q;
  return r;
}

XLaurent XLaurent::mul(const XLaurent& o, int hi_cap) const {
  XLaurent r;
  if (is_exact_zero() || o.is_exact_zero()) return r;
  const bool exact = exact_hi && o.exact_hi;
  long top;
  if (exact) {
    top = static_cast<long>(hi) + o.hi;
  } else {
    top = std::min(static_cast<long>(eff_hi(*this)) + o.lo,
                   static_cast<long>(eff_hi(o)) + lo);
  }
  bool capped = false;
  if (top > hi_cap) {
    top = hi_cap;
    capped = true;
  }
  const long bot = static_cast<long>(lo) + o.lo;
  if (top < bot) {
    r = unknown_beyond(static_cast<int>(top));
    return r;
  }
  r.lo = static_cast<int>(bot);
  r.hi = static_cast<int>(top);
  r.exact_hi = exact && !capped;
  r.c.assign(static_cast<std::size_t>(top - bot + 1), Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (rat_is_zero(c[i])) continue;
    const long ea = lo + static_cast<long>(i);
    for (std::size_t j = 0; j < o.c.size(); ++j) {
      if (rat_is_zero(o.c[j])) continue;
      const long e = ea + o.lo + static_cast<long>(j);
      if (e > top) break;
      r.c[e - bot] += c[i] * o.c[j];
    }
  }
  r.normalize();
  return r;
}

XLaurent XLaurent::scale(const Rational& q) const {
  if (rat_is_zero(q)) {
    // scaling by zero is exact regardless of our window
    return XLaurent();
  }
  XLaurent r = *this;
  for (auto& v : r.c) v *= q;
  return r;
}

XLaurent XLaurent::inv(int hi_cap) const {
  if (stored_zero()) {
    if (exact_hi) fail(Errc::BadInput, "inverse of zero");
    fail(Errc::InsufficientPrecision, "cannot certify a nonzero lowest term inside the window");
  }
  XLaurent a = *this;
  a.normalize();
  const int v = a.lo; // nonzero after normalize
  const long rel = exact_hi ? static_cast<long>(kInf) : static_cast<long>(a.hi) - v;
  long out_rel = std::min(rel, static_cast<long>(hi_cap) - (-static_cast<long>(v)));
  if (out_rel < 0) fail(Errc::WindowExhausted, "inverse falls entirely above the window cap");
  const bool exact_mono = exact_hi && a.c.size() == 1;
  XLaurent r;
  r.lo = -v;
  r.hi = static_cast<int>(-static_cast<long>(v) + out_rel);
  r.exact_hi = exact_mono;
  if (exact_mono) {
    r.hi = -v;
    r.c = {1 / a.c[0]};
    return r;
  }
  r.c.assign(static_cast<std::size_t>(out_rel + 1), Rational(0));
  const Rational lead_inv = 1 / a.c[0];
  r.c[0] = lead_inv;
  for (long k = 1; k <= out_rel; ++k) {
    Rational acc(0);
    const long jmax = std::min<long>(k, static_cast<long>(a.c.size()) - 1);
    for (long j = 1; j <= jmax; ++j) {
      if (rat_is_zero(a.c[j])) continue;
      acc += a.c[j] * r.c[k - j];
    }
    r.c[k] = -lead_inv * acc;
  }
  r.normalize();
  return r;
}

XLaurent XLaurent::derive() const {
  XLaurent r;
  if (is_exact_zero()) return r;
  r.lo = lo - 1;
  r.exact_hi = exact_hi;
  r.hi = exact_hi ? hi - 1 : hi - 1;
  if (!c.empty()) {
    r.c.assign(c.size(), Rational(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      const long e = lo + static_cast<long>(i);
      r.c[i] = c[i] * Rational(e);
    }
  }
  r.normalize();
  return r;
}

XLaurent XLaurent::shift(int k) const {
  XLaurent r = *this;
  if (r.is_exact_zero()) return r;
  r.lo += k;
  r.hi += k;
  return r;
}

XLaurent XLaurent::truncate_hi(int h) const {
  if (hi <= h) return *this; // exact stays exact; inexact knowledge cannot grow
  XLaurent r;
  if (h < lo) {
    r = unknown_beyond(h);
    return r;
  }
  r.lo = lo;
  r.hi = h;
  r.exact_hi = false;
  r.c.assign(c.begin(), c.begin() + (h - lo + 1));
  r.normalize();
  return r;
}

XLaurent XLaurent::part_ge(int e) const {
  XLaurent r = *this;
  if (r.is_exact_zero() || e <= lo) return r;
  if (e > hi) {
    if (exact_hi) return XLaurent();
    return unknown_beyond(hi); // nothing known at or above e... keep knowledge bound
  }
  r.c.erase(r.c.begin(), r.c.begin() + (e - lo));
  r.lo = e;
  r.normalize();
  return r;
}

XLaurent XLaurent::part_le(int e) const {
  XLaurent r;
  if (is_exact_zero() || e < lo) return r;
  const int top = std::min(e, hi);
  r.lo = lo;
  r.hi = top;
  r.exact_hi = true; // finite by construction
  r.c.assign(c.begin(), c.begin() + (top - lo + 1));
  r.normalize();
  return r;
}

bool XLaurent::agrees_with(const XLaurent& o) const {
  const int h = std::min(eff_hi(*this), eff_hi(o));
  if (h >= kInf / 2) return *this == o;
  const int bot = std::min(lo, o.lo);
  for (int e = bot; e <= h; ++e)
    if (coeff(e) != o.coeff(e)) return false;
  return true;
}

bool XLaurent::operator==(const XLaurent& o) const {
  return lo == o.lo && hi == o.hi && exact_hi == o.exact_hi && c == o.c;
}

Poly XLaurent::to_poly() const {
  if (!exact_hi) fail(Errc::IllegalCoercion, "inexact window is not a polynomial");
  if (lo < 0) fail(Errc::IllegalCoercion, "negative exponents present");
  Poly p;
  if (is_exact_zero()) return p;
  p.c.assign(static_cast<std::size_t>(hi + 1), Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i) p.c[lo + i] = c[i];
  p.trim();
  return p;
}

std::string XLaurent::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (rat_is_zero(c[i])) continue;
    if (!first) os << " + ";
    os << rat_str(c[i]) << "*x^" << (lo + static_cast<int>(i));
    first = false;
  }
  if (first) os << "0";
  if (!exact_hi) os << " + O(x^" << (hi + 1) << ")";
  return os.str();
}

} // namespace pvp
