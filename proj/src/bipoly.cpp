#include "pvpatch/bipoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "pvpatch/kernel.hpp"

namespace pvp {

BiPoly BiPoly::constant(const Rational& q) {
  BiPoly p;
  if (!rat_is_zero(q)) p.tc = {Poly::constant(q)};
  return p;
}

BiPoly BiPoly::from_poly_x(const Poly& p) {
  BiPoly r;
  if (!p.is_zero()) r.tc = {p};
  return r;
}

BiPoly BiPoly::x() { return from_poly_x(Poly::x()); }

BiPoly BiPoly::t() {
  BiPoly r;
  r.tc = {Poly::zero(), Poly::one()};
  return r;
}

void BiPoly::trim() {
  while (!tc.empty() && tc.back().is_zero()) tc.pop_back();
}

int BiPoly::deg_x() const {
  int d = -1;
  for (const auto& p : tc) d = std::max(d, p.deg());
  return d;
}

Poly BiPoly::coeff_t(int i) const {
  if (i < 0 || i >= static_cast<int>(tc.size())) return Poly();
  return tc[i];
}

Rational BiPoly::coeff(int xdeg, int tdeg) const { return coeff_t(tdeg).coeff(xdeg); }

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r;
  r.tc.resize(std::max(tc.size(), o.tc.size()));
  for (std::size_t i = 0; i < r.tc.size(); ++i) r.tc[i] = coeff_t(static_cast<int>(i)) + o.coeff_t(static_cast<int>(i));
  r.trim();
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + (-o); }

BiPoly BiPoly::operator-() const {
  BiPoly r = *this;
  for (auto& p : r.tc) p = -p;
  return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  BiPoly r;
  if (is_zero() || o.is_zero()) return r;
  r.tc.assign(tc.size() + o.tc.size() - 1, Poly());
  for (std::size_t i = 0; i < tc.size(); ++i) {
    if (tc[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.tc.size(); ++j) {
      if (o.tc[j].is_zero()) continue;
      r.tc[i + j] = r.tc[i + j] + tc[i] * o.tc[j];
    }
  }
  r.trim();
  return r;
}

BiPoly BiPoly::operator*(const Rational& q) const {
  BiPoly r;
  if (rat_is_zero(q)) return r;
  r.tc = tc;
  for (auto& p : r.tc) p = p * q;
  return r;
}

BiPoly BiPoly::derive_x() const {
  BiPoly r = *this;
  for (auto& p : r.tc) p = p.derivative();
  r.trim();
  return r;
}

BiPoly BiPoly::mul_tk(int k) const {
  BiPoly r;
  if (is_zero()) return r;
  r.tc.assign(tc.size() + static_cast<std::size_t>(k), Poly());
  for (std::size_t i = 0; i < tc.size(); ++i) r.tc[i + k] = tc[i];
  return r;
}

namespace {

// view as polynomial in t over Q(x)
std::vector<RatFunc> to_ratfunc_t(const BiPoly& p) {
  std::vector<RatFunc> v(p.tc.size());
  for (std::size_t i = 0; i < p.tc.size(); ++i) v[i] = RatFunc::from(p.tc[i]);
  return v;
}

void trim_rf(std::vector<RatFunc>& v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// monic Euclidean remainder in Q(x)[t]
std::vector<RatFunc> rf_rem(std::vector<RatFunc> a, const std::vector<RatFunc>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const RatFunc f = a.back() / b.back();
    const std::size_t k = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] = a[k + i] - f * b[i];
    a.pop_back(); // leading term cancels exactly
    trim_rf(a);
    if (a.size() < b.size()) break;
  }
  return a;
}

Poly content_x(const BiPoly& p) {
  Poly g;
  for (const auto& row : p.tc) g = poly_gcd(g, row);
  return g;
}

// clear Q(x) denominators and primitivize over Q[x]
BiPoly rf_to_primitive_bipoly(const std::vector<RatFunc>& v) {
  Poly l = Poly::one();
  for (const auto& r : v)
    if (!r.is_zero()) l = poly_lcm(l, r.den);
  BiPoly p;
  p.tc.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    p.tc[i] = v[i].num * poly_div_exact(l, v[i].den);
  }
  p.trim();
  Poly c = content_x(p);
  if (!c.is_zero()) {
    for (auto& row : p.tc) row = poly_div_exact(row, c);
  }
  return p;
}

} // namespace

BiPoly bipoly_gcd(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Poly ca = content_x(a), cb = content_x(b);
  BiPoly pa = a, pb = b;
  for (auto& row : pa.tc) row = poly_div_exact(row, ca);
  for (auto& row : pb.tc) row = poly_div_exact(row, cb);
  std::vector<RatFunc> u = to_ratfunc_t(pa), v = to_ratfunc_t(pb);
  trim_rf(u);
  trim_rf(v);
  while (!v.empty()) {
    auto r = rf_rem(u, v);
    u = std::move(v);
    v = std::move(r);
  }
  BiPoly g = rf_to_primitive_bipoly(u);
  const Poly cg = poly_gcd(ca, cb);
  return g * BiPoly::from_poly_x(cg);
}

BiPoly bipoly_div_exact(const BiPoly& a, const BiPoly& b) {
  if (b.is_zero()) fail(Errc::BadInput, "bivariate division by zero");
  if (a.is_zero()) return BiPoly();
  // divide in Q(x)[t], then check the result clears to polynomials
  std::vector<RatFunc> u = to_ratfunc_t(a);
  const std::vector<RatFunc> v = to_ratfunc_t(b);
  if (u.size() < v.size()) fail(Errc::BadInput, "inexact bivariate division");
  std::vector<RatFunc> q(u.size() - v.size() + 1);
  while (u.size() >= v.size() && !u.empty()) {
    const RatFunc f = u.back() / v.back();
    const std::size_t k = u.size() - v.size();
    q[k] = f;
    for (std::size_t i = 0; i < v.size(); ++i) u[k + i] = u[k + i] - f * v[i];
    u.pop_back();
    trim_rf(u);
    if (u.size() < v.size()) break;
  }
  if (!u.empty()) fail(Errc::BadInput, "inexact bivariate division");
  BiPoly r;
  r.tc.resize(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].is_zero()) continue;
    if (q[i].den.deg() != 0) fail(Errc::BadInput, "inexact bivariate division");
    r.tc[i] = q[i].num * (Rational(1) / q[i].den.coeff(0));
  }
  r.trim();
  return r;
}

BiRat::BiRat(BiPoly n, BiPoly d) {
  if (d.is_zero()) fail(Errc::BadInput, "rational function with zero denominator");
  if (n.is_zero()) {
    num = BiPoly::zero();
    den = BiPoly::one();
    return;
  }
  BiPoly g = bipoly_gcd(n, d);
  if (!(g.deg_t() == 0 && g.deg_x() == 0)) {
    n = bipoly_div_exact(n, g);
    d = bipoly_div_exact(d, g);
  }
  // integerize jointly and primitivize
  mpz_class l(1);
  auto lcm_dens = [&l](const BiPoly& p) {
    for (const auto& row : p.tc)
      for (const auto& q : row.c) {
        mpz_class den_z = q.get_den();
        mpz_class g2;
        mpz_gcd(g2.get_mpz_t(), l.get_mpz_t(), den_z.get_mpz_t());
        l = l / g2 * den_z;
      }
  };
  lcm_dens(n);
  lcm_dens(d);
  const Rational lq(l);
  n = n * lq;
  d = d * lq;
  mpz_class g3(0);
  auto gcd_nums = [&g3](const BiPoly& p) {
    for (const auto& row : p.tc)
      for (const auto& q : row.c) {
        mpz_class num_z = q.get_num();
        mpz_gcd(g3.get_mpz_t(), g3.get_mpz_t(), num_z.get_mpz_t());
      }
  };
  gcd_nums(n);
  gcd_nums(d);
  if (g3 != 0 && g3 != 1) {
    const Rational inv_g(Rational(1) / Rational(g3));
    n = n * inv_g;
    d = d * inv_g;
  }
  if (sgn(d.tc.back().lc()) < 0) {
    n = -n;
    d = -d;
  }
  if (d.coeff_t(0).is_zero())
    fail(Errc::DenominatorDegenerate, "denominator has zero t-order-0 part");
  num = std::move(n);
  den = std::move(d);
}

bool BiRat::is_one() const {
  return num.deg_t() == 0 && num.deg_x() == 0 && den.deg_t() == 0 && den.deg_x() == 0 &&
         !num.is_zero() && num.tc[0].coeff(0) == den.tc[0].coeff(0);
}

BiRat BiRat::operator+(const BiRat& o) const {
  return BiRat(num * o.den + o.num * den, den * o.den);
}

BiRat BiRat::operator-(const BiRat& o) const {
  return BiRat(num * o.den - o.num * den, den * o.den);
}

BiRat BiRat::operator-() const { return BiRat(-num, den); }

BiRat BiRat::operator*(const BiRat& o) const { return BiRat(num * o.num, den * o.den); }

BiRat BiRat::operator/(const BiRat& o) const {
  if (o.is_zero()) fail(Errc::BadInput, "division by zero");
  return BiRat(num * o.den, den * o.num);
}

BiRat BiRat::derive() const {
  return BiRat(num.derive_x() * den - num * den.derive_x(), den * den);
}

BiRat BiRat::inv() const {
  if (is_zero()) fail(Errc::BadInput, "inverse of zero");
  return BiRat(den, num);
}

namespace {

void print_term(std::ostringstream& os, bool& first, const Rational& coef, int xdeg, int tdeg) {
  if (rat_is_zero(coef)) return;
  const bool neg = sgn(coef) < 0;
  Rational a = abs(coef);
  if (first) {
    if (neg) os << "-";
    first = false;
  } else {
    os << (neg ? " - " : " + ");
  }
  const bool unit = (a == 1);
  const bool has_var = xdeg > 0 || tdeg > 0;
  if (!unit || !has_var) {
    os << rat_str(a);
    if (has_var) os << "*";
  }
  if (xdeg > 0) {
    os << "x";
    if (xdeg > 1) os << "^" << xdeg;
    if (tdeg > 0) os << "*";
  }
  if (tdeg > 0) {
    os << "t";
    if (tdeg > 1) os << "^" << tdeg;
  }
}

std::string bipoly_str(const BiPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.deg_t(); i >= 0; --i) {
    const Poly& row = p.coeff_t(i);
    for (int j = row.deg(); j >= 0; --j) print_term(os, first, row.coeff(j), j, i);
  }
  return os.str();
}

struct PolyParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  Rational parse_number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail(Errc::BadInput, "expected a number in polynomial");
    // a tight slash binds as a rational coefficient
    if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    return rat_parse(s.substr(start, pos - start));
  }

  int parse_exponent() {
    skip_ws();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      skip_ws();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail(Errc::BadInput, "expected an exponent");
      return std::stoi(std::string(s.substr(start, pos - start)));
    }
    return 1;
  }

  // factor := number | 'x' ['^' n] | 't' ['^' n]
  void parse_factor(Rational& coef, int& xdeg, int& tdeg) {
    const char c = peek();
    if (c == 'x') {
      ++pos;
      xdeg += parse_exponent();
    } else if (c == 't') {
      ++pos;
      tdeg += parse_exponent();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
      coef *= parse_number();
    } else {
      fail(Errc::BadInput, std::string("unexpected character '") + c + "' in polynomial");
    }
  }

  BiPoly parse_poly() {
    BiPoly acc;
    bool negate = false;
    if (peek() == '+') ++pos;
    else if (peek() == '-') {
      negate = true;
      ++pos;
    }
    while (true) {
      Rational coef(negate ? -1 : 1);
      int xdeg = 0, tdeg = 0;
      parse_factor(coef, xdeg, tdeg);
      while (peek() == '*') {
        ++pos;
        parse_factor(coef, xdeg, tdeg);
      }
      BiPoly term = BiPoly::constant(coef);
      if (xdeg) term = term * BiPoly::from_poly_x(Poly::x().mul_xk(xdeg - 1));
      if (tdeg) term = term.mul_tk(tdeg);
      acc = acc + term;
      const char c = peek();
      if (c == '+') {
        negate = false;
        ++pos;
      } else if (c == '-') {
        negate = true;
        ++pos;
      } else {
        break;
      }
    }
    return acc;
  }
};

BiPoly parse_bipoly(std::string_view sv) {
  PolyParser p{sv};
  BiPoly r = p.parse_poly();
  if (!p.eof()) fail(Errc::BadInput, "trailing characters in polynomial");
  return r;
}

} // namespace

std::string BiRat::str() const {
  if (den.deg_t() == 0 && den.deg_x() == 0 && den.coeff(0, 0) == 1) return bipoly_str(num);
  return bipoly_str(num) + " / " + bipoly_str(den);
}

BiRat BiRat::parse(std::string_view s) {
  const std::string sep = " / ";
  const std::string str(s);
  const auto at = str.find(sep);
  if (at == std::string::npos) return BiRat(parse_bipoly(str), BiPoly::one());
  if (str.find(sep, at + sep.size()) != std::string::npos)
    fail(Errc::BadInput, "more than one fraction bar");
  return BiRat(parse_bipoly(str.substr(0, at)), parse_bipoly(str.substr(at + sep.size())));
}

TSeries expand(const BiRat& f, const SeriesCtx& ctx) {
  if (f.is_zero()) return TSeries();
  if (f.den.coeff_t(0).is_zero())
    fail(Errc::DenominatorDegenerate, "denominator has zero t-order-0 part");
  auto embed = [&](const BiPoly& p) {
    TSeries s;
    if (p.is_zero()) return s;
    s.rows.resize(p.tc.size());
    for (std::size_t i = 0; i < p.tc.size(); ++i) s.rows[i] = XLaurent::from_poly(p.tc[i]);
    s.normalize();
    return s;
  };
  const TSeries n = embed(f.num);
  const TSeries d = embed(f.den);
  return n.mul(d.inv(ctx), ctx);
}

namespace {

// one bounded solve; the caller has already checked stage sufficiency
BiRat reconstruct_stage(const TSeries& s, const Bounds& b, const SeriesCtx& ctx) {
  const int t_end = std::min(s.known_t_end(), ctx.t_prec);

  // unknown layout: num coefficients then den coefficients
  const int ncols_num = (b.dxn + 1) * (b.dtn + 1);
  const int ncols_den = (b.dxd + 1) * (b.dtd + 1);
  const int ncols = ncols_num + ncols_den;
  auto num_col = [&](int xd, int td) { return td * (b.dxn + 1) + xd; };
  auto den_col = [&](int xd, int td) { return ncols_num + td * (b.dxd + 1) + xd; };

  kernel::QMat m;
  for (int i = 0; i < t_end; ++i) {
    // product row i of den*s is known through the narrowest contributing window
    long hi = ctx.x_hi;
    long lo = 0;
    for (int k = 0; k <= std::min(i, b.dtd); ++k) {
      const XLaurent row = s.coeff_t(i - k);
      if (row.is_exact_zero()) continue;
      hi = std::min(hi, static_cast<long>(row.exact_hi ? ctx.x_hi : row.known_hi()));
      lo = std::min(lo, static_cast<long>(row.lo));
    }
    for (long j = lo; j <= hi; ++j) {
      kernel::QVec eq(ncols, Rational(0));
      bool nontrivial = false;
      for (int k = 0; k <= std::min(i, b.dtd); ++k) {
        const XLaurent row = s.coeff_t(i - k);
        for (int xm = 0; xm <= b.dxd; ++xm) {
          const Rational sc = row.coeff(static_cast<int>(j) - xm);
          if (rat_is_zero(sc)) continue;
          eq[den_col(xm, k)] += sc;
          nontrivial = true;
        }
      }
      if (i <= b.dtn && j >= 0 && j <= b.dxn) {
        eq[num_col(static_cast<int>(j), i)] = -1;
        nontrivial = true;
      }
      if (nontrivial) m.push_back(std::move(eq));
    }
  }
  if (m.empty()) fail(Errc::InsufficientPrecision, "window yields no usable equations");

  const kernel::QMat basis = kernel::nullspace(std::move(m));
  if (basis.empty()) fail(Errc::NoReconstruction, "no candidate within the degree bounds");

  for (const auto& v : basis) {
    BiPoly num, den;
    num.tc.resize(b.dtn + 1);
    den.tc.resize(b.dtd + 1);
    for (int td = 0; td <= b.dtn; ++td) {
      std::vector<Rational> coeffs(b.dxn + 1);
      for (int xd = 0; xd <= b.dxn; ++xd) coeffs[xd] = v[num_col(xd, td)];
      num.tc[td] = Poly(std::move(coeffs));
    }
    for (int td = 0; td <= b.dtd; ++td) {
      std::vector<Rational> coeffs(b.dxd + 1);
      for (int xd = 0; xd <= b.dxd; ++xd) coeffs[xd] = v[den_col(xd, td)];
      den.tc[td] = Poly(std::move(coeffs));
    }
    num.trim();
    den.trim();
    if (den.is_zero()) continue;
    BiRat cand;
    try {
      cand = BiRat(num, den);
    } catch (const PvError&) {
      continue; // degenerate candidate from this basis vector
    }
    if (expand(cand, ctx).agrees_with(s, ctx)) return cand;
  }
  fail(Errc::NoReconstruction, "no candidate passed round-trip verification");
}

// the sufficiency precondition for one stage: enough independent t-rows for
// determinacy, and wide enough x-knowledge on every row in play
bool stage_sufficient(const TSeries& s, const Bounds& b, const SeriesCtx& ctx) {
  const bool exact = s.t_exact;
  const int t_end = std::min(s.known_t_end(), ctx.t_prec);
  if (!exact && t_end < b.dtn + b.dtd + 1) return false;
  const int need_w = b.dxn + b.dxd + 1;
  for (int i = s.t_lo; i < t_end; ++i) {
    const XLaurent row = s.coeff_t(i);
    if (row.exact_hi || row.is_exact_zero()) continue;
    if (row.known_hi() - row.lo + 1 < need_w) return false;
  }
  return true;
}

} // namespace

BiRat rational_reconstruct(const TSeries& s_in, const Bounds& b, const SeriesCtx& ctx) {
  TSeries s = s_in;
  s.normalize();
  if (s.is_exact_zero()) return BiRat();
  if (s.t_lo < 0)
    fail(Errc::NoReconstruction, "negative t-valuation is not representable");
  if (std::min(s.known_t_end(), ctx.t_prec) <= 0)
    fail(Errc::InsufficientPrecision, "no known t-coefficients");

  const int kmax = std::max(std::max(b.dxn, b.dxd), std::max(b.dtn, b.dtd));
  bool any_admissible = false;
  bool ceiling_hit = false;
  for (int k = std::min(1, kmax); k <= kmax; ++k) {
    Bounds stage{std::min(k, b.dxn), std::min(k, b.dxd), std::min(k, b.dtn),
                 std::min(k, b.dtd)};
    if (!stage_sufficient(s, stage, ctx)) {
      ceiling_hit = true;
      continue;
    }
    any_admissible = true;
    try {
      return reconstruct_stage(s, stage, ctx);
    } catch (const PvError& e) {
      if (e.code() != Errc::NoReconstruction) throw;
    }
  }
  if (!any_admissible)
    fail(Errc::InsufficientPrecision, "precision below the bound-implied threshold");
  fail(Errc::NoReconstruction,
       ceiling_hit ? "no candidate within the precision-admissible bounds"
                   : "no candidate within the degree bounds");
}

} // namespace pvp
