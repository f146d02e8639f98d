#pragma once
#include <string>
#include <string_view>
#include <vector>

#include "pvpatch/poly.hpp"
#include "pvpatch/series.hpp"

namespace pvp {

// Bivariate polynomial over Q, stored as polynomials in x per t-degree.
struct BiPoly {
  std::vector<Poly> tc; // tc[i] is the x-polynomial coefficient of t^i

  BiPoly() = default;
  explicit BiPoly(std::vector<Poly> rows) : tc(std::move(rows)) { trim(); }

  static BiPoly zero() { return BiPoly(); }
  static BiPoly one() { return constant(Rational(1)); }
  static BiPoly constant(const Rational& q);
  static BiPoly from_poly_x(const Poly& p);
  static BiPoly x();
  static BiPoly t();

  void trim();
  bool is_zero() const { return tc.empty(); }
  int deg_t() const { return static_cast<int>(tc.size()) - 1; }
  int deg_x() const;
  Poly coeff_t(int i) const;
  Rational coeff(int xdeg, int tdeg) const;

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator-() const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly operator*(const Rational& q) const;
  bool operator==(const BiPoly& o) const { return tc == o.tc; }

  BiPoly derive_x() const;
  BiPoly mul_tk(int k) const;
};

BiPoly bipoly_gcd(const BiPoly& a, const BiPoly& b);
BiPoly bipoly_div_exact(const BiPoly& a, const BiPoly& b);

// Rational function in (x, t) over Q.
//
// Canonical form: gcd(num, den) = 1 up to scalar; both have integer
// coefficients, jointly primitive; the denominator's leading coefficient
// (t-major, then x-major) is positive. The reduced denominator must have a
// nonzero t-order-0 part so that t-adic expansion exists.
struct BiRat {
  BiPoly num, den;

  BiRat() : num(BiPoly::zero()), den(BiPoly::one()) {}
  BiRat(BiPoly n, BiPoly d); // normalizes; DenominatorDegenerate when violated

  static BiRat from(const BiPoly& p) { return BiRat(p, BiPoly::one()); }
  static BiRat constant(const Rational& q) { return from(BiPoly::constant(q)); }
  static BiRat x() { return from(BiPoly::x()); }
  static BiRat t() { return from(BiPoly::t()); }

  bool is_zero() const { return num.is_zero(); }
  bool is_one() const;
  BiRat operator+(const BiRat& o) const;
  BiRat operator-(const BiRat& o) const;
  BiRat operator-() const;
  BiRat operator*(const BiRat& o) const;
  BiRat operator/(const BiRat& o) const;
  bool operator==(const BiRat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const BiRat& o) const { return !(*this == o); }

  BiRat derive() const; // d/dx
  BiRat inv() const;

  std::string str() const;                 // canonical text form
  static BiRat parse(std::string_view s);  // inverse of str; BadInput on garbage
};

// t-adic expansion with x-Laurent coefficient rows.
TSeries expand(const BiRat& f, const SeriesCtx& ctx);

// degree bounds for reconstruction: (x num, x den, t num, t den)
struct Bounds {
  int dxn = 8, dxd = 8, dtn = 8, dtd = 8;
};

// Recover an element of F from its expansion by an exact homogeneous linear
// solve; the candidate is round-trip verified against the input window.
BiRat rational_reconstruct(const TSeries& s, const Bounds& b, const SeriesCtx& ctx);

} // namespace pvp
