#pragma once
#include <string>
#include <vector>

#include "pvpatch/rational.hpp"

namespace pvp {

// Dense univariate polynomial over Q. Coefficient i is the x^i coefficient;
// the vector carries no trailing zeros, the zero polynomial is empty.
struct Poly {
  std::vector<Rational> c;

  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

  static Poly zero() { return Poly(); }
  static Poly one() { return constant(Rational(1)); }
  static Poly constant(const Rational& q);
  static Poly x(); // the variable

  void trim();
  bool is_zero() const { return c.empty(); }
  int deg() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
  const Rational& lc() const;                                // leading coefficient
  Rational coeff(int i) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& q) const;
  bool operator==(const Poly& o) const { return c == o.c; }

  Poly derivative() const;
  Rational eval(const Rational& at) const;
  Poly mul_xk(int k) const; // multiply by x^k, k >= 0
};

// division with remainder over Q; q,r with a = q*b + r, deg r < deg b
void poly_divrem(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly poly_div_exact(const Poly& a, const Poly& b); // errors if remainder nonzero
Poly poly_gcd(const Poly& a, const Poly& b);       // monic
Poly poly_lcm(const Poly& a, const Poly& b);

// Rational function in x over Q, canonical: gcd(num, den) = 1, den monic.
struct RatFunc {
  Poly num, den;

  RatFunc() : num(Poly::zero()), den(Poly::one()) {}
  RatFunc(Poly n, Poly d); // normalizes
  static RatFunc from(const Poly& p) { return RatFunc(p, Poly::one()); }
  static RatFunc constant(const Rational& q) { return from(Poly::constant(q)); }

  bool is_zero() const { return num.is_zero(); }
  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  bool operator==(const RatFunc& o) const { return num == o.num && den == o.den; }

  RatFunc derivative() const; // quotient rule
};

} // namespace pvp
