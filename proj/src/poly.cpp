#include "pvpatch/poly.hpp"

#include "pvpatch/kernel.hpp"

namespace pvp {

Poly Poly::constant(const Rational& q) {
  Poly p;
  if (!rat_is_zero(q)) p.c.push_back(q);
  return p;
}

Poly Poly::x() {
  Poly p;
  p.c = {Rational(0), Rational(1)};
  return p;
}

void Poly::trim() {
  while (!c.empty() && rat_is_zero(c.back())) c.pop_back();
}

const Rational& Poly::lc() const {
  static const Rational z(0);
  return c.empty() ? z : c.back();
}

Rational Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c.size())) return Rational(0);
  return c[i];
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.c.resize(std::max(c.size(), o.c.size()));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < c.size()) r.c[i] += c[i];
    if (i < o.c.size()) r.c[i] += o.c[i];
  }
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& q : r.c) q = -q;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.c = kernel::convolve(c, o.c);
  r.trim();
  return r;
}

Poly Poly::operator*(const Rational& q) const {
  if (rat_is_zero(q)) return Poly();
  Poly r = *this;
  for (auto& v : r.c) v *= q;
  return r;
}

Poly Poly::derivative() const {
  Poly r;
  if (c.size() <= 1) return r;
  r.c.resize(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * Rational(static_cast<long>(i));
  r.trim();
  return r;
}

Rational Poly::eval(const Rational& at) const {
  Rational acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * at + *it;
  return acc;
}

Poly Poly::mul_xk(int k) const {
  if (is_zero() || k == 0) return *this;
  Poly r;
  r.c.resize(c.size() + static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
  return r;
}

void poly_divrem(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) fail(Errc::BadInput, "polynomial division by zero");
  q = Poly();
  r = a;
  if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, Rational(0));
  while (!r.is_zero() && r.deg() >= b.deg()) {
    const int k = r.deg() - b.deg();
    const Rational f = r.lc() / b.lc();
    q.c[k] = f;
    for (int i = 0; i <= b.deg(); ++i) r.c[i + k] -= f * b.c[i];
    r.trim();
  }
  q.trim();
}

Poly poly_div_exact(const Poly& a, const Poly& b) {
  Poly q, r;
  poly_divrem(a, b, q, r);
  if (!r.is_zero()) fail(Errc::BadInput, "inexact polynomial division");
  return q;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly u = a, v = b;
  while (!v.is_zero()) {
    Poly q, r;
    poly_divrem(u, v, q, r);
    u = v;
    v = r;
  }
  if (u.is_zero()) return u;
  return u * (1 / u.lc());
}

Poly poly_lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  Poly g = poly_gcd(a, b);
  Poly l = poly_div_exact(a * b, g);
  return l * (1 / l.lc());
}

RatFunc::RatFunc(Poly n, Poly d) {
  if (d.is_zero()) fail(Errc::BadInput, "rational function with zero denominator");
  if (n.is_zero()) {
    num = Poly::zero();
    den = Poly::one();
    return;
  }
  Poly g = poly_gcd(n, d);
  n = poly_div_exact(n, g);
  d = poly_div_exact(d, g);
  const Rational inv = 1 / d.lc();
  num = n * inv;
  den = d * inv;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num * o.den + o.num * den, den * o.den);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num * o.den - o.num * den, den * o.den);
}

RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(num * o.num, den * o.den); }

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) fail(Errc::BadInput, "rational function division by zero");
  return RatFunc(num * o.den, den * o.num);
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num.derivative() * den - num * den.derivative(), den * den);
}

} // namespace pvp
