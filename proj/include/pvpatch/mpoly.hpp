#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pvpatch/bipoly.hpp"
#include "pvpatch/errors.hpp"
#include "pvpatch/rational.hpp"

namespace pvp {

// exponent vector; length is fixed by the ambient ring
using Expo = std::vector<int>;

inline int expo_deg(const Expo& e) {
  int d = 0;
  for (int k : e) d += k;
  return d;
}

inline bool expo_divides(const Expo& a, const Expo& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Expo expo_add(const Expo& a, const Expo& b) {
  Expo r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Expo expo_sub(const Expo& a, const Expo& b) {
  Expo r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline bool expo_coprime(const Expo& a, const Expo& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

// graded lexicographic, descending (largest monomial first in a map)
struct GradedLexGreater {
  bool operator()(const Expo& a, const Expo& b) const {
    const int da = expo_deg(a), db = expo_deg(b);
    if (da != db) return da > db;
    return a > b;
  }
};

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Rational> {
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& c) { return rat_is_zero(c); }
  static Rational neg(const Rational& c) { return -c; }
  static Rational add(const Rational& a, const Rational& b) { return a + b; }
  static Rational mul(const Rational& a, const Rational& b) { return a * b; }
  static Rational div(const Rational& a, const Rational& b) { return a / b; }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static std::string str(const Rational& c) { return rat_str(c); }
};

template <>
struct CoeffOps<BiRat> {
  static BiRat zero() { return BiRat(); }
  static BiRat one() { return BiRat::constant(1); }
  static bool is_zero(const BiRat& c) { return c.is_zero(); }
  static BiRat neg(const BiRat& c) { return -c; }
  static BiRat add(const BiRat& a, const BiRat& b) { return a + b; }
  static BiRat mul(const BiRat& a, const BiRat& b) { return a * b; }
  static BiRat div(const BiRat& a, const BiRat& b) { return a / b; }
  static bool eq(const BiRat& a, const BiRat& b) { return a == b; }
  static std::string str(const BiRat& c) { return c.str(); }
};

// Sparse multivariate polynomial with coefficients in C.
template <class C>
struct MPoly {
  using Ops = CoeffOps<C>;
  std::map<Expo, C, GradedLexGreater> t;

  static MPoly zero() { return MPoly(); }

  static MPoly constant(int nvars, const C& c) {
    MPoly p;
    if (!Ops::is_zero(c)) p.t.emplace(Expo(nvars, 0), c);
    return p;
  }

  static MPoly var(int nvars, int idx, int pow = 1) {
    MPoly p;
    Expo e(nvars, 0);
    e[idx] = pow;
    p.t.emplace(std::move(e), Ops::one());
    return p;
  }

  static MPoly mono(Expo e, const C& c) {
    MPoly p;
    if (!Ops::is_zero(c)) p.t.emplace(std::move(e), c);
    return p;
  }

  bool is_zero() const { return t.empty(); }

  int nvars() const { return t.empty() ? -1 : static_cast<int>(t.begin()->first.size()); }

  int degree() const { return t.empty() ? -1 : expo_deg(t.begin()->first); }

  const Expo& lead_expo() const {
    if (t.empty()) fail(Errc::BadInput, "zero polynomial has no leading term");
    return t.begin()->first;
  }
  const C& lead_coeff() const {
    if (t.empty()) fail(Errc::BadInput, "zero polynomial has no leading term");
    return t.begin()->second;
  }

  C coeff(const Expo& e) const {
    auto it = t.find(e);
    return it == t.end() ? Ops::zero() : it->second;
  }

  void add_term(const Expo& e, const C& c) {
    if (Ops::is_zero(c)) return;
    auto it = t.find(e);
    if (it == t.end()) {
      t.emplace(e, c);
    } else {
      it->second = Ops::add(it->second, c);
      if (Ops::is_zero(it->second)) t.erase(it);
    }
  }

  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [e, c] : o.t) r.add_term(e, c);
    return r;
  }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [e, c] : r.t) c = Ops::neg(c);
    return r;
  }

  MPoly operator-(const MPoly& o) const { return *this + (-o); }

  MPoly operator*(const MPoly& o) const {
    MPoly r;
    for (const auto& [ea, ca] : t)
      for (const auto& [eb, cb] : o.t) r.add_term(expo_add(ea, eb), Ops::mul(ca, cb));
    return r;
  }

  MPoly scale(const C& c) const {
    MPoly r;
    if (Ops::is_zero(c)) return r;
    for (const auto& [e, cc] : t) r.add_term(e, Ops::mul(cc, c));
    return r;
  }

  bool operator==(const MPoly& o) const {
    if (t.size() != o.t.size()) return false;
    auto it = t.begin();
    auto jt = o.t.begin();
    for (; it != t.end(); ++it, ++jt) {
      if (it->first != jt->first) return false;
      if (!Ops::eq(it->second, jt->second)) return false;
    }
    return true;
  }
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  std::string str(const std::vector<std::string>& vars) const {
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : t) {
      std::string cs = Ops::str(c);
      bool neg = false;
      if (!cs.empty() && cs[0] == '-' && cs.find(' ') == std::string::npos) {
        neg = true;
        cs = cs.substr(1);
      }
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      const bool has_var = expo_deg(e) > 0;
      const bool unit = (cs == "1");
      const bool wrap = cs.find(' ') != std::string::npos;
      if (!unit || !has_var) {
        if (wrap) os << "(" << Ops::str(c) << ")";
        else os << cs;
        if (has_var) os << "*";
      }
      bool firstv = true;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!firstv) os << "*";
        firstv = false;
        os << vars[i];
        if (e[i] != 1) os << "^" << e[i];
      }
    }
    return os.str();
  }
};

template <class C>
MPoly<C> mpow(const MPoly<C>& p, int k) {
  MPoly<C> r = MPoly<C>::constant(p.is_zero() ? 0 : p.nvars(), CoeffOps<C>::one());
  if (k == 0) return r;
  if (p.is_zero()) return MPoly<C>();
  r = p;
  for (int i = 1; i < k; ++i) r = r * p;
  return r;
}

// division with remainder by an arbitrary generator list: rewrites the largest
// reducible monomial until every remaining term is irreducible. Reaching zero
// certifies ideal membership for any list; the converse needs a Groebner basis.
template <class C>
MPoly<C> reduce_by(MPoly<C> p, const std::vector<MPoly<C>>& gens) {
  MPoly<C> rem;
  while (!p.t.empty()) {
    const auto it = p.t.begin();
    const MPoly<C>* hit = nullptr;
    for (const auto& g : gens)
      if (expo_divides(g.lead_expo(), it->first)) {
        hit = &g;
        break;
      }
    if (!hit) {
      // every later rewrite only introduces smaller monomials, so this term is final
      rem.t.emplace_hint(rem.t.end(), it->first, it->second);
      p.t.erase(it);
      continue;
    }
    const C f = CoeffOps<C>::div(it->second, hit->lead_coeff());
    p = p - MPoly<C>::mono(expo_sub(it->first, hit->lead_expo()), f) * (*hit);
  }
  return rem;
}

// reindex variables: map[i] is the target index of source variable i
template <class C>
MPoly<C> remap_vars(const MPoly<C>& p, const std::vector<int>& map, int new_nvars) {
  MPoly<C> r;
  for (const auto& [e, c] : p.t) {
    Expo ee(new_nvars, 0);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) ee.at(map[i]) += e[i];
    r.add_term(ee, c);
  }
  return r;
}

// Quotient of a polynomial ring by an ideal whose given generators form a
// Groebner basis for free: either a single generator, or generators whose
// leading monomials are pairwise coprime. Reduction to normal form is then
// canonical and decides ideal membership.
template <class C>
struct Ring {
  std::vector<std::string> vars;
  std::vector<MPoly<C>> gens;

  Ring() = default;
  Ring(std::vector<std::string> vars_, std::vector<MPoly<C>> gens_)
      : vars(std::move(vars_)), gens(std::move(gens_)) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j)
        if (vars[i] == vars[j])
          fail(Errc::GeneratorAuditFailed, "duplicate variable name " + vars[i]);
    for (const auto& g : gens) {
      if (g.is_zero()) fail(Errc::GeneratorAuditFailed, "zero ideal generator");
      if (g.nvars() != nvars())
        fail(Errc::GeneratorAuditFailed, "generator arity mismatch");
    }
    if (gens.size() > 1) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
          if (!expo_coprime(gens[i].lead_expo(), gens[j].lead_expo()))
            fail(Errc::GeneratorAuditFailed,
                 "leading terms of generators " + std::to_string(i) + " and " +
                     std::to_string(j) + " share a variable");
    }
  }

  int nvars() const { return static_cast<int>(vars.size()); }

  int var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return static_cast<int>(i);
    fail(Errc::BadInput, "unknown variable " + name);
  }

  MPoly<C> var(const std::string& name) const {
    return MPoly<C>::var(nvars(), var_index(name));
  }
  MPoly<C> constant(const C& c) const { return MPoly<C>::constant(nvars(), c); }
  MPoly<C> one() const { return constant(CoeffOps<C>::one()); }

  MPoly<C> reduce(MPoly<C> p) const { return reduce_by(std::move(p), gens); }

  bool is_reduced_monomial(const Expo& e) const {
    for (const auto& g : gens)
      if (expo_divides(g.lead_expo(), e)) return false;
    return true;
  }

  // reduced monomials of total degree <= maxdeg, smallest first
  std::vector<Expo> basis_monomials(int maxdeg) const {
    std::vector<Expo> out;
    Expo e(nvars(), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == nvars()) {
        if (is_reduced_monomial(e)) out.push_back(e);
        return;
      }
      for (int k = 0; k <= left; ++k) {
        e[pos] = k;
        rec(pos + 1, left - k);
      }
      e[pos] = 0;
    };
    rec(0, maxdeg);
    std::sort(out.begin(), out.end(), [](const Expo& a, const Expo& b) {
      return GradedLexGreater{}(b, a);
    });
    return out;
  }

  MPoly<C> mul(const MPoly<C>& a, const MPoly<C>& b) const { return reduce(a * b); }
};

// substitution homomorphism: variable i of the source maps to images[i]
template <class C>
MPoly<C> substitute(const MPoly<C>& p, const std::vector<MPoly<C>>& images,
                    const Ring<C>& target) {
  MPoly<C> acc;
  for (const auto& [e, c] : p.t) {
    MPoly<C> term = target.constant(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term = term * mpow(images[i], e[i]);
    acc = acc + term;
  }
  return target.reduce(acc);
}

// two-sided tensor product over the ground field: disjoint variable blocks
template <class C>
struct TensorRing {
  Ring<C> ring;
  int left_vars = 0;
  int right_vars = 0;

  MPoly<C> embed_left(const MPoly<C>& p) const {
    MPoly<C> r;
    for (const auto& [e, c] : p.t) {
      Expo ee(left_vars + right_vars, 0);
      std::copy(e.begin(), e.end(), ee.begin());
      r.add_term(ee, c);
    }
    return r;
  }
  MPoly<C> embed_right(const MPoly<C>& p) const {
    MPoly<C> r;
    for (const auto& [e, c] : p.t) {
      Expo ee(left_vars + right_vars, 0);
      std::copy(e.begin(), e.end(), ee.begin() + left_vars);
      r.add_term(ee, c);
    }
    return r;
  }
};

template <class C>
TensorRing<C> tensor_ring(const Ring<C>& a, const Ring<C>& b, const std::string& suf_a,
                          const std::string& suf_b) {
  TensorRing<C> t;
  t.left_vars = a.nvars();
  t.right_vars = b.nvars();
  std::vector<std::string> vars;
  for (const auto& v : a.vars) vars.push_back(v + suf_a);
  for (const auto& v : b.vars) vars.push_back(v + suf_b);
  std::vector<MPoly<C>> gens;
  t.ring.vars = vars; // temporarily, for the embeddings below
  for (const auto& g : a.gens) gens.push_back(t.embed_left(g));
  for (const auto& g : b.gens) gens.push_back(t.embed_right(g));
  t.ring = Ring<C>(std::move(vars), std::move(gens));
  return t;
}

MPoly<BiRat> lift_coeffs(const MPoly<Rational>& p);

} // namespace pvp
