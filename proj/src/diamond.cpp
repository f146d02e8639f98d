#include "pvpatch/diamond.hpp"

#include <functional>

namespace pvp {

const char* tag_name(FieldTag t) {
  switch (t) {
    case FieldTag::F: return "F";
    case FieldTag::F1: return "F1";
    case FieldTag::F2: return "F2";
    case FieldTag::F0: return "F0";
  }
  return "?";
}

bool tag_leq(FieldTag a, FieldTag b) {
  if (a == b) return true;
  if (a == FieldTag::F) return true;
  if (b == FieldTag::F0) return true;
  return false;
}

FieldTag tag_join(FieldTag a, FieldTag b) {
  if (tag_leq(a, b)) return b;
  if (tag_leq(b, a)) return a;
  return FieldTag::F0;
}

FieldTag tag_for_atoms(unsigned atoms) {
  constexpr unsigned f1_only = AtomPosSeries | AtomLogP | AtomExpP;
  constexpr unsigned f2_only = AtomNegPoly | AtomLogU | AtomExpU;
  const bool in1 = (atoms & f1_only) != 0;
  const bool in2 = (atoms & f2_only) != 0;
  if (in1 && in2) return FieldTag::F0;
  if (in1) return FieldTag::F1;
  if (in2) return FieldTag::F2;
  return FieldTag::F;
}

DiamondElem DiamondElem::from_birat(const BiRat& f, const SeriesCtx& ctx) {
  DiamondElem e;
  e.tag = FieldTag::F;
  e.atoms = AtomRatF;
  e.val = expand(f, ctx);
  return e;
}

DiamondElem DiamondElem::from_series(TSeries s, unsigned atoms) {
  DiamondElem e;
  e.atoms = atoms;
  e.tag = tag_for_atoms(atoms);
  e.val = std::move(s);
  return e;
}

DiamondElem DiamondElem::add(const DiamondElem& o, const SeriesCtx& ctx) const {
  DiamondElem e;
  e.atoms = atoms | o.atoms;
  e.tag = tag_join(tag, o.tag);
  e.val = val.add(o.val, ctx);
  return e;
}

DiamondElem DiamondElem::sub(const DiamondElem& o, const SeriesCtx& ctx) const {
  DiamondElem n = o;
  n.val = o.val.neg();
  return add(n, ctx);
}

DiamondElem DiamondElem::mul(const DiamondElem& o, const SeriesCtx& ctx) const {
  DiamondElem e;
  e.atoms = atoms | o.atoms;
  e.tag = tag_join(tag, o.tag);
  e.val = val.mul(o.val, ctx);
  return e;
}

DiamondElem DiamondElem::scale(const Rational& q) const {
  DiamondElem e = *this;
  e.val = val.scale(q);
  return e;
}

DiamondElem DiamondElem::inv(const SeriesCtx& ctx) const {
  DiamondElem e = *this;
  e.val = val.inv(ctx);
  return e;
}

DiamondElem DiamondElem::derive() const {
  DiamondElem e = *this;
  e.val = val.derive();
  return e;
}

DiamondElem embed(const DiamondElem& e, FieldTag target) {
  if (!tag_leq(e.tag, target))
    fail(Errc::IllegalCoercion,
         std::string(tag_name(e.tag)) + " does not embed into " + tag_name(target));
  DiamondElem r = e;
  r.tag = target;
  return r;
}

namespace {

TSeries germ_rows(int first, int t_prec, const std::function<XLaurent(int)>& mk) {
  TSeries s;
  s.t_lo = first;
  s.t_exact = false;
  for (int m = first; m < t_prec; ++m) s.rows.push_back(mk(m));
  return s;
}

} // namespace

DiamondElem log_p(const SeriesCtx& ctx) {
  TSeries s = germ_rows(1, ctx.t_prec, [](int m) {
    return XLaurent::mono(m, Rational(1) / Rational(m));
  });
  return DiamondElem::from_series(std::move(s), AtomLogP);
}

DiamondElem exp_p(const SeriesCtx& ctx) {
  Rational f(1);
  TSeries s = germ_rows(0, ctx.t_prec, [&f](int m) {
    if (m > 0) f /= Rational(m);
    return XLaurent::mono(m, f);
  });
  return DiamondElem::from_series(std::move(s), AtomExpP);
}

DiamondElem log_u(const SeriesCtx& ctx) {
  TSeries s = germ_rows(1, ctx.t_prec, [](int m) {
    return XLaurent::mono(-m, Rational(1) / Rational(m));
  });
  return DiamondElem::from_series(std::move(s), AtomLogU);
}

DiamondElem exp_u(const SeriesCtx& ctx) {
  Rational f(1);
  TSeries s = germ_rows(0, ctx.t_prec, [&f](int m) {
    if (m > 0) f /= Rational(m);
    return XLaurent::mono(-m, f);
  });
  return DiamondElem::from_series(std::move(s), AtomExpU);
}

BiRat log_p_derivative() {
  return BiRat(BiPoly::t(), BiPoly::one() - BiPoly::t() * BiPoly::x());
}

BiRat exp_p_log_derivative() { return BiRat(BiPoly::t(), BiPoly::one()); }

BiRat log_u_derivative() {
  const BiPoly x = BiPoly::x();
  return BiRat(-BiPoly::t(), x * x - BiPoly::t() * x);
}

BiRat exp_u_log_derivative() {
  return BiRat(-BiPoly::t(), BiPoly::x() * BiPoly::x());
}

std::pair<XLaurent, XLaurent> split_xlaurent(const XLaurent& row) {
  if (!row.exact_hi && row.known_hi() < 0)
    fail(Errc::InsufficientPrecision,
         "window does not reach exponent 0; the F2 part is uncertifiable");
  return {row.part_ge(1), row.part_le(0)};
}

SplitParts split_additive(const TSeries& s, const SeriesCtx& ctx) {
  TSeries p, u;
  p.t_lo = u.t_lo = s.t_lo;
  p.t_exact = u.t_exact = s.t_exact;
  p.rows.reserve(s.rows.size());
  u.rows.reserve(s.rows.size());
  for (const auto& row : s.rows) {
    auto [pr, ur] = split_xlaurent(row);
    p.rows.push_back(std::move(pr));
    u.rows.push_back(std::move(ur));
  }
  p.normalize();
  u.normalize();
  SplitParts out;
  out.p = DiamondElem::from_series(p.clamp(ctx), AtomPosSeries);
  out.u = DiamondElem::from_series(u.clamp(ctx), AtomNegPoly);
  return out;
}

BiRat intersect_to_F(const TSeries& s, const Bounds& b, const SeriesCtx& ctx) {
  try {
    return rational_reconstruct(s, b, ctx);
  } catch (const PvError& e) {
    if (e.code() == Errc::NoReconstruction)
      fail(Errc::NotInF, "no rational candidate within the bounds (not a proof of absence)");
    throw;
  }
}

} // namespace pvp
