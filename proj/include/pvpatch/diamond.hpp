#pragma once

#include <utility>

#include "pvpatch/bipoly.hpp"
#include "pvpatch/errors.hpp"
#include "pvpatch/series.hpp"

namespace pvp {

// The four fields in play. F sits inside both overfields F1 (germs along
// x = 0) and F2 (germs along x = infinity); both sit inside the ambient
// completion F0 where all computation happens.
enum class FieldTag { F, F1, F2, F0 };

const char* tag_name(FieldTag t);
bool tag_leq(FieldTag a, FieldTag b);
FieldTag tag_join(FieldTag a, FieldTag b);

// provenance atoms: the generators an element was assembled from
enum : unsigned {
  AtomRatF = 1u << 0,
  AtomPosSeries = 1u << 1,
  AtomLogP = 1u << 2,
  AtomExpP = 1u << 3,
  AtomNegPoly = 1u << 4,
  AtomLogU = 1u << 5,
  AtomExpU = 1u << 6,
  AtomFiniteLaurent = 1u << 7,
};

// smallest field of the diamond containing every listed atom
FieldTag tag_for_atoms(unsigned atoms);

// An ambient series carrying the field it is certified to live in and the
// atoms it was built from. Arithmetic joins tags and unions provenance.
struct DiamondElem {
  FieldTag tag = FieldTag::F;
  unsigned atoms = 0;
  TSeries val;

  static DiamondElem from_birat(const BiRat& f, const SeriesCtx& ctx);
  static DiamondElem from_series(TSeries s, unsigned atoms);

  DiamondElem add(const DiamondElem& o, const SeriesCtx& ctx) const;
  DiamondElem sub(const DiamondElem& o, const SeriesCtx& ctx) const;
  DiamondElem mul(const DiamondElem& o, const SeriesCtx& ctx) const;
  DiamondElem scale(const Rational& q) const;
  DiamondElem inv(const SeriesCtx& ctx) const;
  DiamondElem derive() const;
};

// upcasts only; anything else is IllegalCoercion
DiamondElem embed(const DiamondElem& e, FieldTag target);

// transcendental germs, truncated to ctx
DiamondElem log_p(const SeriesCtx& ctx); // -log(1 - t x)
DiamondElem exp_p(const SeriesCtx& ctx); // exp(t x)
DiamondElem log_u(const SeriesCtx& ctx); // -log(1 - t/x)
DiamondElem exp_u(const SeriesCtx& ctx); // exp(t/x)

// closed forms of their x-derivatives (resp. log-derivatives for the exps)
BiRat log_p_derivative();     // t / (1 - t x)
BiRat exp_p_log_derivative(); // t
BiRat log_u_derivative();     // -t / (x^2 - t x)
BiRat exp_u_log_derivative(); // -t / x^2

// Additive splitting per x-exponent: exponents >= 1 land on the F1 side,
// exponents <= 0 on the F2 side. The F2 part must be certified complete,
// so every row's knowledge has to reach exponent 0.
std::pair<XLaurent, XLaurent> split_xlaurent(const XLaurent& row);

struct SplitParts {
  DiamondElem p; // F1 side
  DiamondElem u; // F2 side, exact finite support
};
SplitParts split_additive(const TSeries& s, const SeriesCtx& ctx);

// Bounded recognition of membership in F. A miss raises NotInF and means
// only that no candidate exists within the bounds, never a proof.
BiRat intersect_to_F(const TSeries& s, const Bounds& b, const SeriesCtx& ctx);

} // namespace pvp
