#include "pvpatch/mpoly.hpp"

namespace pvp {

MPoly<BiRat> lift_coeffs(const MPoly<Rational>& p) {
  MPoly<BiRat> r;
  for (const auto& [e, c] : p.t) r.add_term(e, BiRat::constant(c));
  return r;
}

} // namespace pvp
