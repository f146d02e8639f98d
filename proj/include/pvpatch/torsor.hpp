#pragma once
#include <string>
#include <vector>

#include "pvpatch/diamond.hpp"
#include "pvpatch/groups.hpp"
#include "pvpatch/matrix.hpp"

namespace pvp {

// G-torsor in fundamental-matrix form: coordinate ring F[Z, det(Z)^-1]/I_G(Z)
// over the named base level, with right co-action Z -> Z (x) T. Matrix
// coordinates are z11..znn; det-inverse variables carry a leading z.
struct Torsor {
  Group grp;
  FieldTag base = FieldTag::F;
  Ring<Rational> ring;
  Coaction rho;

  int z_index(int i, int j) const { return i * grp.n + j; }
  MPoly<Rational> zvar(int i, int j) const {
    return MPoly<Rational>::var(ring.nvars(), z_index(i, j));
  }
};

Torsor make_trivial_torsor(const Group& g, FieldTag base);

// exact witness that a (x) b -> (a (x) 1) rho(b) is invertible on generators:
// the antipode matrix evaluated at Z contracts rho(Z) back to 1 (x) T;
// throws BadAction when the contraction fails to reduce
void verify_torsor_axiom(const Torsor& X);

// delta(Z) = A Z over the base level, extended by the Leibniz rule and the
// base derivation; det-inverse variables follow delta(detinv) = -tr(A) detinv
struct DiffStructure {
  RMat A;
};

using BMPoly = MPoly<BiRat>;

// derivative of a torsor-ring element, reduced to canonical form
BMPoly torsor_derive(const Torsor& X, const DiffStructure& d, const BMPoly& f);

struct WellDefCertificate {
  bool ok = true;
  std::string detail; // offending relation and its residue when !ok
};

// delta maps every relation generator into the relations ideal and commutes
// with the co-action on generators (group leg held constant)
WellDefCertificate derivation_well_defined(const Torsor& X, const DiffStructure& d);

// same ring under derivation a*delta; ZeroScalar when a = 0
DiffStructure rescale_derivation(const DiffStructure& d, const BiRat& a);

struct ConstantsReport {
  int maxdeg = 0;
  Bounds bounds;
  std::string denominator;        // fixed ansatz denominator, as a BiRat string
  int dim = 0;                    // solution dimension at these bounds
  int base_dim = 0;               // solutions supported on the unit monomial
  bool new_constants = false;     // dim > base_dim
  std::vector<std::string> basis; // rendered constants
};

// all degree <= maxdeg combinations of coordinate monomials with coefficients
// P/D0, deg P within bounds, killed by delta; exact homogeneous solve
ConstantsReport constants_bounded(const Torsor& X, const DiffStructure& d, int maxdeg,
                                  const Bounds& b, int degree_cap = 4);

struct TransportResult {
  // delta(e_i) = sum_j B[i][j] * e_j modulo the relations ideal
  std::vector<std::vector<BiRat>> B;
};

// induced differential structure on the span of the given expressions;
// NotClosed when some delta(e_i) escapes the span
TransportResult transport_derivation(const Torsor& X, const DiffStructure& d,
                                     const std::vector<MPoly<Rational>>& exprs);

// finite-dimensional commutative algebra over the constants, by structure
// constants, with its full ideal lattice listed as row bases
struct FiniteKAlgebra {
  std::string name;
  int dim = 0;
  std::vector<std::vector<std::vector<Rational>>> mul; // mul[i][j] = e_i * e_j
  std::vector<Rational> unit;
  std::vector<std::vector<std::vector<Rational>>> ideals; // bases, (0) first

  static FiniteKAlgebra field();        // K
  static FiniteKAlgebra pair();         // K x K
  static FiniteKAlgebra dual_numbers(); // K[u]/(u^2)
};

struct CorrespondenceReport {
  bool ok = false;
  int lattice_checked = 0;   // ideals of the algebra round-tripped
  int generated_checked = 0; // generated differential ideals matched to the lattice
  std::string detail;
};

// bijection between ideals of the constant algebra and bounded-degree
// differential ideals of (fixture) (x) algebra; FixtureRequired unless X is
// the rank-1 torus torsor with A = (1)
CorrespondenceReport diff_ideal_correspondence_check(const Torsor& X, const DiffStructure& d,
                                                     const FiniteKAlgebra& alg);

} // namespace pvp
