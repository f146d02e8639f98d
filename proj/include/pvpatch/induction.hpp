#pragma once

#include <string>
#include <vector>

#include "pvpatch/diamond.hpp"
#include "pvpatch/factorization.hpp"
#include "pvpatch/groups.hpp"
#include "pvpatch/report.hpp"
#include "pvpatch/torsor.hpp"

namespace pvp {

// A torsor presented by a fundamental matrix over an overfield of the base,
// together with the equation delta(Z0) = A Z0 the matrix satisfies.
struct PresentedTorsor {
  Torsor Y;
  TaggedMat Z0;
  DiffStructure diff;
};

// Fixtures used throughout the test suite and demos.
PresentedTorsor trivial_fixture(const Group& g);
PresentedTorsor unipotent_log_fixture(const SeriesCtx& ctx);
PresentedTorsor torus_exp_fixture(const SeriesCtx& ctx);

struct InducedAudit {
  bool z0_relations = false;
  bool z0_invertible = false;
  bool z0_derivation = false;
  bool generators_invariant = false;
  bool inclusion_equivariant = false;
  bool source_derivation = false;
  bool result_derivation = false;
};

// Presentation of Ind_H^G Y inside K[Y] (x) K[G].  The generator matrix is
// W = Z0-shaped: W_ij = sum_k z_ik (x) t_kj, one extra generator per
// determinant inverse of G.  The result torsor carries the G co-action by
// right translation on the second leg.
struct InducedPresentation {
  Torsor source;
  Group G;
  TaggedMat Z0;
  DiffStructure diff;
  Torsor result;
  TensorRing<Rational> amb;
  std::vector<std::string> gen_names;
  std::vector<MPoly<Rational>> gens;
  InducedAudit audit;
};

InducedPresentation induce(const PresentedTorsor& src, const Group& G,
                           const SeriesCtx& ctx);

// Simultaneous H co-action on K[Y] (x) K[G]: the source co-action on the
// first leg and twisted left translation h.g = h^{-1} g on the second.
Coaction induced_h_coaction(const InducedPresentation& ind);

// Right translation by a subgroup K of G on the second leg, first leg fixed.
Coaction induced_right_translation(const InducedPresentation& ind,
                                   const Group& k);

// Coordinate restriction of a torsor co-action to an aligned subgroup.
Coaction torsor_restriction(const Torsor& x, const Group& k);

// Linear span of all products of the given generators up to total degree deg,
// as a row basis over the module's reduced monomials.
InvariantBasis span_of_products(const Ring<Rational>& module,
                                const std::vector<MPoly<Rational>>& gens,
                                int deg);

// Elements of a precomputed span fixed by a co-action.
InvariantBasis invariants_of_span(const Coaction& c, const InvariantBasis& span);

// Row basis spanned by explicit elements over the module's monomials.
InvariantBasis basis_from_elems(const Ring<Rational>& module,
                                const std::vector<Expo>& mons,
                                const std::vector<MPoly<Rational>>& elems,
                                int deg);

// When H = G the induced presentation must reproduce the co-action itself.
bool induced_via_rho_is_identity(const InducedPresentation& ind);

// A fundamental matrix over the base yields a trivial torsor presentation.
bool induced_trivial_over_base(const InducedPresentation& ind);

struct EmbeddingSurjectivity {
  bool surjective = false;
  std::string witness;
};

// Specializing the second leg by the counit must reach every reduced
// monomial of K[Y] up to the stated degree.
EmbeddingSurjectivity canonical_embedding_surjective(
    const InducedPresentation& ind, int deg, int degree_cap = 4);

struct QuotientAudit {
  bool invariant = false;
  bool relations = false;
  bool generate = false;
  bool coaction_restricts = false;
  bool derivation = false;
  int checked_deg = 0;
};

// Presentation of X/N for a catalog normal subgroup N: a generating set of
// N-invariants of K[X] realized as the coordinate ring of a torsor under the
// catalog quotient group.
struct QuotientPresentation {
  Torsor source;
  Group N;
  Group quot;
  Torsor result;
  std::vector<MPoly<Rational>> var_images;
  std::vector<MPoly<Rational>> quot_t_images;
  std::vector<MPoly<Rational>> inv_gens;
  TransportResult transported;
  DiffStructure diff;
  QuotientAudit audit;
};

QuotientPresentation quotient_by_normal(const Torsor& x, const DiffStructure& d,
                                        const Group& n, int deg,
                                        int degree_cap = 4);

// Degreewise universal property: the quotient coordinates inject into K[X]
// and their span equals the N-invariants.
bool quotient_universal_property(const QuotientPresentation& qp, int deg,
                                 int degree_cap = 4);

// The copy of G_m sitting in the last diagonal block of a product group,
// presented on the product's own coordinates so normality certificates apply.
Group last_factor_gm(const Group& g);

struct IndIdentityReport {
  int deg = 0;
  bool n_invariants_match_h = false;
  bool h_invariants_match_r = false;
  bool full_group_case = false;
  std::string detail;
};

// For G = N x| H: (Ind_N^G R)^N = 1 (x) K[G]^N, (Ind_H^G R)^N is a copy of R
// through the co-action with the H leg realized inside K[G], and inducing
// from G itself reproduces the N-invariants of R.
IndIdentityReport verify_ind_identities(const SemidirectData& sd,
                                        const PresentedTorsor& rn,
                                        const PresentedTorsor& rh,
                                        const PresentedTorsor& rg, int deg,
                                        const SeriesCtx& ctx,
                                        int degree_cap = 4);

struct StableIdealsReport {
  int ideals_checked = 0;
  bool all_meet_invariants = false;
  std::string detail;
};

// Every nonzero N-stable ideal in the fixture family meets the N-invariants
// in a nonzero element.
StableIdealsReport nstable_ideals_meet_invariants(int deg = 3,
                                                  int degree_cap = 4);

// A finite dimensional algebra with an action of a finite cyclic group,
// given by structure constants over the rationals.
struct GaloisAlgebra {
  int dim = 0;
  std::vector<std::vector<std::vector<Rational>>> mul;
  std::vector<Rational> unit;
  std::vector<std::vector<std::vector<Rational>>> action;

  static GaloisAlgebra ground_field();
  static GaloisAlgebra quadratic(const Rational& a);
};

struct GaloisInductionReport {
  int dim = 0;
  int cosets = 0;
  GaloisAlgebra induced;
  bool matches_tensor_invariants = false;
  bool galois = false;
};

// Induction of an H-Galois algebra to G for finite cyclic catalog groups:
// H-equivariant maps G -> L with pointwise operations and right translation.
GaloisInductionReport induce_finite_galois(const GaloisAlgebra& l,
                                           const Group& gfin,
                                           const Group& hfin);

Json induced_json(const InducedPresentation& ind);
Json quotient_json(const QuotientPresentation& qp);

}  // namespace pvp
