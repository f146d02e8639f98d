#pragma once

#include "pvpatch/induction.hpp"

namespace pvp {

// Differential torsor patching problem over the two sides of the diamond,
// glued along the trivial presentation of F0[G]. Each patch presents a torsor
// under a subgroup of G by a fundamental matrix over the ambient completion
// and its equation over the side field; the glued solution is a G-torsor,
// simple only when the side groups are a catalog generating pair for G.
struct PatchingProblem {
  Group G;
  PresentedTorsor p1;  // patch over F1
  PresentedTorsor p2;  // patch over F2
  BiRat deriv_scale = BiRat::constant(Rational(1));  // derivation is scale * d/dx
};

// validates sizes and subgroup alignment, not the differential audits
PatchingProblem make_patching_problem(Group g, PresentedTorsor p1, PresentedTorsor p2);

// same problem under the derivation a * delta; ZeroScalar when a = 0
PatchingProblem rescale_problem(const PatchingProblem& pb, const BiRat& a);

// Trivialization F0 (x) S_i -> F0[G]: the generator W_ij maps to
// sum_k Z_i[i][k] t_kj, so the coefficient of t_kj is z.m.at(i, k). The
// induced equation on the T block is zinv (A z - scale z'); it vanishes to
// working precision exactly when the patch equation holds, which certifies
// that both glued derivations restrict to the same derivation on F0[G].
struct Trivialization {
  TaggedMat z;
  SMat zinv;
  SMat t_equation;
  bool consistent = false;
};

Trivialization theta_trivialize(const PresentedTorsor& side, const BiRat& scale,
                                const SeriesCtx& ctx);
Trivialization theta_trivialize(const PresentedTorsor& side, const SeriesCtx& ctx);

struct PatchSolution {
  Group G;
  SMat Z;              // fundamental matrix of the glued torsor
  TaggedMat M1, M2;    // gauges with Z = M1 Z1 = M2 Z2 to precision
  std::vector<int> lambda;
  RMat A;              // reconstructed equation over F, scale included
  Torsor S;
  DiffStructure diff;
  int prec = 0;
  BiRat deriv_scale = BiRat::constant(Rational(1));
};

// gauge construction: factor Z2 Z1^-1 = M2^-1 M1, glue Z = M1 Z1, and
// reconstruct A = delta(Z) Z^-1 over F entry by entry
PatchSolution patch(const PatchingProblem& pb, int prec, const Bounds& bounds,
                    const SeriesCtx& ctx);

// independent certificate suite over an immutable solution; failures are
// listed in the report, never thrown
Report verify_solution(const PatchSolution& sol, const PatchingProblem& pb,
                       const Bounds& bounds, const SeriesCtx& ctx);

Json problem_json(const PatchingProblem& pb);
PatchingProblem problem_from_json(const Json& j);
Json solution_json(const PatchSolution& sol);

}  // namespace pvp
