#pragma once

#include <string>
#include <vector>

#include "pvpatch/kernel.hpp"
#include "pvpatch/mpoly.hpp"

namespace pvp {

// diagonal block of a matrix-group presentation; det_var is the ring index of
// the block's det-inverse variable, -1 when the block determinant is 1 on the
// group or the antipode is supplied explicitly
struct Block {
  std::vector<int> rows;
  int det_var = -1;
};

// Closed subgroup of GL_n over Q, presented by ideal generators in the matrix
// entries t11..tnn (row major) and optional det-inverse variables. The Hopf
// structure (comultiplication T -> T*T', counit T -> I, antipode T -> T^{-1})
// is stored explicitly and verified exactly at construction.
struct Group {
  std::string name;
  int n = 0;
  Ring<Rational> ring;
  std::vector<Block> blocks;
  std::vector<MPoly<Rational>> antipode;      // image of each ring variable
  std::vector<Rational> counit;               // value of each ring variable at I
  std::vector<std::vector<Rational>> points;  // rational points, identity first
  std::vector<std::vector<std::vector<Rational>>> lie_gens;
  std::vector<std::string> normal_in;
  // "Partner:Ambient" facts: this group and Partner generate Ambient
  std::vector<std::string> generates_with;

  int t_index(int i, int j) const { return i * n + j; }
  MPoly<Rational> tvar(int i, int j) const {
    return MPoly<Rational>::var(ring.nvars(), t_index(i, j));
  }
};

Rational mpoly_eval(const MPoly<Rational>& p, const std::vector<Rational>& vals);

// parse a polynomial over the named variables; accepts integers, fractions
// p/q, +, -, *, ^ and parentheses
MPoly<Rational> parse_mpoly(const std::string& s, const std::vector<std::string>& vars);

// K[G] (x) K[G] with the right leg primed
TensorRing<Rational> square_ring(const Group& g);

// comultiplication image of an element of K[G] inside a square ring for g
MPoly<Rational> comultiply(const Group& g, const MPoly<Rational>& f,
                           const TensorRing<Rational>& sq);
MPoly<Rational> antipode_apply(const Group& g, const MPoly<Rational>& f);
Rational counit_eval(const Group& g, const MPoly<Rational>& f);

// exact checks: generators vanish at the stored points, comultiplication maps
// the ideal into ideal(x)R + R(x)ideal, the antipode preserves the ideal, and
// coassociativity, the counit laws and both antipode laws hold on generators
// of the coordinate ring; throws GeneratorAuditFailed naming the axiom
void verify_hopf(const Group& g);

Group group_gl(int n);
Group group_sl2();
Group group_ga_upper();
Group group_ga_lower();
Group group_gm();
Group group_torus_sl2();
Group group_borel_sl2();
Group group_cyclic(int k);
Group group_trivial(int n);
Group direct_product(const Group& a, const Group& b);
Group group_from_generators(const std::string& name, int n,
                            const std::vector<std::string>& gen_strs);
std::vector<Group> standard_catalog();

// containment of super's ideal generators in sub's ideal, by reduction
bool is_subgroup(const Group& sub, const Group& super, std::string* why = nullptr);

struct NormalityReport {
  bool subgroup = false;
  bool normal = false;
  std::vector<std::string> conj;  // entries of T * T_N * T^{-1} in K[G](x)K[N]
  std::string detail;
};

// conjugation certificate: nsub is normal in g iff every generator of the
// ideal of nsub, evaluated at T * T_N * T^{-1}, reduces to zero modulo
// I_g (x) K[N] + K[G] (x) I_nsub
NormalityReport check_normal(const Group& g, const Group& nsub);
NormalityReport require_normal(const Group& g, const Group& nsub);

// coordinate-level isomorphism K[G] ~ K[N] (x) K[H] for G = N x| H, verified
// at construction: both variable maps invert each other modulo the ideals and
// the forward map is the coordinate form of (n, h) -> n*h
struct SemidirectData {
  Group G, N, H;
  TensorRing<Rational> nh;
  std::vector<MPoly<Rational>> g_to_nh;  // per G-ring variable
  std::vector<MPoly<Rational>> nh_to_g;  // per tensor variable
};
SemidirectData borel_semidirect();

// right comodule-algebra structure: an algebra map module -> module (x) K[grp]
// whose images satisfy the counit and coassociativity laws
struct Coaction {
  Ring<Rational> module;
  Group grp;
  TensorRing<Rational> tr;
  std::vector<MPoly<Rational>> images;  // per module variable

  MPoly<Rational> coact(const MPoly<Rational>& f) const {
    return substitute(f, images, tr.ring);
  }
};

// throws BadAction unless the images kill the module ideal and satisfy the
// comodule axioms
void verify_coaction(const Coaction& c);

Coaction right_translation(const Group& g);
Coaction subgroup_restriction(const Group& g, const Group& h);
// the action x.h = h^{-1} x as a right coaction
Coaction twisted_left(const Group& g, const Group& h);

struct InvariantBasis {
  int maxdeg = 0;
  std::vector<Expo> mons;  // reduced module monomials spanning degree <= maxdeg
  kernel::QMat vecs;       // basis vectors as coefficient rows over mons
  std::vector<MPoly<Rational>> elems;
};

// exact K-basis of {f : rho(f) = f(x)1, deg f <= maxdeg}
InvariantBasis invariants_bounded(const Coaction& c, int maxdeg, int degree_cap = 4);
InvariantBasis invariants_intersection(const std::vector<Coaction>& cs, int maxdeg,
                                       int degree_cap = 4);
bool spans_equal(const InvariantBasis& a, const InvariantBasis& b);

bool intersection_invariants_equals_generated(const Group& g,
                                              const std::vector<Group>& subs,
                                              const Group& generated, int deg,
                                              int degree_cap = 4);

// requires nsub normal in g; compares right translation with the twisted
// left action degreewise
bool left_right_invariants_agree(const Group& g, const Group& nsub, int deg,
                                 int degree_cap = 4);

struct StabilityReport {
  bool certified = false;  // reduction certificate: rho(J) <= J (x) K[H]
  bool disproved = false;  // witness pair of rational points
  std::string detail;
};

// jpoints are rational points of the module variety lying on J, used to hunt
// for counterexamples when the reduction certificate does not close
StabilityReport check_ideal_stable(const std::vector<MPoly<Rational>>& jgens,
                                   const Coaction& c,
                                   const std::vector<std::vector<Rational>>& jpoints,
                                   int degree_cap = 4);

}  // namespace pvp
