#pragma once
#include <vector>

#include "pvpatch/diamond.hpp"
#include "pvpatch/matrix.hpp"

namespace pvp {

using XMat = Mat<XLaurent>;

// A0 = Aminus * x^Lambda * Aplus on the window: Aminus has x-exponents <= 0
// and determinant 1, x^Lambda is an integer diagonal, Aplus has x-order >= 0
// with an invertible constant-term matrix
struct ResidueFactorization {
  XMat Aminus;
  std::vector<int> Lambda;
  XMat Aplus;
};

ResidueFactorization birkhoff_residue(const XMat& A0, const SeriesCtx& ctx);

// matrix together with the field it is certified to live in; the certificate
// is the provenance atom set, not the shape of the truncated data
struct TaggedMat {
  SMat m;
  FieldTag tag = FieldTag::F0;
  unsigned atoms = 0;
};

struct Factorization {
  TaggedMat A1; // F1 side
  TaggedMat A2; // F2 side
  std::vector<int> Lambda;
  int residual = 0;      // t-order of A2*A - A1, >= the requested precision
  int window_margin = 0; // internal x-window widening used to certify it
};

// A = A2^-1 * A1 mod t^prec: residue-level factorization followed by t-adic
// absorption of the error, split additively by x-exponent per step
Factorization factorize(const SMat& A, int prec, const SeriesCtx& ctx);

struct FactorizationCheck {
  bool reassembles = false;
  bool sides_ok = false;
  bool det_ok = false;
  int residual = 0;
};

FactorizationCheck verify_factorization(const Factorization& f, const SMat& A, int prec,
                                        const SeriesCtx& ctx);

} // namespace pvp
