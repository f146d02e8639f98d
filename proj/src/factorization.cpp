#include "pvpatch/factorization.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "pvpatch/errors.hpp"
#include "pvpatch/kernel.hpp"

namespace pvp {

namespace {

XMat xmat_identity(int n) {
  XMat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = XLaurent::mono(0, Rational(1));
  return m;
}

XLaurent xmat_det(const XMat& a, int hi_cap) {
  const int n = a.n;
  if (n == 1) return a.at(0, 0);
  XLaurent acc;
  for (int j = 0; j < n; ++j) {
    if (a.at(0, j).is_exact_zero()) continue;
    XMat sub(n - 1);
    for (int i = 1; i < n; ++i)
      for (int k = 0, c = 0; k < n; ++k) {
        if (k == j) continue;
        sub.at(i - 1, c++) = a.at(i, k);
      }
    XLaurent term = a.at(0, j).mul(xmat_det(sub, hi_cap), hi_cap);
    if (j % 2) term = term.neg();
    acc = acc.add(term);
  }
  return acc;
}

// adjugate: transpose of cofactors; for a matrix of determinant 1 this is the
// exact inverse, with entries in the same subring
XMat xmat_adjugate(const XMat& a, int hi_cap) {
  const int n = a.n;
  XMat r(n);
  if (n == 1) {
    r.at(0, 0) = XLaurent::mono(0, Rational(1));
    return r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      XMat sub(n - 1);
      for (int p = 0, rr = 0; p < n; ++p) {
        if (p == i) continue;
        for (int q = 0, cc = 0; q < n; ++q) {
          if (q == j) continue;
          sub.at(rr, cc++) = a.at(p, q);
        }
        ++rr;
      }
      XLaurent m = xmat_det(sub, hi_cap);
      if ((i + j) % 2) m = m.neg();
      r.at(j, i) = m;
    }
  return r;
}

int row_valuation(const XMat& b, int i) {
  int best = INT_MAX;
  for (int j = 0; j < b.n; ++j) {
    const XLaurent& e = b.at(i, j);
    if (!e.stored_zero()) best = std::min(best, e.valuation());
  }
  return best;
}

std::string entry_name(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

int support_radius(const SMat& a) {
  int s = 1;
  for (const TSeries& e : a.e)
    for (const XLaurent& row : e.rows) {
      if (row.c.empty()) continue;
      s = std::max({s, std::abs(row.lo), std::abs(row.known_hi())});
    }
  return s;
}

SeriesCtx widen(const SeriesCtx& ctx, int margin) {
  SeriesCtx r = ctx;
  r.x_lo -= margin;
  r.x_hi += margin;
  return r;
}

// a row certifies as zero up to x_hi when its stored window is zero and its
// knowledge actually covers that range
bool row_certified_zero(const XLaurent& row, int x_hi) {
  if (!row.stored_zero()) return false;
  return row.is_exact_zero() || row.exact_hi || row.known_hi() >= x_hi;
}

// F2-side supports drift downward linearly in the t-order, so products
// against series truncated at the reporting window lose knowledge near
// exponent 0; the loop therefore runs on a widened internal window
Factorization factorize_at(const SMat& A, int prec, const SeriesCtx& rctx,
                           const SeriesCtx& wide) {
  const int n = A.n;
  SeriesCtx wctx = wide;
  wctx.t_prec = prec;

  XMat A0(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A0.at(i, j) = A.at(i, j).coeff_t(0);
  const ResidueFactorization rb = birkhoff_residue(A0, wctx);

  const XMat AmInv = xmat_adjugate(rb.Aminus, 0);
  SMat A1(n), A2(n);
  for (int i = 0; i < n; ++i) {
    const int lp = std::max(rb.Lambda[i], 0);
    const int lm = std::min(rb.Lambda[i], 0);
    for (int j = 0; j < n; ++j) {
      A1.at(i, j) = TSeries::from_xl(rb.Aplus.at(i, j).shift(lp));
      A2.at(i, j) = TSeries::from_xl(AmInv.at(i, j).shift(-lm));
    }
  }
  unsigned atoms1 = AtomPosSeries | AtomFiniteLaurent;
  unsigned atoms2 = AtomNegPoly | AtomFiniteLaurent;

  // error matrix A2 * A * A1^-1, maintained incrementally: the per-step
  // updates have a single nonconstant t-row, so their products stay sparse
  SMat F = smat_mul(A2, smat_mul(A, smat_inv(A1, wctx), wctx), wctx);

  for (int m = 1; m < prec; ++m) {
    bool progress = false;
    SMat M1 = smat_identity(n);
    SMat M2 = smat_identity(n);
    SMat P(n); // the t^m part absorbed into A1, as a matrix
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const TSeries& e = F.at(i, j);
        if (e.known_t_end() <= m)
          fail(Errc::PrecisionExhausted,
               "the error expansion is not known at t-order " + std::to_string(m));
        const XLaurent d = e.coeff_t(m);
        if (d.stored_zero()) continue;
        std::pair<XLaurent, XLaurent> parts;
        try {
          parts = split_xlaurent(d);
        } catch (const PvError& err) {
          if (err.code() == Errc::InsufficientPrecision)
            fail(Errc::PrecisionExhausted,
                 "x-window too narrow to split the error at t-order " + std::to_string(m));
          throw;
        }
        if (!parts.first.stored_zero()) {
          P.at(i, j) = TSeries::from_xl(parts.first, m);
          M1.at(i, j) = M1.at(i, j).add(P.at(i, j), wctx);
          progress = true;
        }
        if (!parts.second.stored_zero()) {
          M2.at(i, j) = M2.at(i, j).sub(TSeries::from_xl(parts.second, m), wctx);
          progress = true;
        }
      }
    if (!progress) continue;
    // M1^-1 = sum_k (-t^m P)^k, exact modulo t^prec
    SMat M1inv = smat_identity(n);
    SMat term = smat_identity(n);
    for (int k = 1; k * m < prec; ++k) {
      term = smat_mul(term, smat_scale(P, Rational(-1)), wctx);
      M1inv = smat_add(M1inv, term, wctx);
    }
    F = smat_mul(M2, smat_mul(F, M1inv, wctx), wctx);
    A1 = smat_mul(M1, A1, wctx);
    A2 = smat_mul(M2, A2, wctx);
    atoms1 |= AtomPosSeries;
    atoms2 |= AtomNegPoly;
  }

  Factorization out;
  out.A1 = TaggedMat{A1, tag_for_atoms(atoms1), atoms1};
  out.A2 = TaggedMat{A2, tag_for_atoms(atoms2), atoms2};
  out.Lambda = rb.Lambda;
  out.window_margin = wctx.x_hi - rctx.x_hi;

  int residual = INT_MAX;
  const SMat R = smat_mul(A2, A, wctx);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const TSeries d = R.at(i, j).sub(A1.at(i, j), wctx);
      if (d.known_t_end() < prec)
        fail(Errc::PrecisionExhausted, "reassembly is not known to the requested precision");
      for (int e = d.t_lo; e < prec; ++e) {
        const XLaurent row = d.coeff_t(e);
        if (row_certified_zero(row, rctx.x_hi)) continue;
        if (!row.stored_zero())
          fail(Errc::FactorizationFailed,
               "reassembly differs at t-order " + std::to_string(e) + " in entry " +
                   entry_name(i, j));
        fail(Errc::PrecisionExhausted,
             "reassembly cannot be certified past t-order " + std::to_string(e));
      }
      residual = std::min(residual, d.residual_order(wctx));
    }
  out.residual = residual;
  return out;
}

} // namespace

ResidueFactorization birkhoff_residue(const XMat& A0, const SeriesCtx& ctx) {
  const int n = A0.n;
  if (n <= 0) fail(Errc::BadInput, "residue factorization needs a nonempty matrix");

  XLaurent det = xmat_det(A0, ctx.x_hi);
  if (det.stored_zero()) {
    if (det.is_exact_zero() || det.exact_hi)
      fail(Errc::SingularResidue, "residue determinant vanishes on the window");
    fail(Errc::SingularResidue,
         "residue determinant has no certified nonzero term in the window");
  }
  const int det_val = det.valuation();

  XMat B = A0;
  XMat Am = xmat_identity(n);
  std::vector<int> v(n);

  for (;;) {
    int vsum = 0;
    for (int i = 0; i < n; ++i) {
      v[i] = row_valuation(B, i);
      if (v[i] == INT_MAX)
        fail(Errc::WindowExhausted,
             "row " + std::to_string(i) + " lost all certified support during elimination");
      vsum += v[i];
    }
    // the determinant valuation bounds the reachable row valuations; passing
    // it means the window data was too short to witness invertibility
    if (vsum > det_val)
      fail(Errc::WindowExhausted, "residue elimination did not stabilize within the x-window");

    kernel::QMat M(n, kernel::QVec(n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) M[k][i] = B.at(i, k).coeff(v[i]);
    kernel::QMat ns = kernel::nullspace(M);
    if (ns.empty()) break;

    const kernel::QVec& cvec = ns[0];
    int istar = -1;
    for (int i = 0; i < n; ++i) {
      if (cvec[i] == 0) continue;
      if (istar < 0 || v[i] < v[istar]) istar = i;
    }
    for (int i = 0; i < n; ++i) {
      if (i == istar || cvec[i] == 0) continue;
      const Rational f = cvec[i] / cvec[istar];
      const int k = v[istar] - v[i]; // <= 0 by pivot choice
      for (int j = 0; j < n; ++j)
        B.at(istar, j) = B.at(istar, j).add(B.at(i, j).scale(f).shift(k));
      // B picked up E = I + sum f x^k E_{istar,i} on the left, so Aminus
      // absorbs E^-1 on the right: column i minus f x^k column istar
      for (int r = 0; r < n; ++r)
        Am.at(r, i) = Am.at(r, i).sub(Am.at(r, istar).scale(f).shift(k));
    }
  }

  ResidueFactorization out;
  out.Aminus = Am;
  out.Lambda = v;
  out.Aplus = XMat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      XLaurent e = B.at(i, j).shift(-v[i]);
      e.normalize();
      out.Aplus.at(i, j) = e;
    }
  return out;
}

Factorization factorize(const SMat& A, int prec, const SeriesCtx& ctx) {
  const int n = A.n;
  if (n <= 0) fail(Errc::BadInput, "factorization needs a nonempty matrix");
  if (prec <= 0) fail(Errc::BadInput, "factorization precision must be positive");
  if (prec > ctx.t_prec)
    fail(Errc::PrecisionExhausted, "requested t-precision exceeds the working precision");

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const TSeries& s = A.at(i, j);
      for (int e = s.t_lo; e < 0; ++e)
        if (!s.coeff_t(e).stored_zero())
          fail(Errc::BadInput, "entry " + entry_name(i, j) + " has support at negative t-order");
      if (s.known_t_end() < prec)
        fail(Errc::PrecisionExhausted,
             "entry " + entry_name(i, j) + " is not known to the requested precision");
    }

  const int step = prec * (support_radius(A) + 1) + 4;
  int margin = step;
  for (int attempt = 0;; ++attempt) {
    try {
      return factorize_at(A, prec, ctx, widen(ctx, margin));
    } catch (const PvError& e) {
      if (e.code() != Errc::PrecisionExhausted || attempt >= 3) throw;
      margin += step;
    }
  }
}

FactorizationCheck verify_factorization(const Factorization& f, const SMat& A, int prec,
                                        const SeriesCtx& ctx) {
  FactorizationCheck out;
  out.sides_ok = tag_leq(f.A1.tag, FieldTag::F1) && tag_leq(tag_for_atoms(f.A1.atoms), FieldTag::F1) &&
                 tag_leq(f.A2.tag, FieldTag::F2) && tag_leq(tag_for_atoms(f.A2.atoms), FieldTag::F2);

  const int margin = std::max(prec * (support_radius(A) + 2) + 4, f.window_margin);
  SeriesCtx wctx = widen(ctx, margin);
  wctx.t_prec = std::min(prec, ctx.t_prec);

  int residual = INT_MAX;
  bool certified = true;
  const SMat R = smat_mul(f.A2.m, A, wctx);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      const TSeries d = R.at(i, j).sub(f.A1.m.at(i, j), wctx);
      if (d.known_t_end() < prec) certified = false;
      for (int e = d.t_lo; e < std::min(prec, d.known_t_end()); ++e)
        if (!row_certified_zero(d.coeff_t(e), ctx.x_hi)) certified = false;
      residual = std::min(residual, d.residual_order(wctx));
    }
  out.residual = residual;
  out.reassembles = certified && residual >= prec;

  const TSeries dA = smat_det(A, wctx);
  const TSeries d1 = smat_det(f.A1.m, wctx);
  const TSeries d2 = smat_det(f.A2.m, wctx);
  const TSeries dd = d2.mul(dA, wctx).sub(d1, wctx);
  bool det_ok = dd.known_t_end() >= prec && dd.residual_order(wctx) >= prec;
  if (det_ok)
    for (int e = dd.t_lo; e < prec; ++e)
      if (!row_certified_zero(dd.coeff_t(e), ctx.x_hi)) det_ok = false;
  out.det_ok = det_ok;
  return out;
}

} // namespace pvp
