#include "pvpatch/induction.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

namespace pvp {

namespace {

using MP = MPoly<Rational>;

std::map<Expo, int, GradedLexGreater> index_monomials(const std::vector<Expo>& mons) {
  std::map<Expo, int, GradedLexGreater> idx;
  for (size_t i = 0; i < mons.size(); ++i) idx.emplace(mons[i], static_cast<int>(i));
  return idx;
}

kernel::QVec poly_row(const MP& p, const std::map<Expo, int, GradedLexGreater>& idx,
                      size_t width, const char* where) {
  kernel::QVec row(width, Rational(0));
  for (const auto& [e, c] : p.t) {
    auto it = idx.find(e);
    if (it == idx.end()) fail(Errc::BadInput, std::string(where) + ": monomial outside the degree window");
    row[it->second] = c;
  }
  return row;
}

MP row_to_poly(const kernel::QVec& row, const std::vector<Expo>& mons) {
  MP p;
  for (size_t i = 0; i < row.size(); ++i)
    if (!rat_is_zero(row[i])) p = p + MP::mono(mons[i], row[i]);
  return p;
}

int pivot_col(const kernel::QVec& r) {
  for (size_t i = 0; i < r.size(); ++i)
    if (!rat_is_zero(r[i])) return static_cast<int>(i);
  return -1;
}

void strip_zero_rows(kernel::QMat& m) {
  m.erase(std::remove_if(m.begin(), m.end(),
                         [](const kernel::QVec& r) { return pivot_col(r) < 0; }),
          m.end());
}

int rank_of(kernel::QMat m) {
  if (m.empty()) return 0;
  kernel::rref(m);
  strip_zero_rows(m);
  return static_cast<int>(m.size());
}

// residue of v against a reduced row basis; zero iff v lies in the row space
kernel::QVec rowspace_residue(const kernel::QMat& rr, kernel::QVec v) {
  for (const auto& r : rr) {
    int p = pivot_col(r);
    if (p < 0 || rat_is_zero(v[p])) continue;
    const Rational f = v[p];
    for (size_t i = 0; i < v.size(); ++i) v[i] -= f * r[i];
  }
  return v;
}

bool in_rowspace(const kernel::QMat& rr, kernel::QVec v) {
  return pivot_col(rowspace_residue(rr, std::move(v))) < 0;
}

bool same_group_ideal(const Group& a, const Group& b) {
  if (a.n != b.n || a.ring.vars != b.ring.vars) return false;
  for (const auto& g : a.ring.gens)
    if (!b.ring.reduce(g).is_zero()) return false;
  for (const auto& g : b.ring.gens)
    if (!a.ring.reduce(g).is_zero()) return false;
  return true;
}

// determinant of the t-submatrix of h over the given block rows
MP block_det_poly(const Group& h, const std::vector<int>& rows) {
  const int nv = h.ring.nvars();
  std::function<MP(const std::vector<int>&, const std::vector<int>&)> det =
      [&](const std::vector<int>& ri, const std::vector<int>& cj) -> MP {
    if (ri.size() == 1) return MP::var(nv, h.t_index(ri[0], cj[0]));
    MP acc;
    for (size_t k = 0; k < cj.size(); ++k) {
      std::vector<int> sub_r(ri.begin() + 1, ri.end());
      std::vector<int> sub_c;
      for (size_t m = 0; m < cj.size(); ++m)
        if (m != k) sub_c.push_back(cj[m]);
      MP term = MP::var(nv, h.t_index(ri[0], cj[k])) * det(sub_r, sub_c);
      acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  return det(rows, rows);
}

// image of a G coordinate in K[H] for an aligned subgroup H; a det-inverse
// variable absent from H is legal only when the block determinant is 1 there
MP sub_var_image(const Group& g, const Group& h, int v) {
  const std::string& name = g.ring.vars[v];
  int u = h.ring.var_index(name);
  if (u >= 0) return h.ring.reduce(MP::var(h.ring.nvars(), u));
  for (const Block& b : g.blocks) {
    if (b.det_var != v) continue;
    MP det = h.ring.reduce(block_det_poly(h, b.rows));
    if (h.ring.reduce(det - h.ring.one()).is_zero()) return h.ring.one();
    fail(Errc::BadAction, "block determinant of " + h.name + " is not 1, so " +
                              name + " has no image");
  }
  fail(Errc::BadAction, "no image of " + name + " in " + h.name);
}

TSeries eval_series(const MP& p, const std::vector<TSeries>& vals, const SeriesCtx& ctx) {
  TSeries acc = TSeries::from_rational(0);
  for (const auto& [e, c] : p.t) {
    TSeries term = TSeries::from_rational(c);
    for (size_t v = 0; v < e.size(); ++v)
      for (int k = 0; k < e[v]; ++k) term = term.mul(vals[v], ctx);
    acc = acc.add(term, ctx);
  }
  return acc;
}

TSeries block_det_series(const SMat& m, const std::vector<int>& rows, const SeriesCtx& ctx) {
  std::function<TSeries(const std::vector<int>&, const std::vector<int>&)> det =
      [&](const std::vector<int>& ri, const std::vector<int>& cj) -> TSeries {
    if (ri.size() == 1) return m.at(ri[0], cj[0]);
    TSeries acc = TSeries::from_rational(0);
    for (size_t k = 0; k < cj.size(); ++k) {
      std::vector<int> sub_r(ri.begin() + 1, ri.end());
      std::vector<int> sub_c;
      for (size_t mm = 0; mm < cj.size(); ++mm)
        if (mm != k) sub_c.push_back(cj[mm]);
      TSeries term = m.at(ri[0], cj[k]).mul(det(sub_r, sub_c), ctx);
      acc = (k % 2 == 0) ? acc.add(term, ctx) : acc.sub(term, ctx);
    }
    return acc;
  };
  return det(rows, rows);
}

// the source factor of the induced det-inverse generator for a G block
MP source_detinv_image(const Torsor& y, const Group& g, const Block& b) {
  const std::string zname = "z" + g.ring.vars[b.det_var];
  int u = y.ring.var_index(zname);
  if (u >= 0) return MP::var(y.ring.nvars(), u);
  // z-submatrix determinant over the block rows
  const int nv = y.ring.nvars();
  std::function<MP(const std::vector<int>&, const std::vector<int>&)> det =
      [&](const std::vector<int>& ri, const std::vector<int>& cj) -> MP {
    if (ri.size() == 1) return MP::var(nv, y.z_index(ri[0], cj[0]));
    MP acc;
    for (size_t k = 0; k < cj.size(); ++k) {
      std::vector<int> sub_r(ri.begin() + 1, ri.end());
      std::vector<int> sub_c;
      for (size_t m = 0; m < cj.size(); ++m)
        if (m != k) sub_c.push_back(cj[m]);
      MP term = MP::var(nv, y.z_index(ri[0], cj[k])) * det(sub_r, sub_c);
      acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  MP dz = y.ring.reduce(det(b.rows, b.rows));
  if (y.ring.reduce(dz - y.ring.one()).is_zero()) return y.ring.one();
  fail(Errc::NotInvariant, "source torsor has no inverse for the " + g.name +
                               " block determinant " + g.ring.vars[b.det_var]);
}

std::vector<MPoly<BiRat>> lifted_gens(const Ring<Rational>& r) {
  std::vector<MPoly<BiRat>> out;
  out.reserve(r.gens.size());
  for (const auto& g : r.gens) out.push_back(lift_coeffs(g));
  return out;
}

// ---- finite cyclic helpers ----

using QCube = std::vector<std::vector<std::vector<Rational>>>;

kernel::QMat qmat_identity(int n) {
  kernel::QMat m(n, kernel::QVec(n, Rational(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// row convention: act[i][j] is the e_j coefficient of the image of e_i,
// so "apply a then b" is the matrix product a * b
kernel::QMat qmat_mul(const kernel::QMat& a, const kernel::QMat& b) {
  const int n = static_cast<int>(a.size());
  kernel::QMat m(n, kernel::QVec(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (rat_is_zero(a[i][k])) continue;
      for (int j = 0; j < n; ++j) m[i][j] += a[i][k] * b[k][j];
    }
  return m;
}

kernel::QVec qvec_apply(const kernel::QVec& v, const kernel::QMat& m) {
  const int n = static_cast<int>(v.size());
  kernel::QVec out(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    if (rat_is_zero(v[i])) continue;
    for (int j = 0; j < n; ++j) out[j] += v[i] * m[i][j];
  }
  return out;
}

kernel::QVec algebra_mul(const QCube& mul, const kernel::QVec& a, const kernel::QVec& b) {
  const int n = static_cast<int>(a.size());
  kernel::QVec out(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    if (rat_is_zero(a[i])) continue;
    for (int j = 0; j < n; ++j) {
      if (rat_is_zero(b[j])) continue;
      for (int k = 0; k < n; ++k) out[k] += a[i] * b[j] * mul[i][j][k];
    }
  }
  return out;
}

int finite_order(const Group& g) {
  if (g.name.rfind("Triv", 0) == 0 && g.n == 1) return 1;
  if (g.name.size() >= 2 && g.name[0] == 'C') {
    int k = 0;
    for (size_t i = 1; i < g.name.size(); ++i) {
      if (g.name[i] < '0' || g.name[i] > '9') { k = 0; break; }
      k = 10 * k + (g.name[i] - '0');
    }
    if (k >= 1 && g.n == 1 && g.ring.gens.size() == 1 &&
        g.ring.gens[0].lead_expo()[0] == k)
      return k;
  }
  fail(Errc::BadInput, "finite induction covers the cyclic groups C1..Ck and Triv1, not " + g.name);
}

void audit_galois_algebra(const GaloisAlgebra& l, int expected_order) {
  const int n = l.dim;
  if (n <= 0 || static_cast<int>(l.mul.size()) != n ||
      static_cast<int>(l.unit.size()) != n)
    fail(Errc::BadInput, "algebra tables do not match the stated dimension");
  for (const auto& row : l.mul) {
    if (static_cast<int>(row.size()) != n) fail(Errc::BadInput, "ragged multiplication table");
    for (const auto& cell : row)
      if (static_cast<int>(cell.size()) != n) fail(Errc::BadInput, "ragged multiplication table");
  }
  if (n != expected_order)
    fail(Errc::BadInput, "algebra dimension must equal the subgroup order");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (l.mul[i][j] != l.mul[j][i]) fail(Errc::BadInput, "multiplication is not commutative");
  for (int i = 0; i < n; ++i) {
    kernel::QVec ei(n, Rational(0));
    ei[i] = 1;
    if (algebra_mul(l.mul, ei, l.unit) != ei) fail(Errc::BadInput, "unit law fails");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        kernel::QVec ei(n, Rational(0)), ej(n, Rational(0)), ek(n, Rational(0));
        ei[i] = 1;
        ej[j] = 1;
        ek[k] = 1;
        const auto lhs = algebra_mul(l.mul, algebra_mul(l.mul, ei, ej), ek);
        const auto rhs = algebra_mul(l.mul, ei, algebra_mul(l.mul, ej, ek));
        if (lhs != rhs) fail(Errc::BadInput, "multiplication is not associative");
      }
  if (static_cast<int>(l.action.size()) != expected_order)
    fail(Errc::BadAction, "action table must list one matrix per subgroup element");
  for (const auto& m : l.action)
    if (static_cast<int>(m.size()) != n)
      fail(Errc::BadAction, "action matrix does not match the dimension");
  if (l.action[0] != qmat_identity(n))
    fail(Errc::BadAction, "the identity element must act as the identity");
  for (int a = 0; a < expected_order; ++a)
    for (int b = 0; b < expected_order; ++b)
      if (qmat_mul(l.action[a], l.action[b]) != l.action[(a + b) % expected_order])
        fail(Errc::BadAction, "action table is not a group homomorphism");
  for (int s = 0; s < expected_order; ++s) {
    if (qvec_apply(l.unit, l.action[s]) != l.unit)
      fail(Errc::BadAction, "action does not fix the unit");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        kernel::QVec ei(n, Rational(0)), ej(n, Rational(0));
        ei[i] = 1;
        ej[j] = 1;
        const auto lhs = qvec_apply(algebra_mul(l.mul, ei, ej), l.action[s]);
        const auto rhs =
            algebra_mul(l.mul, qvec_apply(ei, l.action[s]), qvec_apply(ej, l.action[s]));
        if (lhs != rhs) fail(Errc::BadAction, "action is not multiplicative");
      }
  }
}

}  // namespace

PresentedTorsor trivial_fixture(const Group& g) {
  PresentedTorsor p;
  p.Y = make_trivial_torsor(g, FieldTag::F);
  p.Z0.m = smat_identity(g.n);
  p.Z0.tag = FieldTag::F;
  p.Z0.atoms = AtomRatF;
  p.diff.A = RMat(g.n);
  return p;
}

PresentedTorsor unipotent_log_fixture(const SeriesCtx& ctx) {
  PresentedTorsor p;
  p.Y = make_trivial_torsor(group_ga_upper(), FieldTag::F);
  DiamondElem lp = log_p(ctx);
  p.Z0.m = smat_identity(2);
  p.Z0.m.at(0, 1) = lp.val;
  p.Z0.tag = FieldTag::F1;
  p.Z0.atoms = lp.atoms | AtomRatF;
  p.diff.A = RMat(2);
  p.diff.A.at(0, 1) = log_p_derivative();
  return p;
}

PresentedTorsor torus_exp_fixture(const SeriesCtx& ctx) {
  PresentedTorsor p;
  p.Y = make_trivial_torsor(group_torus_sl2(), FieldTag::F);
  DiamondElem ep = exp_p(ctx);
  p.Z0.m = smat_identity(2);
  p.Z0.m.at(0, 0) = ep.val;
  p.Z0.m.at(1, 1) = ep.val.inv(ctx);
  p.Z0.tag = FieldTag::F1;
  p.Z0.atoms = ep.atoms | AtomRatF;
  p.diff.A = RMat(2);
  p.diff.A.at(0, 0) = exp_p_log_derivative();
  p.diff.A.at(1, 1) = -exp_p_log_derivative();
  return p;
}

Coaction induced_h_coaction(const InducedPresentation& ind) {
  const Group& h = ind.source.grp;
  const Group& g = ind.G;
  const int nz = ind.source.ring.nvars();
  const int ng = g.ring.nvars();
  const int nh = h.ring.nvars();
  Coaction c;
  c.module = ind.amb.ring;
  c.grp = h;
  c.tr = tensor_ring(ind.amb.ring, h.ring, "", "'");
  const int tnv = c.tr.ring.nvars();
  std::vector<int> zmap(nz + nh), tmap(ng + nh);
  for (int v = 0; v < nz; ++v) zmap[v] = v;
  for (int u = 0; u < nh; ++u) zmap[nz + u] = nz + ng + u;
  for (int w = 0; w < ng; ++w) tmap[w] = nz + w;
  for (int u = 0; u < nh; ++u) tmap[ng + u] = nz + ng + u;
  c.images.assign(nz + ng, MP());
  for (int v = 0; v < nz; ++v)
    c.images[v] = c.tr.ring.reduce(remap_vars(ind.source.rho.images[v], zmap, tnv));
  const Coaction tw = twisted_left(g, h);
  for (int w = 0; w < ng; ++w)
    c.images[nz + w] = c.tr.ring.reduce(remap_vars(tw.images[w], tmap, tnv));
  verify_coaction(c);
  return c;
}

Coaction induced_right_translation(const InducedPresentation& ind, const Group& k) {
  const Group& g = ind.G;
  const int nz = ind.source.ring.nvars();
  const int ng = g.ring.nvars();
  const int nk = k.ring.nvars();
  Coaction c;
  c.module = ind.amb.ring;
  c.grp = k;
  c.tr = tensor_ring(ind.amb.ring, k.ring, "", "'");
  const int tnv = c.tr.ring.nvars();
  std::vector<int> tmap(ng + nk);
  for (int w = 0; w < ng; ++w) tmap[w] = nz + w;
  for (int u = 0; u < nk; ++u) tmap[ng + u] = nz + ng + u;
  c.images.assign(nz + ng, MP());
  for (int v = 0; v < nz; ++v) c.images[v] = MP::var(tnv, v);
  const Coaction sr = subgroup_restriction(g, k);
  for (int w = 0; w < ng; ++w)
    c.images[nz + w] = c.tr.ring.reduce(remap_vars(sr.images[w], tmap, tnv));
  verify_coaction(c);
  return c;
}

Coaction torsor_restriction(const Torsor& x, const Group& k) {
  const Group& g = x.grp;
  std::string why;
  if (k.n != g.n || !is_subgroup(k, g, &why))
    fail(Errc::BadAction, k.name + " is not an aligned subgroup of " + g.name +
                              (why.empty() ? "" : ": " + why));
  Coaction c;
  c.module = x.ring;
  c.grp = k;
  c.tr = tensor_ring(x.ring, k.ring, "", "");
  const int nv = x.ring.nvars();
  c.images.assign(nv, MP());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int kk = 0; kk < g.n; ++kk)
        acc = acc + c.tr.embed_left(MP::var(nv, x.z_index(i, kk))) *
                        c.tr.embed_right(sub_var_image(g, k, g.t_index(kk, j)));
      c.images[x.z_index(i, j)] = c.tr.ring.reduce(acc);
    }
  for (const Block& b : g.blocks) {
    if (b.det_var < 0) continue;
    c.images[b.det_var] = c.tr.ring.reduce(
        c.tr.embed_left(MP::var(nv, b.det_var)) *
        c.tr.embed_right(sub_var_image(g, k, b.det_var)));
  }
  verify_coaction(c);
  return c;
}

InducedPresentation induce(const PresentedTorsor& src, const Group& g,
                           const SeriesCtx& ctx) {
  const Group& h = src.Y.grp;
  std::string why;
  if (h.n != g.n || !is_subgroup(h, g, &why))
    fail(Errc::BadInput, h.name + " is not an aligned subgroup of " + g.name +
                             (why.empty() ? "" : ": " + why));
  if (src.Z0.m.n != g.n) fail(Errc::BadInput, "fundamental matrix size mismatch");
  if (src.diff.A.n != g.n) fail(Errc::BadInput, "equation matrix size mismatch");
  if (!tag_leq(tag_for_atoms(src.Z0.atoms), src.Z0.tag))
    fail(Errc::BadInput, "overfield tag does not cover the matrix provenance");

  InducedPresentation ind;
  ind.source = src.Y;
  ind.G = g;
  ind.Z0 = src.Z0;
  ind.diff = src.diff;

  // the matrix lies on the source variety
  std::vector<TSeries> zval(src.Y.ring.nvars(), TSeries::from_rational(0));
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) zval[src.Y.z_index(i, j)] = src.Z0.m.at(i, j);
  for (const Block& b : h.blocks) {
    if (b.det_var < 0) continue;
    zval[b.det_var] = block_det_series(src.Z0.m, b.rows, ctx).inv(ctx);
  }
  for (const auto& gen : src.Y.ring.gens)
    if (!eval_series(gen, zval, ctx).is_zero_to_precision(ctx))
      fail(Errc::NotInvariant, "fundamental matrix violates the source relation " +
                                   gen.str(src.Y.ring.vars));
  ind.audit.z0_relations = true;

  TSeries det = smat_det(src.Z0.m, ctx);
  if (det.is_zero_to_precision(ctx))
    fail(Errc::SingularFundamentalMatrix, "det(Z0) vanishes to working precision");
  det.t_valuation();  // certifies a nonzero coefficient or throws
  ind.audit.z0_invertible = true;

  {
    const SMat a = rmat_expand(src.diff.A, ctx);
    const SMat rhs = smat_mul(a, src.Z0.m, ctx);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        if (!src.Z0.m.at(i, j).derive().sub(rhs.at(i, j), ctx).is_zero_to_precision(ctx))
          fail(Errc::NotInvariant, "fundamental matrix violates its equation at entry (" +
                                       std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  }
  ind.audit.z0_derivation = true;

  ind.result = make_trivial_torsor(g, src.Y.base);
  ind.amb = tensor_ring(src.Y.ring, g.ring, "", "");
  const int nz = src.Y.ring.nvars();
  const int ng = g.ring.nvars();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int k = 0; k < g.n; ++k)
        acc = acc + ind.amb.embed_left(MP::var(nz, src.Y.z_index(i, k))) *
                        ind.amb.embed_right(g.tvar(k, j));
      ind.gens.push_back(ind.amb.ring.reduce(acc));
      ind.gen_names.push_back("w" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  for (const Block& b : g.blocks) {
    if (b.det_var < 0) continue;
    MP left = source_detinv_image(src.Y, g, b);
    ind.gens.push_back(ind.amb.ring.reduce(
        ind.amb.embed_left(left) * ind.amb.embed_right(MP::var(ng, b.det_var))));
    ind.gen_names.push_back("w" + g.ring.vars[b.det_var]);
  }

  // exact H-invariance of every generator
  const Coaction ch = induced_h_coaction(ind);
  for (size_t m = 0; m < ind.gens.size(); ++m)
    if (!ch.tr.ring.reduce(ch.coact(ind.gens[m]) - ch.tr.embed_left(ind.gens[m])).is_zero())
      fail(Errc::NotInvariant, "generator " + ind.gen_names[m] + " is not " + h.name + "-invariant");
  ind.audit.generators_invariant = true;

  // psi* = id (x) counit intertwines the G co-action restricted to H with
  // the source co-action
  {
    const Coaction rg = induced_right_translation(ind, g);
    std::vector<MP> eps(nz + ng);
    for (int v = 0; v < nz; ++v) eps[v] = MP::var(nz, v);
    for (int w = 0; w < ng; ++w) eps[nz + w] = MP::constant(nz, g.counit[w]);
    const auto& ytr = src.Y.rho.tr;
    std::vector<MP> down(nz + ng + ng);
    for (int v = 0; v < nz; ++v) down[v] = ytr.embed_left(MP::var(nz, v));
    for (int w = 0; w < ng; ++w) down[nz + w] = ytr.ring.constant(g.counit[w]);
    for (int w = 0; w < ng; ++w) down[nz + ng + w] = ytr.embed_right(sub_var_image(g, h, w));
    for (size_t m = 0; m < ind.gens.size(); ++m) {
      const MP below = substitute(ind.gens[m], eps, src.Y.ring);
      const MP lhs = ytr.ring.reduce(substitute(below, src.Y.rho.images, ytr.ring));
      const MP rhs = ytr.ring.reduce(substitute(rg.coact(ind.gens[m]), down, ytr.ring));
      if (!ytr.ring.reduce(lhs - rhs).is_zero())
        fail(Errc::NotInvariant,
             "inclusion fails to intertwine the co-actions on " + ind.gen_names[m]);
    }
  }
  ind.audit.inclusion_equivariant = true;

  ind.audit.source_derivation = derivation_well_defined(src.Y, src.diff).ok;
  if (!ind.audit.source_derivation)
    fail(Errc::NotInvariant, "equation matrix is not compatible with the source torsor");
  ind.audit.result_derivation = derivation_well_defined(ind.result, src.diff).ok;
  if (!ind.audit.result_derivation)
    fail(Errc::NotInvariant, "equation matrix is not compatible with the induced torsor");
  return ind;
}

InvariantBasis span_of_products(const Ring<Rational>& module,
                                const std::vector<MP>& gens, int deg) {
  InvariantBasis ib;
  ib.maxdeg = deg;
  ib.mons = module.basis_monomials(deg);
  const auto idx = index_monomials(ib.mons);
  std::vector<MP> pool{module.one()};
  std::set<std::string> seen{module.one().str(module.vars)};
  std::vector<MP> frontier = pool;
  for (int level = 0; level < deg && !frontier.empty(); ++level) {
    std::vector<MP> next;
    for (const auto& f : frontier)
      for (const auto& g : gens) {
        if (g.is_zero()) continue;
        MP p = module.reduce(f * g);
        if (p.is_zero() || p.degree() > deg) continue;
        if (!seen.insert(p.str(module.vars)).second) continue;
        pool.push_back(p);
        next.push_back(p);
      }
    frontier = std::move(next);
  }
  kernel::QMat rows;
  rows.reserve(pool.size());
  for (const auto& p : pool)
    rows.push_back(poly_row(p, idx, ib.mons.size(), "span_of_products"));
  kernel::rref(rows);
  strip_zero_rows(rows);
  ib.vecs = std::move(rows);
  for (const auto& r : ib.vecs) ib.elems.push_back(row_to_poly(r, ib.mons));
  return ib;
}

InvariantBasis invariants_of_span(const Coaction& c, const InvariantBasis& span) {
  const int nb = static_cast<int>(span.elems.size());
  std::map<Expo, int, GradedLexGreater> ridx;
  std::vector<std::vector<std::pair<int, Rational>>> cols(nb);
  for (int j = 0; j < nb; ++j) {
    const MP d = c.tr.ring.reduce(c.coact(span.elems[j]) - c.tr.embed_left(span.elems[j]));
    for (const auto& [e, q] : d.t) {
      auto it = ridx.emplace(e, static_cast<int>(ridx.size())).first;
      cols[j].emplace_back(it->second, q);
    }
  }
  kernel::QMat rows(std::max<size_t>(ridx.size(), 1), kernel::QVec(nb, Rational(0)));
  for (int j = 0; j < nb; ++j)
    for (const auto& [r, q] : cols[j]) rows[r][j] = q;
  const kernel::QMat null = kernel::nullspace(rows);
  InvariantBasis out;
  out.maxdeg = span.maxdeg;
  out.mons = span.mons;
  kernel::QMat vecs;
  for (const auto& lam : null) {
    kernel::QVec v(span.mons.size(), Rational(0));
    for (int j = 0; j < nb; ++j) {
      if (rat_is_zero(lam[j])) continue;
      for (size_t i = 0; i < v.size(); ++i) v[i] += lam[j] * span.vecs[j][i];
    }
    vecs.push_back(std::move(v));
  }
  kernel::rref(vecs);
  strip_zero_rows(vecs);
  out.vecs = std::move(vecs);
  for (const auto& r : out.vecs) out.elems.push_back(row_to_poly(r, out.mons));
  return out;
}

InvariantBasis basis_from_elems(const Ring<Rational>& module,
                                const std::vector<Expo>& mons,
                                const std::vector<MP>& elems, int deg) {
  InvariantBasis ib;
  ib.maxdeg = deg;
  ib.mons = mons;
  const auto idx = index_monomials(mons);
  kernel::QMat rows;
  rows.reserve(elems.size());
  for (const auto& p : elems)
    rows.push_back(poly_row(module.reduce(p), idx, mons.size(), "basis_from_elems"));
  kernel::rref(rows);
  strip_zero_rows(rows);
  ib.vecs = std::move(rows);
  for (const auto& r : ib.vecs) ib.elems.push_back(row_to_poly(r, mons));
  return ib;
}

bool induced_via_rho_is_identity(const InducedPresentation& ind) {
  if (!same_group_ideal(ind.source.grp, ind.G)) return false;
  const auto& ytr = ind.source.rho.tr;
  size_t m = 0;
  for (int i = 0; i < ind.G.n; ++i)
    for (int j = 0; j < ind.G.n; ++j, ++m) {
      const MP rho = ytr.ring.reduce(ind.source.rho.images[ind.source.z_index(i, j)]);
      if (!(ind.gens[m] == rho)) return false;
    }
  for (const Block& b : ind.G.blocks) {
    if (b.det_var < 0) continue;
    const MP rho = ytr.ring.reduce(ind.source.rho.images[b.det_var]);
    if (!(ind.gens[m] == rho)) return false;
    ++m;
  }
  return true;
}

bool induced_trivial_over_base(const InducedPresentation& ind) {
  const auto& a = ind.audit;
  return tag_for_atoms(ind.Z0.atoms) == FieldTag::F && a.z0_relations &&
         a.z0_invertible && a.z0_derivation && a.generators_invariant &&
         a.inclusion_equivariant && a.source_derivation && a.result_derivation;
}

EmbeddingSurjectivity canonical_embedding_surjective(const InducedPresentation& ind,
                                                     int deg, int degree_cap) {
  if (deg > degree_cap)
    fail(Errc::DegreeOverflow, "degree " + std::to_string(deg) + " exceeds the cap " +
                                   std::to_string(degree_cap));
  const int nz = ind.source.ring.nvars();
  const int ng = ind.G.ring.nvars();
  std::vector<MP> eps(nz + ng);
  for (int v = 0; v < nz; ++v) eps[v] = MP::var(nz, v);
  for (int w = 0; w < ng; ++w) eps[nz + w] = MP::constant(nz, ind.G.counit[w]);
  std::vector<MP> sgens;
  sgens.reserve(ind.gens.size());
  for (const auto& g : ind.gens)
    sgens.push_back(ind.source.ring.reduce(substitute(g, eps, ind.source.ring)));
  const InvariantBasis span = span_of_products(ind.source.ring, sgens, deg);
  EmbeddingSurjectivity out;
  for (size_t i = 0; i < span.mons.size(); ++i) {
    kernel::QVec unit(span.mons.size(), Rational(0));
    unit[i] = 1;
    if (!in_rowspace(span.vecs, std::move(unit))) {
      out.surjective = false;
      out.witness = MP::mono(span.mons[i], Rational(1)).str(ind.source.ring.vars);
      return out;
    }
  }
  out.surjective = true;
  return out;
}

Group last_factor_gm(const Group& g) {
  if (g.blocks.size() < 2)
    fail(Errc::BadInput, g.name + " is not a product presentation");
  const Block& last = g.blocks.back();
  if (last.rows.size() != 1 || last.det_var < 0)
    fail(Errc::BadInput, g.name + " does not end in a G_m block");
  const int nv = g.ring.nvars();
  const int dn = g.t_index(last.rows[0], last.rows[0]);
  std::vector<MP> gens;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const int v = g.t_index(i, j);
      if (v == dn) continue;
      MP p = MP::var(nv, v);
      if (i == j) p = p - MP::constant(nv, Rational(1));
      gens.push_back(std::move(p));
    }
  for (const Block& b : g.blocks)
    if (b.det_var >= 0 && b.det_var != last.det_var)
      gens.push_back(MP::var(nv, b.det_var) - MP::constant(nv, Rational(1)));
  gens.push_back(MP::var(nv, dn) * MP::var(nv, last.det_var) - MP::constant(nv, Rational(1)));
  Group h;
  h.name = g.name + ".gmfactor";
  h.n = g.n;
  h.ring = Ring<Rational>(g.ring.vars, std::move(gens));
  h.blocks = g.blocks;
  h.counit = g.counit;
  for (const auto& a : g.antipode) h.antipode.push_back(h.ring.reduce(a));
  for (const auto& pt : g.points) {
    bool on = true;
    for (const auto& gen : h.ring.gens)
      if (!rat_is_zero(mpoly_eval(gen, pt))) { on = false; break; }
    if (on) h.points.push_back(pt);
  }
  verify_hopf(h);
  return h;
}

namespace {

enum class QuotKind { Trivial, BorelTorus, LastGmFactor };

struct QuotCatalog {
  QuotKind kind;
  Group quot;
};

QuotCatalog quotient_catalog(const Group& g, const Group& n) {
  if (same_group_ideal(n, g)) return {QuotKind::Trivial, group_trivial(1)};
  if (g.name == "Borel" && same_group_ideal(n, group_ga_upper()))
    return {QuotKind::BorelTorus, group_torus_sl2()};
  if (g.blocks.size() == 2 && g.blocks.back().rows.size() == 1 &&
      g.blocks.back().det_var >= 0 && same_group_ideal(n, last_factor_gm(g))) {
    const auto cut = g.name.rfind('x');
    const std::string head = cut == std::string::npos ? "" : g.name.substr(0, cut);
    if (head == "Gm") return {QuotKind::LastGmFactor, group_gm()};
    if (head == "Ga+") return {QuotKind::LastGmFactor, group_ga_upper()};
    if (head == "Ga-") return {QuotKind::LastGmFactor, group_ga_lower()};
  }
  fail(Errc::NotNormal, "the pair (" + g.name + ", " + n.name +
                            ") is outside the quotient catalog");
}

}  // namespace

QuotientPresentation quotient_by_normal(const Torsor& x, const DiffStructure& d,
                                        const Group& n, int deg, int degree_cap) {
  if (deg > degree_cap)
    fail(Errc::DegreeOverflow, "degree " + std::to_string(deg) + " exceeds the cap " +
                                   std::to_string(degree_cap));
  const Group& g = x.grp;
  std::string why;
  if (n.n != g.n || !is_subgroup(n, g, &why))
    fail(Errc::BadInput, n.name + " is not an aligned subgroup of " + g.name +
                             (why.empty() ? "" : ": " + why));
  require_normal(g, n);

  const QuotCatalog cat = quotient_catalog(g, n);
  QuotientPresentation qp;
  qp.source = x;
  qp.N = n;
  qp.quot = cat.quot;
  qp.result = make_trivial_torsor(cat.quot, x.base);

  const int nx = x.ring.nvars();
  const int ngv = g.ring.nvars();
  const int nr = qp.result.ring.nvars();
  qp.var_images.assign(nr, MP());
  qp.quot_t_images.assign(nr, MP());
  qp.diff.A = RMat(cat.quot.n);
  switch (cat.kind) {
    case QuotKind::Trivial:
      for (int v = 0; v < nr; ++v) {
        qp.var_images[v] = x.ring.one();
        qp.quot_t_images[v] = g.ring.one();
      }
      break;
    case QuotKind::BorelTorus:
      qp.var_images[qp.result.z_index(0, 0)] = MP::var(nx, x.z_index(0, 0));
      qp.var_images[qp.result.z_index(1, 1)] = MP::var(nx, x.z_index(1, 1));
      qp.quot_t_images[cat.quot.t_index(0, 0)] = MP::var(ngv, g.t_index(0, 0));
      qp.quot_t_images[cat.quot.t_index(1, 1)] = MP::var(ngv, g.t_index(1, 1));
      qp.diff.A.at(0, 0) = d.A.at(0, 0);
      qp.diff.A.at(1, 1) = d.A.at(1, 1);
      break;
    case QuotKind::LastGmFactor: {
      const int m = cat.quot.n;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          qp.var_images[qp.result.z_index(i, j)] = MP::var(nx, x.z_index(i, j));
          qp.quot_t_images[cat.quot.t_index(i, j)] = MP::var(ngv, g.t_index(i, j));
          qp.diff.A.at(i, j) = d.A.at(i, j);
        }
      for (const Block& b : cat.quot.blocks) {
        if (b.det_var < 0) continue;
        const int src_det = g.blocks[0].det_var;
        if (src_det < 0) fail(Errc::BadInput, "first factor carries no det inverse");
        qp.var_images[b.det_var] = MP::var(nx, src_det);
        qp.quot_t_images[b.det_var] = MP::var(ngv, src_det);
      }
      break;
    }
  }
  for (const auto& f : qp.var_images)
    if (f.degree() > 0) qp.inv_gens.push_back(f);

  // every image is an exact N-invariant
  const Coaction cn = torsor_restriction(x, n);
  for (int v = 0; v < nr; ++v) {
    const MP diff = cn.tr.ring.reduce(cn.coact(qp.var_images[v]) -
                                      cn.tr.embed_left(qp.var_images[v]));
    if (!diff.is_zero())
      fail(Errc::GeneratorAuditFailed, "quotient coordinate " + qp.result.ring.vars[v] +
                                           " is not " + n.name + "-invariant");
  }
  qp.audit.invariant = true;

  // the quotient relations vanish on the images
  for (const auto& rel : qp.result.ring.gens)
    if (!x.ring.reduce(substitute(rel, qp.var_images, x.ring)).is_zero())
      fail(Errc::GeneratorAuditFailed, "quotient relation " +
                                           rel.str(qp.result.ring.vars) +
                                           " does not vanish on the images");
  qp.audit.relations = true;

  // the images generate the bounded invariants
  {
    const InvariantBasis inv = invariants_bounded(cn, deg, degree_cap);
    const InvariantBasis gen = span_of_products(x.ring, qp.inv_gens, deg);
    if (!spans_equal(inv, gen))
      fail(Errc::GeneratorAuditFailed,
           "images fail to generate the bounded invariants at degree " + std::to_string(deg));
  }
  qp.audit.generate = true;
  qp.audit.checked_deg = deg;

  // the source co-action restricts to the quotient co-action on the images
  {
    const auto& xtr = x.rho.tr;
    std::vector<MP> comb(2 * nr);
    for (int v = 0; v < nr; ++v) comb[v] = xtr.embed_left(qp.var_images[v]);
    for (int u = 0; u < nr; ++u) comb[nr + u] = xtr.embed_right(qp.quot_t_images[u]);
    for (int v = 0; v < nr; ++v) {
      const MP lhs = xtr.ring.reduce(x.rho.coact(qp.var_images[v]));
      const MP rhs = xtr.ring.reduce(substitute(qp.result.rho.images[v], comb, xtr.ring));
      if (!xtr.ring.reduce(lhs - rhs).is_zero())
        fail(Errc::GeneratorAuditFailed, "co-action does not restrict on " +
                                             qp.result.ring.vars[v]);
    }
  }
  qp.audit.coaction_restricts = true;

  // differential structure: transport certifies closure, and the images
  // satisfy the quotient fundamental form entry by entry
  qp.transported = transport_derivation(x, d, qp.var_images);
  {
    const auto lg = lifted_gens(x.ring);
    const int m = cat.quot.n;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        BMPoly lhs = torsor_derive(x, d, lift_coeffs(qp.var_images[qp.result.z_index(i, j)]));
        BMPoly rhs;
        for (int k = 0; k < m; ++k) {
          if (qp.diff.A.at(i, k).is_zero()) continue;
          rhs = rhs + lift_coeffs(qp.var_images[qp.result.z_index(k, j)])
                          .scale(qp.diff.A.at(i, k));
        }
        if (!reduce_by(lhs - rhs, lg).is_zero())
          fail(Errc::GeneratorAuditFailed,
               "quotient equation fails at entry (" + std::to_string(i + 1) + "," +
                   std::to_string(j + 1) + ")");
      }
    BiRat tr;
    for (int i = 0; i < m; ++i) tr = tr + qp.diff.A.at(i, i);
    for (const Block& b : cat.quot.blocks) {
      if (b.det_var < 0) continue;
      BMPoly lhs = torsor_derive(x, d, lift_coeffs(qp.var_images[b.det_var]));
      BMPoly rhs = lift_coeffs(qp.var_images[b.det_var]).scale(-tr);
      if (!reduce_by(lhs - rhs, lg).is_zero())
        fail(Errc::GeneratorAuditFailed, "quotient equation fails on the det inverse");
    }
    if (!derivation_well_defined(qp.result, qp.diff).ok)
      fail(Errc::GeneratorAuditFailed, "quotient equation is not well defined");
  }
  qp.audit.derivation = true;
  return qp;
}

bool quotient_universal_property(const QuotientPresentation& qp, int deg,
                                 int degree_cap) {
  const auto mons_q = qp.result.ring.basis_monomials(deg);
  std::vector<MP> images;
  images.reserve(mons_q.size());
  for (const auto& e : mons_q)
    images.push_back(qp.source.ring.reduce(
        substitute(MP::mono(e, Rational(1)), qp.var_images, qp.source.ring)));
  const auto xmons = qp.source.ring.basis_monomials(deg);
  const InvariantBasis img = basis_from_elems(qp.source.ring, xmons, images, deg);
  const bool injective = img.vecs.size() == mons_q.size();
  const Coaction cn = torsor_restriction(qp.source, qp.N);
  const InvariantBasis inv = invariants_bounded(cn, deg, degree_cap);
  return injective && spans_equal(img, inv);
}

IndIdentityReport verify_ind_identities(const SemidirectData& sd,
                                        const PresentedTorsor& rn,
                                        const PresentedTorsor& rh,
                                        const PresentedTorsor& rg, int deg,
                                        const SeriesCtx& ctx, int degree_cap) {
  if (deg > degree_cap)
    fail(Errc::DegreeOverflow, "degree " + std::to_string(deg) + " exceeds the cap " +
                                   std::to_string(degree_cap));
  if (!same_group_ideal(rn.Y.grp, sd.N) || !same_group_ideal(rh.Y.grp, sd.H) ||
      !same_group_ideal(rg.Y.grp, sd.G))
    fail(Errc::BadInput, "fixture torsors do not match the semidirect pair");
  IndIdentityReport rep;
  rep.deg = deg;

  // (Ind_N^G R)^N = 1 (x) K[G]^N
  {
    const InducedPresentation ind = induce(rn, sd.G, ctx);
    const InvariantBasis wspan = span_of_products(ind.amb.ring, ind.gens, deg);
    const InvariantBasis lhs =
        invariants_of_span(induced_right_translation(ind, sd.N), wspan);
    const InvariantBasis hb = invariants_bounded(subgroup_restriction(sd.G, sd.N), deg, degree_cap);
    std::vector<MP> emb;
    emb.reserve(hb.elems.size());
    for (const auto& f : hb.elems)
      emb.push_back(ind.amb.ring.reduce(ind.amb.embed_right(f)));
    const InvariantBasis rhs = basis_from_elems(ind.amb.ring, wspan.mons, emb, deg);
    rep.n_invariants_match_h = spans_equal(lhs, rhs);
    if (!rep.n_invariants_match_h) rep.detail += "N-side span mismatch; ";
  }

  // (Ind_H^G R)^N is a copy of R through rho with the H leg inside K[G]
  {
    const InducedPresentation ind = induce(rh, sd.G, ctx);
    const InvariantBasis wspan = span_of_products(ind.amb.ring, ind.gens, deg);
    const InvariantBasis lhs =
        invariants_of_span(induced_right_translation(ind, sd.N), wspan);
    const int nz = rh.Y.ring.nvars();
    const int nh = sd.H.ring.nvars();
    const int mv = sd.N.ring.nvars();
    std::vector<MP> phi(nz + nh);
    for (int v = 0; v < nz; ++v) phi[v] = ind.amb.embed_left(MP::var(nz, v));
    for (int u = 0; u < nh; ++u)
      phi[nz + u] = ind.amb.ring.reduce(
          substitute(sd.nh_to_g[mv + u],
                     [&] {
                       std::vector<MP> emb;
                       const int gnv = sd.G.ring.nvars();
                       const int anv = ind.amb.ring.nvars();
                       emb.reserve(gnv);
                       for (int w = 0; w < gnv; ++w)
                         emb.push_back(MP::var(anv, nz + w));
                       return emb;
                     }(),
                     ind.amb.ring));
    std::vector<MP> images;
    const auto rmons = rh.Y.ring.basis_monomials(deg / 2);
    for (const auto& e : rmons) {
      const MP rho_m =
          substitute(MP::mono(e, Rational(1)), rh.Y.rho.images, rh.Y.rho.tr.ring);
      images.push_back(ind.amb.ring.reduce(substitute(rho_m, phi, ind.amb.ring)));
    }
    const InvariantBasis rhs = basis_from_elems(ind.amb.ring, wspan.mons, images, deg);
    const bool injective = rhs.vecs.size() == rmons.size();
    rep.h_invariants_match_r = injective && spans_equal(lhs, rhs);
    if (!rep.h_invariants_match_r) rep.detail += "H-side span mismatch; ";
  }

  // Ind_G^G reduces to the N-invariants of R itself
  {
    const InducedPresentation ind = induce(rg, sd.G, ctx);
    const InvariantBasis wspan = span_of_products(ind.amb.ring, ind.gens, deg);
    const InvariantBasis lhs =
        invariants_of_span(induced_right_translation(ind, sd.N), wspan);
    const InvariantBasis rinv =
        invariants_bounded(torsor_restriction(rg.Y, sd.N), deg / 2, degree_cap);
    std::vector<MP> images;
    images.reserve(rinv.elems.size());
    for (const auto& f : rinv.elems)
      images.push_back(ind.amb.ring.reduce(
          substitute(f, rg.Y.rho.images, ind.amb.ring)));
    const InvariantBasis rhs = basis_from_elems(ind.amb.ring, wspan.mons, images, deg);
    rep.full_group_case = spans_equal(lhs, rhs);
    if (!rep.full_group_case) rep.detail += "full-group span mismatch; ";
  }
  if (rep.detail.empty()) rep.detail = "all identities hold at degree " + std::to_string(deg);
  return rep;
}

StableIdealsReport nstable_ideals_meet_invariants(int deg, int degree_cap) {
  const Torsor x = make_trivial_torsor(group_borel_sl2(), FieldTag::F);
  const Group n = group_ga_upper();
  const Coaction cn = torsor_restriction(x, n);
  const auto& r = x.ring;
  const MP z11 = r.var("z11"), z12 = r.var("z12"), z22 = r.var("z22");
  const std::vector<std::pair<std::string, std::vector<MP>>> family = {
      {"(z11)", {z11}},
      {"(z22)", {z22}},
      {"(z11^2)", {r.reduce(z11 * z11)}},
      {"(z22^2)", {r.reduce(z22 * z22)}},
      {"(z11 - z22)", {z11 - z22}},
      {"(z11 + z22)", {z11 + z22}},
      {"(z11, z12)", {z11, z12}},
      {"(z11^2, z11*z12)", {r.reduce(z11 * z11), r.reduce(z11 * z12)}},
  };
  const InvariantBasis inv = invariants_bounded(cn, deg, degree_cap);
  const auto mons = r.basis_monomials(deg);
  const auto idx = index_monomials(mons);
  StableIdealsReport rep;
  rep.all_meet_invariants = true;
  for (const auto& [name, jgens] : family) {
    const StabilityReport st = check_ideal_stable(jgens, cn, {}, degree_cap);
    if (!st.certified)
      fail(Errc::GeneratorAuditFailed,
           "fixture ideal " + name + " failed its stability certificate: " + st.detail);
    kernel::QMat jrows;
    for (const auto& gj : jgens) {
      const int room = deg - gj.degree();
      for (const auto& e : r.basis_monomials(std::max(room, 0))) {
        const MP p = r.reduce(MP::mono(e, Rational(1)) * gj);
        if (p.is_zero() || p.degree() > deg) continue;
        jrows.push_back(poly_row(p, idx, mons.size(), "stable ideal piece"));
      }
    }
    kernel::QMat stacked = jrows;
    for (const auto& v : inv.vecs) stacked.push_back(v);
    const bool meets = rank_of(jrows) + rank_of(inv.vecs) > rank_of(stacked);
    rep.detail += name + (meets ? " meets; " : " misses; ");
    if (!meets) rep.all_meet_invariants = false;
    ++rep.ideals_checked;
  }
  return rep;
}

GaloisAlgebra GaloisAlgebra::ground_field() {
  GaloisAlgebra l;
  l.dim = 1;
  l.mul = {{{Rational(1)}}};
  l.unit = {Rational(1)};
  l.action = {{{Rational(1)}}};
  return l;
}

GaloisAlgebra GaloisAlgebra::quadratic(const Rational& a) {
  GaloisAlgebra l;
  l.dim = 2;
  l.mul.assign(2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2, Rational(0))));
  l.mul[0][0] = {Rational(1), Rational(0)};
  l.mul[0][1] = {Rational(0), Rational(1)};
  l.mul[1][0] = {Rational(0), Rational(1)};
  l.mul[1][1] = {a, Rational(0)};
  l.unit = {Rational(1), Rational(0)};
  l.action = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
              {{Rational(1), Rational(0)}, {Rational(0), Rational(-1)}}};
  return l;
}

GaloisInductionReport induce_finite_galois(const GaloisAlgebra& l, const Group& gfin,
                                           const Group& hfin) {
  const int kg = finite_order(gfin);
  const int kh = finite_order(hfin);
  if (kg % kh != 0)
    fail(Errc::BadInput, "subgroup order must divide the group order");
  if (kh > 1) {
    std::string why;
    if (!is_subgroup(hfin, gfin, &why))
      fail(Errc::BadInput, hfin.name + " is not a subgroup of " + gfin.name +
                               (why.empty() ? "" : ": " + why));
  }
  audit_galois_algebra(l, kh);

  const int step = kg / kh;  // index of H, and the coset count
  const int dl = l.dim;
  const int dim = step * dl;
  GaloisInductionReport rep;
  rep.dim = dim;
  rep.cosets = step;

  GaloisAlgebra ind;
  ind.dim = dim;
  ind.mul.assign(dim, std::vector<std::vector<Rational>>(dim, std::vector<Rational>(dim, Rational(0))));
  ind.unit.assign(dim, Rational(0));
  auto bix = [&](int r, int i) { return r * dl + i; };
  for (int r = 0; r < step; ++r) {
    for (int i = 0; i < dl; ++i)
      for (int j = 0; j < dl; ++j)
        for (int k = 0; k < dl; ++k)
          ind.mul[bix(r, i)][bix(r, j)][bix(r, k)] = l.mul[i][j][k];
    for (int i = 0; i < dl; ++i) ind.unit[bix(r, i)] = l.unit[i];
  }
  ind.action.assign(kg, kernel::QMat(dim, kernel::QVec(dim, Rational(0))));
  for (int gp = 0; gp < kg; ++gp)
    for (int r = 0; r < step; ++r) {
      const int rr = ((r - gp) % kg + kg) % kg % step;
      const int h1 = ((rr + gp - r) % kg + kg) % kg;
      const int q = (h1 / step) % kh;
      for (int i = 0; i < dl; ++i)
        for (int j = 0; j < dl; ++j)
          ind.action[gp][bix(r, i)][bix(rr, j)] = l.action[q][i][j];
    }
  for (int a = 0; a < kg; ++a)
    for (int b = 0; b < kg; ++b)
      if (qmat_mul(ind.action[a], ind.action[b]) != ind.action[(a + b) % kg])
        fail(Errc::BadAction, "induced action table is not a group homomorphism");

  // compare with H-equivariant vectors in L (x) K^G: c[(g+step) mod kg] is
  // the generator image of c[g]
  {
    kernel::QMat rows;
    const int tot = kg * dl;
    for (int gp = 0; gp < kg; ++gp)
      for (int j = 0; j < dl; ++j) {
        kernel::QVec row(tot, Rational(0));
        row[((gp + step) % kg) * dl + j] += 1;
        for (int i = 0; i < dl; ++i) row[gp * dl + i] -= l.action[1 % kh][i][j];
        rows.push_back(std::move(row));
      }
    const kernel::QMat null = kernel::nullspace(rows);
    kernel::QMat basis;
    for (int r = 0; r < step; ++r)
      for (int i = 0; i < dl; ++i) {
        kernel::QVec v(tot, Rational(0));
        for (int m = 0; m < kh; ++m)
          for (int j = 0; j < dl; ++j)
            v[((m * step + r) % kg) * dl + j] = l.action[m][i][j];
        basis.push_back(std::move(v));
      }
    kernel::QMat a = null, b = basis;
    kernel::rref(a);
    kernel::rref(b);
    strip_zero_rows(a);
    strip_zero_rows(b);
    rep.matches_tensor_invariants = a == b && static_cast<int>(b.size()) == dim;
  }

  // Galois: the full translation action fixes only the scalars
  {
    kernel::QMat rows;
    for (int j = 0; j < dim; ++j) {
      kernel::QVec row(dim, Rational(0));
      for (int i = 0; i < dim; ++i) {
        row[i] = ind.action[1 % kg][i][j];
        if (i == j) row[i] -= 1;
      }
      rows.push_back(std::move(row));
    }
    kernel::QMat fixed = kernel::nullspace(rows);
    kernel::rref(fixed);
    strip_zero_rows(fixed);
    rep.galois = fixed.size() == 1 && in_rowspace(fixed, ind.unit);
  }
  rep.induced = std::move(ind);
  return rep;
}

Json induced_json(const InducedPresentation& ind) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "induced_presentation";
  j["group"] = ind.G.name;
  j["subgroup"] = ind.source.grp.name;
  j["base"] = tag_name(ind.source.base);
  j["overfield"] = tag_name(ind.Z0.tag);
  j["z0"] = smat_json(ind.Z0.m);
  j["equation"] = rmat_json(ind.diff.A);
  Json gens = Json::array();
  for (size_t i = 0; i < ind.gens.size(); ++i) {
    Json e;
    e["name"] = ind.gen_names[i];
    e["expr"] = ind.gens[i].str(ind.amb.ring.vars);
    gens.push_back(std::move(e));
  }
  j["generators"] = std::move(gens);
  Json a;
  a["z0_relations"] = ind.audit.z0_relations;
  a["z0_invertible"] = ind.audit.z0_invertible;
  a["z0_derivation"] = ind.audit.z0_derivation;
  a["generators_invariant"] = ind.audit.generators_invariant;
  a["inclusion_equivariant"] = ind.audit.inclusion_equivariant;
  a["source_derivation"] = ind.audit.source_derivation;
  a["result_derivation"] = ind.audit.result_derivation;
  j["audit"] = std::move(a);
  return j;
}

Json quotient_json(const QuotientPresentation& qp) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "quotient_presentation";
  j["group"] = qp.source.grp.name;
  j["normal"] = qp.N.name;
  j["quotient"] = qp.quot.name;
  j["base"] = tag_name(qp.source.base);
  Json imgs = Json::array();
  for (size_t v = 0; v < qp.var_images.size(); ++v) {
    Json e;
    e["name"] = qp.result.ring.vars[v];
    e["expr"] = qp.var_images[v].str(qp.source.ring.vars);
    imgs.push_back(std::move(e));
  }
  j["coordinates"] = std::move(imgs);
  j["equation"] = rmat_json(qp.diff.A);
  Json a;
  a["invariant"] = qp.audit.invariant;
  a["relations"] = qp.audit.relations;
  a["generate"] = qp.audit.generate;
  a["coaction_restricts"] = qp.audit.coaction_restricts;
  a["derivation"] = qp.audit.derivation;
  a["checked_deg"] = qp.audit.checked_deg;
  j["audit"] = std::move(a);
  return j;
}

}  // namespace pvp
