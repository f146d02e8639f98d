#include "pvpatch/torsor.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pvpatch/kernel.hpp"

namespace pvp {
namespace {

using MP = MPoly<Rational>;
using BRing = Ring<BiRat>;

std::string torsor_var_name(const Group& g, int v) {
  const std::string& nm = g.ring.vars[v];
  if (v < g.n * g.n) return "z" + nm.substr(1);
  return "z" + nm;
}

// per-variable derivative images for delta(Z) = A Z; det-inverse variables
// follow delta(D_b) = -tr(A_b) D_b on their block
std::vector<BMPoly> derivative_images(const Torsor& X, const DiffStructure& d) {
  const Group& g = X.grp;
  const int nv = X.ring.nvars();
  std::vector<BMPoly> D(nv);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      BMPoly acc;
      for (int k = 0; k < g.n; ++k) {
        const BiRat& a = d.A.at(i, k);
        if (a.is_zero()) continue;
        acc.add_term(MP::var(nv, X.z_index(k, j)).lead_expo(), a);
      }
      D[X.z_index(i, j)] = acc;
    }
  for (const Block& b : g.blocks) {
    if (b.det_var < 0) continue;
    BiRat tr;
    for (int r : b.rows) tr = tr + d.A.at(r, r);
    D[b.det_var] = BMPoly::mono(MP::var(nv, b.det_var).lead_expo(), -tr);
  }
  return D;
}

// Leibniz extension of the variable images plus d/dx on coefficients
BMPoly leibniz(const BMPoly& f, const std::vector<BMPoly>& D) {
  BMPoly out;
  for (const auto& [e, c] : f.t) {
    out.add_term(e, c.derive());
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      Expo e2 = e;
      --e2[v];
      const BiRat fac = c * BiRat::constant(Rational(e[v]));
      out = out + BMPoly::mono(std::move(e2), fac) * D[v];
    }
  }
  return out;
}

std::vector<BMPoly> lift_gens(const Ring<Rational>& r) {
  std::vector<BMPoly> out;
  out.reserve(r.gens.size());
  for (const auto& g : r.gens) out.push_back(lift_coeffs(g));
  return out;
}

// sparse elimination expects each row sorted by column with unique entries
kernel::SparseRow merge_sparse_row(kernel::SparseRow r) {
  std::sort(r.begin(), r.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  kernel::SparseRow out;
  for (auto& [c, q] : r) {
    if (!out.empty() && out.back().first == c)
      out.back().second += q;
    else
      out.emplace_back(c, std::move(q));
  }
  std::erase_if(out, [](const auto& e) { return rat_is_zero(e.second); });
  return out;
}

std::string mon_str(const Expo& e, const std::vector<std::string>& vars) {
  if (expo_deg(e) == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << vars[i];
    if (e[i] != 1) os << "^" << e[i];
  }
  return os.str();
}

} // namespace

Torsor make_trivial_torsor(const Group& g, FieldTag base) {
  Torsor X;
  X.grp = g;
  X.base = base;
  std::vector<std::string> zv;
  zv.reserve(g.ring.nvars());
  for (int v = 0; v < g.ring.nvars(); ++v) zv.push_back(torsor_var_name(g, v));
  X.ring = Ring<Rational>(std::move(zv), g.ring.gens);

  X.rho.module = X.ring;
  X.rho.grp = g;
  X.rho.tr = tensor_ring(X.ring, g.ring, "", "");
  const int nv = g.ring.nvars();
  X.rho.images.resize(nv);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int k = 0; k < g.n; ++k)
        acc = acc + X.rho.tr.embed_left(MP::var(nv, X.z_index(i, k))) *
                        X.rho.tr.embed_right(g.tvar(k, j));
      X.rho.images[X.z_index(i, j)] = acc;
    }
  for (const Block& b : g.blocks) {
    if (b.det_var < 0) continue;
    X.rho.images[b.det_var] = X.rho.tr.embed_left(MP::var(nv, b.det_var)) *
                              X.rho.tr.embed_right(MP::var(nv, b.det_var));
  }
  verify_coaction(X.rho);
  verify_torsor_axiom(X);
  return X;
}

void verify_torsor_axiom(const Torsor& X) {
  const Group& g = X.grp;
  const auto& tr = X.rho.tr;
  const int nv = g.ring.nvars();
  // the antipode polynomials reinterpreted over the z-variables are Z^{-1}
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int i = 0; i < g.n; ++i)
        acc = acc + tr.embed_left(g.antipode[g.t_index(k, i)]) * X.rho.images[X.z_index(i, j)];
      acc = tr.ring.reduce(acc - tr.embed_right(g.tvar(k, j)));
      if (!acc.is_zero())
        fail(Errc::BadAction, X.grp.name + " torsor: contraction of rho(Z) by Z^-1 leaves " +
                                  acc.str(tr.ring.vars) + " at entry (" + std::to_string(k) +
                                  "," + std::to_string(j) + ")");
    }
  for (const Block& b : g.blocks) {
    if (b.det_var < 0) continue;
    MP acc = tr.embed_left(g.antipode[b.det_var]) * X.rho.images[b.det_var];
    acc = tr.ring.reduce(acc - tr.embed_right(MP::var(nv, b.det_var)));
    if (!acc.is_zero())
      fail(Errc::BadAction, X.grp.name + " torsor: det-inverse contraction leaves " +
                                acc.str(tr.ring.vars));
  }
}

BMPoly torsor_derive(const Torsor& X, const DiffStructure& d, const BMPoly& f) {
  const auto D = derivative_images(X, d);
  return reduce_by(leibniz(f, D), lift_gens(X.ring));
}

WellDefCertificate derivation_well_defined(const Torsor& X, const DiffStructure& d) {
  if (d.A.n != X.grp.n)
    fail(Errc::BadInput, "equation matrix size does not match the group");
  WellDefCertificate cert;
  const auto D = derivative_images(X, d);
  const auto zgens = lift_gens(X.ring);
  for (const auto& gen : X.ring.gens) {
    const BMPoly r = reduce_by(leibniz(lift_coeffs(gen), D), zgens);
    if (!r.is_zero()) {
      cert.ok = false;
      cert.detail = "delta(" + gen.str(X.ring.vars) + ") has residue " + r.str(X.ring.vars) +
                    " outside the relations ideal";
      return cert;
    }
  }
  // co-action compatibility: extend delta to the tensor ring with the group
  // leg constant and compare rho(delta(v)) with delta(rho(v))
  const auto& tr = X.rho.tr;
  const int zn = X.ring.nvars();
  const int tn = tr.ring.nvars();
  std::vector<BMPoly> Dt(tn);
  for (int v = 0; v < zn; ++v) {
    BMPoly w;
    for (const auto& [e, c] : D[v].t) {
      Expo ee(tn, 0);
      std::copy(e.begin(), e.end(), ee.begin());
      w.add_term(std::move(ee), c);
    }
    Dt[v] = w;
  }
  const auto tgens = lift_gens(tr.ring);
  std::vector<BMPoly> rho_lift(zn);
  for (int v = 0; v < zn; ++v) rho_lift[v] = lift_coeffs(X.rho.images[v]);
  BRing target(tr.ring.vars, tgens);
  for (int v = 0; v < zn; ++v) {
    const BMPoly lhs = reduce_by(leibniz(lift_coeffs(X.rho.images[v]), Dt), tgens);
    const BMPoly rhs = substitute(reduce_by(leibniz(BMPoly::var(zn, v), D), zgens), rho_lift,
                                  target);
    if (lhs != rhs) {
      cert.ok = false;
      cert.detail = "co-action does not commute with delta on " + X.ring.vars[v];
      return cert;
    }
  }
  return cert;
}

DiffStructure rescale_derivation(const DiffStructure& d, const BiRat& a) {
  if (a.is_zero()) fail(Errc::ZeroScalar, "cannot rescale a derivation by zero");
  DiffStructure out;
  out.A = RMat(d.A.n);
  for (int i = 0; i < d.A.n; ++i)
    for (int j = 0; j < d.A.n; ++j) out.A.at(i, j) = a * d.A.at(i, j);
  return out;
}

ConstantsReport constants_bounded(const Torsor& X, const DiffStructure& d, int maxdeg,
                                  const Bounds& b, int degree_cap) {
  if (maxdeg > degree_cap)
    fail(Errc::DegreeOverflow, "constants search at degree " + std::to_string(maxdeg) +
                                   " exceeds the configured cap " + std::to_string(degree_cap));
  ConstantsReport rep;
  rep.maxdeg = maxdeg;
  rep.bounds = b;

  const auto mons = X.ring.basis_monomials(maxdeg);
  const int nm = static_cast<int>(mons.size());
  std::map<Expo, int, GradedLexGreater> midx;
  for (int i = 0; i < nm; ++i) midx.emplace(mons[i], i);

  const auto D = derivative_images(X, d);
  const auto zgens = lift_gens(X.ring);
  // conn[src] = reduced coordinates of delta(mons[src])
  std::vector<std::vector<std::pair<int, BiRat>>> conn(nm);
  BiPoly D0 = BiPoly::one();
  for (int s = 0; s < nm; ++s) {
    const BMPoly dm = reduce_by(leibniz(BMPoly::mono(mons[s], BiRat::constant(1)), D), zgens);
    for (const auto& [e, c] : dm.t) {
      auto it = midx.find(e);
      if (it == midx.end())
        fail(Errc::DegreeOverflow, "derivative of a basis monomial left the degree window");
      conn[s].emplace_back(it->second, c);
      const BiPoly g = bipoly_gcd(D0, c.den);
      D0 = D0 * bipoly_div_exact(c.den, g);
    }
  }
  const BiPoly D0p = D0.derive_x();

  // unknowns: coefficients of P_m, deg_t <= dtn, deg_x <= dxn; c_m = P_m / D0
  const int pt = b.dtn + 1;
  const int px = b.dxn + 1;
  const int per = pt * px;
  auto col = [&](int m, int dt, int dx) { return m * per + dt * px + dx; };

  // equation rows are indexed by (target monomial, t-degree, x-degree) of the
  // polynomial identity P_m' D0 - P_m D0' + sum_src q_src N_src P_src = 0
  std::map<std::tuple<int, int, int>, kernel::SparseRow> rows;
  auto add = [&](int m, int te, int xe, int c, const Rational& q) {
    if (rat_is_zero(q)) return;
    rows[{m, te, xe}].emplace_back(c, q);
  };
  auto add_poly_times_unknowns = [&](int m, const BiPoly& f, int src, int sign_dx_shift,
                                     bool x_derive) {
    // contribution of f * (P_src or P_src') to equation group m
    for (int te = 0; te <= f.deg_t(); ++te) {
      const Poly fx = f.coeff_t(te);
      for (int xe = 0; xe <= fx.deg(); ++xe) {
        const Rational& q = fx.c[xe];
        if (rat_is_zero(q)) continue;
        for (int dt = 0; dt < pt; ++dt)
          for (int dx = 0; dx < px; ++dx) {
            if (x_derive) {
              if (dx == 0) continue;
              add(m, te + dt, xe + dx - 1, col(src, dt, dx), q * Rational(dx));
            } else {
              add(m, te + dt, xe + dx + sign_dx_shift, col(src, dt, dx), q);
            }
          }
      }
    }
  };
  for (int m = 0; m < nm; ++m) {
    add_poly_times_unknowns(m, D0, m, 0, true);
    if (!D0p.is_zero()) {
      BiPoly neg = D0p * Rational(-1);
      add_poly_times_unknowns(m, neg, m, 0, false);
    }
  }
  for (int s = 0; s < nm; ++s)
    for (const auto& [m, L] : conn[s]) {
      const BiPoly q = bipoly_div_exact(D0, L.den);
      add_poly_times_unknowns(m, L.num * q, s, 0, false);
    }

  std::vector<kernel::SparseRow> sys;
  sys.reserve(rows.size());
  for (auto& [k, r] : rows) {
    auto merged = merge_sparse_row(std::move(r));
    if (!merged.empty()) sys.push_back(std::move(merged));
  }
  const auto basis = kernel::sparse_nullspace(std::move(sys), nm * per);
  rep.dim = static_cast<int>(basis.size());

  // solutions supported on the unit monomial alone are the base constants:
  // they satisfy the system iff delta(P/D0) = 0
  {
    std::map<std::pair<int, int>, kernel::SparseRow> r0;
    auto add0 = [&](int te, int xe, int c, const Rational& q) {
      if (!rat_is_zero(q)) r0[{te, xe}].emplace_back(c, q);
    };
    for (int te = 0; te <= D0.deg_t(); ++te) {
      const Poly fx = D0.coeff_t(te);
      for (int xe = 0; xe <= fx.deg(); ++xe)
        for (int dt = 0; dt < pt; ++dt)
          for (int dx = 1; dx < px; ++dx)
            add0(te + dt, xe + dx - 1, dt * px + dx, fx.c[xe] * Rational(dx));
    }
    for (int te = 0; te <= D0p.deg_t(); ++te) {
      const Poly fx = D0p.coeff_t(te);
      for (int xe = 0; xe <= fx.deg(); ++xe)
        for (int dt = 0; dt < pt; ++dt)
          for (int dx = 0; dx < px; ++dx)
            add0(te + dt, xe + dx, dt * px + dx, -fx.c[xe]);
    }
    std::vector<kernel::SparseRow> s0;
    for (auto& [k, r] : r0) {
      auto merged = merge_sparse_row(std::move(r));
      if (!merged.empty()) s0.push_back(std::move(merged));
    }
    rep.base_dim = static_cast<int>(kernel::sparse_nullspace(std::move(s0), per).size());
  }
  rep.new_constants = rep.dim > rep.base_dim;
  rep.denominator = BiRat::from(D0).str();

  for (const auto& vec : basis) {
    std::ostringstream os;
    bool first = true;
    for (int m = 0; m < nm; ++m) {
      BiPoly P;
      std::vector<Poly> tc(pt);
      for (int dt = 0; dt < pt; ++dt) {
        std::vector<Rational> cs(px, Rational(0));
        for (int dx = 0; dx < px; ++dx) cs[dx] = vec[col(m, dt, dx)];
        tc[dt] = Poly(cs);
      }
      P = BiPoly(tc);
      if (P.is_zero()) continue;
      const BiRat cm(P, D0);
      if (!first) os << " + ";
      first = false;
      os << "(" << cm.str() << ")*" << mon_str(mons[m], X.ring.vars);
    }
    rep.basis.push_back(first ? "0" : os.str());
  }
  return rep;
}

TransportResult transport_derivation(const Torsor& X, const DiffStructure& d,
                                     const std::vector<MPoly<Rational>>& exprs) {
  const int ne = static_cast<int>(exprs.size());
  std::vector<MP> red(ne);
  std::map<Expo, int, GradedLexGreater> cidx;
  for (int i = 0; i < ne; ++i) {
    red[i] = X.ring.reduce(exprs[i]);
    for (const auto& [e, c] : red[i].t) cidx.emplace(e, 0);
  }
  int nc = 0;
  for (auto& [e, i] : cidx) i = nc++;

  const auto D = derivative_images(X, d);
  const auto zgens = lift_gens(X.ring);

  TransportResult out;
  out.B.assign(ne, std::vector<BiRat>(ne, BiRat()));
  for (int i = 0; i < ne; ++i) {
    const BMPoly di = reduce_by(leibniz(lift_coeffs(red[i]), D), zgens);
    // solve sum_j beta_j red[j] = di coordinatewise; the coordinate matrix is
    // rational, the right side lives in the base field
    std::vector<std::vector<Rational>> M(nc, std::vector<Rational>(ne, Rational(0)));
    std::vector<BiRat> rhs(nc);
    for (int j = 0; j < ne; ++j)
      for (const auto& [e, c] : red[j].t) M[cidx.at(e)][j] = c;
    for (const auto& [e, c] : di.t) {
      auto it = cidx.find(e);
      if (it == cidx.end())
        fail(Errc::NotClosed, "delta of expression " + std::to_string(i) +
                                  " contains the monomial " + mon_str(e, X.ring.vars) +
                                  ", outside the given span");
      rhs[it->second] = c;
    }
    std::vector<int> pivot_of_col(ne, -1);
    int prow = 0;
    for (int cno = 0; cno < ne && prow < nc; ++cno) {
      int p = -1;
      for (int r = prow; r < nc; ++r)
        if (!rat_is_zero(M[r][cno])) {
          p = r;
          break;
        }
      if (p < 0) continue;
      std::swap(M[p], M[prow]);
      std::swap(rhs[p], rhs[prow]);
      const Rational inv = Rational(1) / M[prow][cno];
      for (int c2 = 0; c2 < ne; ++c2) M[prow][c2] = M[prow][c2] * inv;
      rhs[prow] = rhs[prow] * BiRat::constant(inv);
      for (int r = 0; r < nc; ++r) {
        if (r == prow || rat_is_zero(M[r][cno])) continue;
        const Rational f = M[r][cno];
        for (int c2 = 0; c2 < ne; ++c2) M[r][c2] = M[r][c2] - f * M[prow][c2];
        rhs[r] = rhs[r] - BiRat::constant(f) * rhs[prow];
      }
      pivot_of_col[cno] = prow;
      ++prow;
    }
    for (int r = prow; r < nc; ++r)
      if (!rhs[r].is_zero())
        fail(Errc::NotClosed, "delta of expression " + std::to_string(i) +
                                  " is not a combination of the given expressions");
    for (int cno = 0; cno < ne; ++cno)
      if (pivot_of_col[cno] >= 0) out.B[i][cno] = rhs[pivot_of_col[cno]];
  }
  return out;
}

FiniteKAlgebra FiniteKAlgebra::field() {
  FiniteKAlgebra a;
  a.name = "K";
  a.dim = 1;
  a.mul = {{{Rational(1)}}};
  a.unit = {Rational(1)};
  a.ideals = {{}, {{Rational(1)}}};
  return a;
}

FiniteKAlgebra FiniteKAlgebra::pair() {
  FiniteKAlgebra a;
  a.name = "KxK";
  a.dim = 2;
  a.mul = {{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}},
           {{Rational(0), Rational(0)}, {Rational(0), Rational(1)}}};
  a.unit = {Rational(1), Rational(1)};
  a.ideals = {{},
              {{Rational(1), Rational(0)}},
              {{Rational(0), Rational(1)}},
              {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
  return a;
}

FiniteKAlgebra FiniteKAlgebra::dual_numbers() {
  FiniteKAlgebra a;
  a.name = "K[u]/(u^2)";
  a.dim = 2;
  a.mul = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
           {{Rational(0), Rational(1)}, {Rational(0), Rational(0)}}};
  a.unit = {Rational(1), Rational(0)};
  a.ideals = {{},
              {{Rational(0), Rational(1)}},
              {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
  return a;
}

namespace {

// z-window model of fixture (x) A: coordinates z^k (x) e_i for |k| <= N
struct WindowModel {
  const FiniteKAlgebra& alg;
  int N;
  int dim;
  int idx(int k, int i) const { return (k + N) * dim + i; }
  int ncoords() const { return (2 * N + 1) * dim; }

  // echelon basis maintenance
  static int lead(const std::vector<Rational>& v) {
    for (std::size_t c = 0; c < v.size(); ++c)
      if (!rat_is_zero(v[c])) return static_cast<int>(c);
    return -1;
  }

  // grow the fully reduced row basis; keeping rows canonical matters for the
  // shift operators, whose applicability is judged row by row
  static bool insert(std::vector<std::vector<Rational>>& basis, std::vector<Rational> v) {
    if (lead(v) < 0) return false;
    auto m = basis;
    m.push_back(std::move(v));
    kernel::rref(m);
    while (!m.empty() && lead(m.back()) < 0) m.pop_back();
    if (m.size() == basis.size()) return false;
    basis = std::move(m);
    return true;
  }

  std::vector<Rational> apply_delta(const std::vector<Rational>& v) const {
    std::vector<Rational> r(v.size(), Rational(0));
    for (int k = -N; k <= N; ++k)
      for (int i = 0; i < dim; ++i) r[idx(k, i)] = Rational(k) * v[idx(k, i)];
    return r;
  }
  bool shift_ok(const std::vector<Rational>& v, int dir) const {
    const int edge = dir > 0 ? N : -N;
    for (int i = 0; i < dim; ++i)
      if (!rat_is_zero(v[idx(edge, i)])) return false;
    return true;
  }
  std::vector<Rational> shift(const std::vector<Rational>& v, int dir) const {
    std::vector<Rational> r(v.size(), Rational(0));
    for (int k = -N; k <= N; ++k) {
      const int k2 = k + dir;
      if (k2 < -N || k2 > N) continue;
      for (int i = 0; i < dim; ++i) r[idx(k2, i)] = v[idx(k, i)];
    }
    return r;
  }
  std::vector<Rational> mul_basis(const std::vector<Rational>& v, int j) const {
    std::vector<Rational> r(v.size(), Rational(0));
    for (int k = -N; k <= N; ++k)
      for (int i = 0; i < dim; ++i) {
        if (rat_is_zero(v[idx(k, i)])) continue;
        for (int l = 0; l < dim; ++l)
          r[idx(k, l)] = r[idx(k, l)] + v[idx(k, i)] * alg.mul[i][j][l];
      }
    return r;
  }

  // closure under delta, both shifts and algebra multiplications
  std::vector<std::vector<Rational>> saturate(std::vector<std::vector<Rational>> start) const {
    std::vector<std::vector<Rational>> basis;
    for (auto& v : start) insert(basis, std::move(v));
    bool changed = true;
    while (changed) {
      changed = false;
      const auto snapshot = basis;
      for (const auto& v : snapshot) {
        if (insert(basis, apply_delta(v))) changed = true;
        for (int dir : {1, -1})
          if (shift_ok(v, dir) && insert(basis, shift(v, dir))) changed = true;
        for (int j = 0; j < dim; ++j)
          if (insert(basis, mul_basis(v, j))) changed = true;
      }
    }
    return basis;
  }

  // elements v of the algebra with 1 (x) v in the span
  std::vector<std::vector<Rational>> intersect_algebra(
      const std::vector<std::vector<Rational>>& basis) const {
    // combinations of basis rows supported on the k = 0 slice
    const int nb = static_cast<int>(basis.size());
    std::vector<std::vector<Rational>> cond;
    for (int c = 0; c < ncoords(); ++c) {
      if (c >= idx(0, 0) && c < idx(0, 0) + dim) continue;
      std::vector<Rational> row(nb, Rational(0));
      bool nz = false;
      for (int r = 0; r < nb; ++r) {
        row[r] = basis[r][c];
        if (!rat_is_zero(row[r])) nz = true;
      }
      if (nz) cond.push_back(std::move(row));
    }
    std::vector<std::vector<Rational>> combos;
    if (cond.empty()) {
      combos.assign(static_cast<std::size_t>(nb), {});
      for (int r = 0; r < nb; ++r) {
        combos[r].assign(nb, Rational(0));
        combos[r][r] = Rational(1);
      }
    } else {
      combos = kernel::nullspace(cond);
    }
    std::vector<std::vector<Rational>> out;
    for (const auto& a : combos) {
      std::vector<Rational> v(dim, Rational(0));
      for (int r = 0; r < nb; ++r)
        for (int i = 0; i < dim; ++i) v[i] = v[i] + a[r] * basis[r][idx(0, i)];
      insert(out, std::move(v));
    }
    return out;
  }

  std::vector<std::vector<Rational>> embed_ideal(
      const std::vector<std::vector<Rational>>& ibasis) const {
    std::vector<std::vector<Rational>> start;
    for (const auto& u : ibasis) {
      std::vector<Rational> v(ncoords(), Rational(0));
      for (int i = 0; i < dim; ++i) v[idx(0, i)] = u[i];
      start.push_back(std::move(v));
    }
    return saturate(std::move(start));
  }

  static bool spans_match(std::vector<std::vector<Rational>> a,
                          std::vector<std::vector<Rational>> b) {
    auto canon = [](std::vector<std::vector<Rational>>& m) {
      kernel::rref(m);
      while (!m.empty() && lead(m.back()) < 0) m.pop_back();
    };
    canon(a);
    canon(b);
    return a == b;
  }
};

} // namespace

CorrespondenceReport diff_ideal_correspondence_check(const Torsor& X, const DiffStructure& d,
                                                     const FiniteKAlgebra& alg) {
  const bool shape_ok = X.grp.n == 1 && X.ring.nvars() == 2 && X.ring.gens.size() == 1 &&
                        X.ring.gens[0] == MP::var(2, 0) * MP::var(2, 1) - MP::constant(2, 1);
  if (!shape_ok || d.A.n != 1 || !(d.A.at(0, 0) == BiRat::constant(1)))
    fail(Errc::FixtureRequired,
         "ideal correspondence runs on the rank-1 torus torsor with A = (1) only");
  if (alg.dim < 1 || alg.dim > 4)
    fail(Errc::BadInput, "constant algebra dimension out of range");

  CorrespondenceReport rep;
  WindowModel wm{alg, 4, alg.dim};

  // lattice round trip: I -> R (x) I -> back
  std::vector<std::vector<std::vector<Rational>>> embedded;
  for (const auto& I : alg.ideals) {
    auto J = wm.embed_ideal(I);
    auto I2 = wm.intersect_algebra(J);
    std::vector<std::vector<Rational>> Ic = I;
    if (!WindowModel::spans_match(Ic, I2)) {
      rep.detail = "ideal of dimension " + std::to_string(I.size()) +
                   " does not survive the round trip";
      return rep;
    }
    embedded.push_back(std::move(J));
    ++rep.lattice_checked;
  }
  for (std::size_t a = 0; a < embedded.size(); ++a)
    for (std::size_t b2 = a + 1; b2 < embedded.size(); ++b2)
      if (WindowModel::spans_match(embedded[a], embedded[b2])) {
        rep.detail = "two distinct ideals embed to the same differential ideal";
        return rep;
      }

  // generated family: differential ideals from low-degree generators all
  // arise as R (x) I for I = their algebra trace
  std::vector<std::vector<Rational>> gens;
  for (int i = 0; i < alg.dim; ++i)
    for (int k : {-1, 0, 1}) {
      std::vector<Rational> v(wm.ncoords(), Rational(0));
      v[wm.idx(k, i)] = Rational(1);
      gens.push_back(std::move(v));
    }
  for (int i = 0; i < alg.dim; ++i)
    for (int j = 0; j < alg.dim; ++j) {
      if (i == j) continue;
      std::vector<Rational> v(wm.ncoords(), Rational(0));
      v[wm.idx(1, i)] = Rational(1);
      v[wm.idx(0, j)] = Rational(1);
      gens.push_back(std::move(v));
    }
  for (const auto& g : gens) {
    auto J = wm.saturate({g});
    auto I = wm.intersect_algebra(J);
    auto J2 = wm.embed_ideal(I);
    if (!WindowModel::spans_match(J, J2)) {
      rep.detail = "a generated differential ideal is not of the form R (x) I (dims " +
                   std::to_string(J.size()) + " vs " + std::to_string(J2.size()) +
                   ", trace dim " + std::to_string(I.size()) + ")";
      return rep;
    }
    ++rep.generated_checked;
  }
  rep.ok = true;
  return rep;
}

} // namespace pvp
