#include "pvpatch/groups.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pvp {

namespace {

std::vector<std::string> matrix_vars(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) v.push_back("t" + std::to_string(i) + std::to_string(j));
  return v;
}

using MP = MPoly<Rational>;

MP mdet(const std::vector<std::vector<MP>>& m, int nv) {
  const int k = static_cast<int>(m.size());
  if (k == 0) return MP::constant(nv, 1);
  if (k == 1) return m[0][0];
  MP acc;
  for (int j = 0; j < k; ++j) {
    std::vector<std::vector<MP>> sub;
    for (int i = 1; i < k; ++i) {
      std::vector<MP> row;
      for (int c = 0; c < k; ++c)
        if (c != j) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    const MP term = m[0][j] * mdet(sub, nv);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

std::vector<std::vector<MP>> block_matrix(const Group& g, const Block& b) {
  const int m = static_cast<int>(b.rows.size());
  std::vector<std::vector<MP>> mat(m, std::vector<MP>(m));
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) mat[a][c] = g.tvar(b.rows[a], b.rows[c]);
  return mat;
}

// antipode images from the block structure: within a block the inverse matrix
// is the adjugate times the block's det-inverse (or times 1 when the block
// determinant is identically 1 on the group); entries across blocks invert to 0
void default_antipode(Group& g) {
  const int nv = g.ring.nvars();
  g.antipode.assign(nv, MP());
  for (const Block& b : g.blocks) {
    const int m = static_cast<int>(b.rows.size());
    const auto mat = block_matrix(g, b);
    const MP dmul = b.det_var >= 0 ? MP::var(nv, b.det_var) : MP::constant(nv, 1);
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) {
        // adj(M)_{ac} = (-1)^{a+c} det(M without row c, column a)
        std::vector<std::vector<MP>> sub;
        for (int i = 0; i < m; ++i) {
          if (i == c) continue;
          std::vector<MP> row;
          for (int j = 0; j < m; ++j)
            if (j != a) row.push_back(mat[i][j]);
          sub.push_back(std::move(row));
        }
        MP adj = mdet(sub, nv) * dmul;
        if ((a + c) % 2 == 1) adj = -adj;
        g.antipode[g.t_index(b.rows[a], b.rows[c])] = adj;
      }
    if (b.det_var >= 0) g.antipode[b.det_var] = mdet(mat, nv);
  }
}

void default_counit(Group& g) {
  const int nv = g.ring.nvars();
  g.counit.assign(nv, Rational(0));
  for (int i = 0; i < g.n; ++i) g.counit[g.t_index(i, i)] = 1;
  for (const Block& b : g.blocks)
    if (b.det_var >= 0) g.counit[b.det_var] = 1;
}

// comultiplication image of ring variable v, legs addressed through the index
// maps L and R into a ring with tnv variables
MP comult_var(const Group& g, int v, int tnv, const std::vector<int>& L,
              const std::vector<int>& R) {
  MP r;
  if (v >= g.n * g.n) {
    Expo e(tnv, 0);
    e[L[v]] += 1;
    e[R[v]] += 1;
    r.add_term(e, 1);
    return r;
  }
  const int i = v / g.n, j = v % g.n;
  for (int k = 0; k < g.n; ++k) {
    Expo e(tnv, 0);
    e[L[g.t_index(i, k)]] += 1;
    e[R[g.t_index(k, j)]] += 1;
    r.add_term(e, 1);
  }
  return r;
}

std::vector<MP> comult_images(const Group& g) {
  const int nv = g.ring.nvars();
  std::vector<int> L(nv), R(nv);
  for (int v = 0; v < nv; ++v) {
    L[v] = v;
    R[v] = nv + v;
  }
  std::vector<MP> img(nv);
  for (int v = 0; v < nv; ++v) img[v] = comult_var(g, v, 2 * nv, L, R);
  return img;
}

Group finish(Group g) {
  if (g.antipode.empty()) default_antipode(g);
  if (g.counit.empty()) default_counit(g);
  if (g.points.empty()) g.points.push_back(g.counit);
  verify_hopf(g);
  return g;
}

std::vector<Rational> pt(std::initializer_list<Rational> vals) { return vals; }

}  // namespace

Rational mpoly_eval(const MP& p, const std::vector<Rational>& vals) {
  Rational acc = 0;
  for (const auto& [e, c] : p.t) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) term *= vals[i];
    acc += term;
  }
  return acc;
}

TensorRing<Rational> square_ring(const Group& g) {
  return tensor_ring(g.ring, g.ring, "", "'");
}

MP comultiply(const Group& g, const MP& f, const TensorRing<Rational>& sq) {
  return substitute(f, comult_images(g), sq.ring);
}

MP antipode_apply(const Group& g, const MP& f) {
  return substitute(f, g.antipode, g.ring);
}

Rational counit_eval(const Group& g, const MP& f) { return mpoly_eval(f, g.counit); }

void verify_hopf(const Group& g) {
  const int nv = g.ring.nvars();
  const int nt = g.n * g.n;
  if (nv < nt) fail(Errc::GeneratorAuditFailed, g.name + ": missing matrix variables");
  {
    const auto tv = matrix_vars(g.n);
    for (int v = 0; v < nt; ++v)
      if (g.ring.vars[v] != tv[v])
        fail(Errc::GeneratorAuditFailed, g.name + ": matrix variables must come first");
  }
  if (static_cast<int>(g.antipode.size()) != nv ||
      static_cast<int>(g.counit.size()) != nv)
    fail(Errc::GeneratorAuditFailed, g.name + ": Hopf data arity mismatch");
  if (g.points.empty() || g.points[0] != g.counit)
    fail(Errc::GeneratorAuditFailed, g.name + ": first stored point must be the identity");
  for (const auto& p : g.points) {
    if (static_cast<int>(p.size()) != nv)
      fail(Errc::GeneratorAuditFailed, g.name + ": stored point arity mismatch");
    for (const auto& gen : g.ring.gens)
      if (mpoly_eval(gen, p) != 0)
        fail(Errc::GeneratorAuditFailed,
             g.name + ": generator " + gen.str(g.ring.vars) +
                 " does not vanish at a stored point");
  }

  // comultiplication: well-defined on the quotient, counital, coassociative
  Coaction rt;
  rt.module = g.ring;
  rt.grp = g;
  rt.tr = square_ring(g);
  rt.images = comult_images(g);
  try {
    verify_coaction(rt);
  } catch (const PvError& e) {
    fail(Errc::GeneratorAuditFailed, g.name + ": " + e.what());
  }

  // antipode preserves the ideal
  for (const auto& gen : g.ring.gens)
    if (!antipode_apply(g, gen).is_zero())
      fail(Errc::GeneratorAuditFailed,
           g.name + ": antipode moves generator " + gen.str(g.ring.vars) +
               " off the ideal");

  // antipode laws m(S(x)id)D = e and m(id(x)S)D = e on every variable
  std::vector<MP> s_id(2 * nv), id_s(2 * nv);
  for (int w = 0; w < nv; ++w) {
    s_id[w] = g.antipode[w];
    s_id[nv + w] = MP::var(nv, w);
    id_s[w] = MP::var(nv, w);
    id_s[nv + w] = g.antipode[w];
  }
  for (int v = 0; v < nv; ++v) {
    const MP want = g.ring.reduce(MP::constant(nv, g.counit[v]));
    if (substitute(rt.images[v], s_id, g.ring) != want ||
        substitute(rt.images[v], id_s, g.ring) != want)
      fail(Errc::GeneratorAuditFailed,
           g.name + ": antipode law fails on " + g.ring.vars[v]);
  }
}

Group group_gl(int n) {
  if (n < 1 || n > 3) fail(Errc::BadInput, "GL_n catalog covers 1 <= n <= 3");
  Group g;
  g.name = "GL" + std::to_string(n);
  g.n = n;
  auto vars = matrix_vars(n);
  vars.push_back("detinv");
  const int nv = n * n + 1;
  Block b;
  for (int i = 0; i < n; ++i) b.rows.push_back(i);
  b.det_var = n * n;
  g.blocks = {b};
  g.ring.vars = vars;  // provisional, for tvar/block_matrix below
  g.n = n;
  Group tmp = g;
  tmp.ring = Ring<Rational>(vars, {});
  const MP det = mdet(block_matrix(tmp, b), nv);
  g.ring = Ring<Rational>(vars, {MP::var(nv, n * n) * det - MP::constant(nv, 1)});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, 0));
      e[i][j] = 1;
      g.lie_gens.push_back(e);
    }
  default_antipode(g);
  default_counit(g);
  g.points.push_back(g.counit);
  if (n == 1) {
    g.points.push_back(pt({2, Rational(1, 2)}));
    g.points.push_back(pt({-3, Rational(-1, 3)}));
  } else if (n == 2) {
    g.points.push_back(pt({2, 0, 0, 3, Rational(1, 6)}));
    g.points.push_back(pt({1, 1, 0, 1, 1}));
    g.points.push_back(pt({0, 1, -1, 0, 1}));
  } else {
    g.points.push_back(pt({2, 0, 0, 0, 1, 0, 0, 0, 3, Rational(1, 6)}));
    g.points.push_back(pt({1, 1, 0, 0, 1, 0, 0, 0, 1, 1}));
    g.points.push_back(pt({0, 1, 0, -1, 0, 0, 0, 0, 1, 1}));
  }
  return finish(std::move(g));
}

Group group_sl2() {
  Group g;
  g.name = "SL2";
  g.n = 2;
  const auto vars = matrix_vars(2);
  const int nv = 4;
  const MP rel = MP::var(nv, 0) * MP::var(nv, 3) - MP::var(nv, 1) * MP::var(nv, 2) -
                 MP::constant(nv, 1);
  g.ring = Ring<Rational>(vars, {rel});
  g.blocks = {Block{{0, 1}, -1}};
  g.lie_gens = {{{0, 1}, {0, 0}}, {{0, 0}, {1, 0}}, {{1, 0}, {0, -1}}};
  default_antipode(g);
  default_counit(g);
  g.points = {g.counit, pt({1, 1, 0, 1}), pt({1, 0, 1, 1}),
              pt({2, 0, 0, Rational(1, 2)}), pt({0, 1, -1, 0})};
  return finish(std::move(g));
}

Group group_ga_upper() {
  Group g;
  g.name = "Ga+";
  g.n = 2;
  const int nv = 4;
  const MP one = MP::constant(nv, 1);
  g.ring = Ring<Rational>(matrix_vars(2),
                          {MP::var(nv, 0) - one, MP::var(nv, 3) - one, MP::var(nv, 2)});
  g.blocks = {Block{{0, 1}, -1}};
  g.lie_gens = {{{0, 1}, {0, 0}}};
  g.normal_in = {"Borel"};
  g.generates_with = {"Ga-:SL2", "GmSL2:Borel"};
  default_antipode(g);
  default_counit(g);
  g.points = {g.counit, pt({1, 1, 0, 1}), pt({1, -2, 0, 1}),
              pt({1, Rational(7, 2), 0, 1})};
  return finish(std::move(g));
}

Group group_ga_lower() {
  Group g;
  g.name = "Ga-";
  g.n = 2;
  const int nv = 4;
  const MP one = MP::constant(nv, 1);
  g.ring = Ring<Rational>(matrix_vars(2),
                          {MP::var(nv, 0) - one, MP::var(nv, 3) - one, MP::var(nv, 1)});
  g.blocks = {Block{{0, 1}, -1}};
  g.lie_gens = {{{0, 0}, {1, 0}}};
  g.generates_with = {"Ga+:SL2"};
  default_antipode(g);
  default_counit(g);
  g.points = {g.counit, pt({1, 0, 1, 1}), pt({1, 0, -2, 1}),
              pt({1, 0, Rational(7, 2), 1})};
  return finish(std::move(g));
}

Group group_gm() {
  Group g = group_gl(1);
  g.name = "Gm";
  g.lie_gens = {{{1}}};
  return g;
}

Group group_torus_sl2() {
  Group g;
  g.name = "GmSL2";
  g.n = 2;
  const int nv = 4;
  const MP rel = MP::var(nv, 0) * MP::var(nv, 3) - MP::constant(nv, 1);
  g.ring = Ring<Rational>(matrix_vars(2), {MP::var(nv, 1), MP::var(nv, 2), rel});
  g.blocks = {Block{{0, 1}, -1}};
  g.lie_gens = {{{1, 0}, {0, -1}}};
  g.generates_with = {"Ga+:Borel"};
  default_antipode(g);
  default_counit(g);
  g.points = {g.counit, pt({2, 0, 0, Rational(1, 2)}), pt({-1, 0, 0, -1}),
              pt({3, 0, 0, Rational(1, 3)})};
  return finish(std::move(g));
}

Group group_borel_sl2() {
  Group g;
  g.name = "Borel";
  g.n = 2;
  const int nv = 4;
  const MP rel = MP::var(nv, 0) * MP::var(nv, 3) - MP::constant(nv, 1);
  g.ring = Ring<Rational>(matrix_vars(2), {MP::var(nv, 2), rel});
  g.blocks = {Block{{0, 1}, -1}};
  g.lie_gens = {{{0, 1}, {0, 0}}, {{1, 0}, {0, -1}}};
  default_antipode(g);
  default_counit(g);
  g.points = {g.counit, pt({2, 3, 0, Rational(1, 2)}), pt({1, 1, 0, 1}),
              pt({Rational(1, 3), -2, 0, 3})};
  return finish(std::move(g));
}

Group group_cyclic(int k) {
  if (k < 1) fail(Errc::BadInput, "cyclic order must be positive");
  Group g;
  g.name = "C" + std::to_string(k);
  g.n = 1;
  g.ring = Ring<Rational>({"t11"}, {MP::var(1, 0, k) - MP::constant(1, 1)});
  g.blocks = {Block{{0}, -1}};
  g.antipode = {MP::var(1, 0, k == 1 ? 0 : k - 1)};
  g.normal_in = {"Gm"};
  default_counit(g);
  g.points = {g.counit};
  if (k % 2 == 0) g.points.push_back(pt({-1}));
  return finish(std::move(g));
}

Group group_trivial(int n) {
  if (n < 1 || n > 3) fail(Errc::BadInput, "trivial-group catalog covers 1 <= n <= 3");
  Group g;
  g.name = "Triv" + std::to_string(n);
  g.n = n;
  auto vars = matrix_vars(n);
  vars.push_back("detinv");
  const int nv = n * n + 1;
  std::vector<MP> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MP p = MP::var(nv, i * n + j);
      if (i == j) p = p - MP::constant(nv, 1);
      gens.push_back(p);
    }
  gens.push_back(MP::var(nv, n * n) - MP::constant(nv, 1));
  g.ring = Ring<Rational>(vars, gens);
  Block b;
  for (int i = 0; i < n; ++i) b.rows.push_back(i);
  b.det_var = n * n;
  g.blocks = {b};
  return finish(std::move(g));
}

Group direct_product(const Group& a, const Group& b) {
  Group g;
  g.name = a.name + "x" + b.name;
  g.n = a.n + b.n;
  const int n = g.n;
  const int nt = n * n;

  // collect det-inverse variables of both factors, in block order
  std::vector<std::pair<int, int>> adets, bdets;  // (source ring var, new index)
  int next = nt;
  for (const Block& blk : a.blocks)
    if (blk.det_var >= 0) adets.push_back({blk.det_var, next++});
  for (const Block& blk : b.blocks)
    if (blk.det_var >= 0) bdets.push_back({blk.det_var, next++});
  const int nv = next;
  const int ndets = nv - nt;

  std::vector<std::string> vars = matrix_vars(n);
  for (int d = 0; d < ndets; ++d)
    vars.push_back(ndets == 1 ? "detinv" : "detinv" + std::to_string(d + 1));

  std::vector<int> amap(a.ring.nvars(), -1), bmap(b.ring.nvars(), -1);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) amap[a.t_index(i, j)] = i * n + j;
  for (auto [src, dst] : adets) amap[src] = dst;
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) bmap[b.t_index(i, j)] = (a.n + i) * n + (a.n + j);
  for (auto [src, dst] : bdets) bmap[src] = dst;

  std::vector<MP> gens;
  for (const auto& q : a.ring.gens) gens.push_back(remap_vars(q, amap, nv));
  for (const auto& q : b.ring.gens) gens.push_back(remap_vars(q, bmap, nv));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i < a.n) != (j < a.n)) gens.push_back(MP::var(nv, i * n + j));
  g.ring = Ring<Rational>(vars, gens);

  for (const Block& blk : a.blocks) {
    Block nb = blk;
    if (nb.det_var >= 0) nb.det_var = amap[nb.det_var];
    g.blocks.push_back(nb);
  }
  for (const Block& blk : b.blocks) {
    Block nb;
    for (int r : blk.rows) nb.rows.push_back(a.n + r);
    nb.det_var = blk.det_var >= 0 ? bmap[blk.det_var] : -1;
    g.blocks.push_back(nb);
  }

  g.antipode.assign(nv, MP());
  for (int v = 0; v < a.ring.nvars(); ++v)
    g.antipode[amap[v]] = remap_vars(a.antipode[v], amap, nv);
  for (int v = 0; v < b.ring.nvars(); ++v)
    g.antipode[bmap[v]] = remap_vars(b.antipode[v], bmap, nv);
  default_counit(g);

  for (const auto& pa : a.points)
    for (const auto& pb : b.points) {
      if (g.points.size() >= 6) break;
      std::vector<Rational> p(nv, Rational(0));
      for (int v = 0; v < a.ring.nvars(); ++v) p[amap[v]] = pa[v];
      for (int v = 0; v < b.ring.nvars(); ++v) p[bmap[v]] = pb[v];
      g.points.push_back(std::move(p));
    }

  for (const auto& L : a.lie_gens) {
    std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j) e[i][j] = L[i][j];
    g.lie_gens.push_back(e);
  }
  for (const auto& L : b.lie_gens) {
    std::vector<std::vector<Rational>> e(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < b.n; ++i)
      for (int j = 0; j < b.n; ++j) e[a.n + i][a.n + j] = L[i][j];
    g.lie_gens.push_back(e);
  }
  return finish(std::move(g));
}

Group group_from_generators(const std::string& name, int n,
                            const std::vector<std::string>& gen_strs) {
  if (n < 1 || n > 3) fail(Errc::BadInput, "presentations cover 1 <= n <= 3");
  Group g;
  g.name = name;
  g.n = n;
  auto vars = matrix_vars(n);
  bool want_det = false;
  for (const auto& s : gen_strs)
    if (s.find("detinv") != std::string::npos) want_det = true;
  if (want_det) vars.push_back("detinv");
  std::vector<MP> gens;
  for (const auto& s : gen_strs) gens.push_back(parse_mpoly(s, vars));
  g.ring = Ring<Rational>(vars, gens);
  Block b;
  for (int i = 0; i < n; ++i) b.rows.push_back(i);
  b.det_var = want_det ? n * n : -1;
  g.blocks = {b};
  return finish(std::move(g));
}

std::vector<Group> standard_catalog() {
  std::vector<Group> out;
  out.push_back(group_gl(1));
  out.push_back(group_gl(2));
  out.push_back(group_gl(3));
  out.push_back(group_sl2());
  out.push_back(group_ga_upper());
  out.push_back(group_ga_lower());
  out.push_back(group_gm());
  out.push_back(group_torus_sl2());
  out.push_back(group_borel_sl2());
  out.push_back(group_cyclic(2));
  out.push_back(group_cyclic(3));
  out.push_back(group_cyclic(4));
  out.push_back(group_trivial(1));
  out.push_back(group_trivial(2));
  out.push_back(direct_product(group_gm(), group_gm()));
  out.push_back(direct_product(group_ga_upper(), group_gm()));
  return out;
}

bool is_subgroup(const Group& sub, const Group& super, std::string* why) {
  if (sub.n != super.n) {
    if (why) *why = "matrix sizes differ";
    return false;
  }
  const int snv = sub.ring.nvars();
  std::vector<MP> images(super.ring.nvars());
  for (int v = 0; v < super.ring.nvars(); ++v) {
    const auto& name = super.ring.vars[v];
    auto it = std::find(sub.ring.vars.begin(), sub.ring.vars.end(), name);
    if (it != sub.ring.vars.end()) {
      images[v] = MP::var(snv, static_cast<int>(it - sub.ring.vars.begin()));
      continue;
    }
    // a det-inverse variable may be absent when the block determinant is 1
    bool mapped = false;
    for (const Block& b : super.blocks) {
      if (b.det_var != v) continue;
      Block sb;
      sb.rows = b.rows;
      const MP det = mdet(block_matrix(sub, sb), snv);
      if (sub.ring.reduce(det - MP::constant(snv, 1)).is_zero()) {
        images[v] = MP::constant(snv, 1);
        mapped = true;
      }
      break;
    }
    if (!mapped) {
      if (why) *why = "variable " + name + " has no image in the subgroup presentation";
      return false;
    }
  }
  for (const auto& gen : super.ring.gens) {
    if (!sub.ring.reduce(substitute(gen, images, sub.ring)).is_zero()) {
      if (why)
        *why = "generator " + gen.str(super.ring.vars) +
               " does not reduce to zero in the subgroup ring";
      return false;
    }
  }
  return true;
}

NormalityReport check_normal(const Group& g, const Group& nsub) {
  NormalityReport rep;
  std::string why;
  if (!is_subgroup(nsub, g, &why)) {
    rep.detail = nsub.name + " is not a subgroup of " + g.name + ": " + why;
    return rep;
  }
  rep.subgroup = true;
  if (nsub.ring.vars != g.ring.vars) {
    rep.detail = "presentations use different coordinates; no conjugation certificate";
    return rep;
  }
  const int nv = g.ring.nvars();
  const auto tr = tensor_ring(g.ring, nsub.ring, "", "'");
  const int n = g.n;

  // conj = T * T_N * T^{-1} with T from the K[G] leg and T_N from the K[N] leg
  std::vector<MP> conj(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MP acc;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const MP left = g.tvar(i, k) * g.antipode[g.t_index(l, j)];
          acc = acc + tr.embed_left(left) *
                          tr.embed_right(MP::var(nv, nsub.t_index(k, l)));
        }
      conj[g.t_index(i, j)] = tr.ring.reduce(acc);
    }
  for (const auto& e : conj) rep.conj.push_back(e.str(tr.ring.vars));

  std::vector<MP> images(nv);
  for (int v = 0; v < nv; ++v)
    images[v] = v < n * n ? conj[v] : tr.embed_right(MP::var(nv, v));
  for (const auto& gen : nsub.ring.gens) {
    const MP r = substitute(gen, images, tr.ring);
    if (!r.is_zero()) {
      rep.normal = false;
      rep.detail = "generator " + gen.str(nsub.ring.vars) +
                   " conjugates to " + r.str(tr.ring.vars) + ", outside the ideal";
      return rep;
    }
  }
  rep.normal = true;
  rep.detail = "conjugation certificate closed";
  return rep;
}

NormalityReport require_normal(const Group& g, const Group& nsub) {
  NormalityReport rep = check_normal(g, nsub);
  if (!rep.normal)
    fail(Errc::NotNormal, nsub.name + " is not normal in " + g.name + ": " + rep.detail);
  return rep;
}

SemidirectData borel_semidirect() {
  SemidirectData sd;
  sd.G = group_borel_sl2();
  sd.N = group_ga_upper();
  sd.H = group_torus_sl2();
  require_normal(sd.G, sd.N);
  std::string why;
  if (!is_subgroup(sd.H, sd.G, &why))
    fail(Errc::GeneratorAuditFailed, "torus is not a subgroup of the Borel: " + why);
  sd.nh = tensor_ring(sd.N.ring, sd.H.ring, "", "'");
  const int nv = sd.N.ring.nvars();  // 4 on each leg
  const int tnv = sd.nh.ring.nvars();

  // (n, h) -> n*h in coordinates: K[G] -> K[N] (x) K[H]
  sd.g_to_nh.assign(nv, MP());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      MP acc;
      for (int k = 0; k < 2; ++k)
        acc = acc + sd.nh.embed_left(MP::var(nv, 2 * i + k)) *
                        sd.nh.embed_right(MP::var(nv, 2 * k + j));
      sd.g_to_nh[2 * i + j] = sd.nh.ring.reduce(acc);
    }

  // inverse: u = t12*t11 recovers the unipotent part, the diagonal maps home
  sd.nh_to_g.assign(tnv, MP());
  const int gnv = sd.G.ring.nvars();
  sd.nh_to_g[0] = MP::constant(gnv, 1);                      // N leg t11
  sd.nh_to_g[1] = MP::var(gnv, 1) * MP::var(gnv, 0);         // N leg t12
  sd.nh_to_g[2] = MP();                                      // N leg t21
  sd.nh_to_g[3] = MP::constant(gnv, 1);                      // N leg t22
  sd.nh_to_g[4] = MP::var(gnv, 0);                           // H leg t11
  sd.nh_to_g[5] = MP();                                      // H leg t12
  sd.nh_to_g[6] = MP();                                      // H leg t21
  sd.nh_to_g[7] = MP::var(gnv, 3);                           // H leg t22

  for (const auto& gen : sd.G.ring.gens)
    if (!substitute(gen, sd.g_to_nh, sd.nh.ring).is_zero())
      fail(Errc::GeneratorAuditFailed,
           "semidirect map does not kill the Borel ideal");
  for (const auto& gen : sd.nh.ring.gens)
    if (!substitute(gen, sd.nh_to_g, sd.G.ring).is_zero())
      fail(Errc::GeneratorAuditFailed,
           "semidirect inverse does not kill the factor ideals");
  for (int v = 0; v < gnv; ++v)
    if (substitute(sd.g_to_nh[v], sd.nh_to_g, sd.G.ring) !=
        sd.G.ring.reduce(MP::var(gnv, v)))
      fail(Errc::GeneratorAuditFailed, "semidirect round trip fails on " +
                                           sd.G.ring.vars[v]);
  for (int w = 0; w < tnv; ++w)
    if (substitute(sd.nh_to_g[w], sd.g_to_nh, sd.nh.ring) !=
        sd.nh.ring.reduce(MP::var(tnv, w)))
      fail(Errc::GeneratorAuditFailed, "semidirect round trip fails on " +
                                           sd.nh.ring.vars[w]);
  return sd;
}

void verify_coaction(const Coaction& c) {
  const int mv = c.module.nvars();
  const int hv = c.grp.ring.nvars();
  if (static_cast<int>(c.images.size()) != mv)
    fail(Errc::BadAction, "coaction image arity mismatch");
  for (const auto& gen : c.module.gens)
    if (!c.coact(gen).is_zero())
      fail(Errc::BadAction, "coaction does not preserve the module ideal: " +
                                gen.str(c.module.vars));

  // counit law: (id (x) eps) rho = id
  std::vector<MP> eps(mv + hv);
  for (int w = 0; w < mv; ++w) eps[w] = MP::var(mv, w);
  for (int u = 0; u < hv; ++u) eps[mv + u] = MP::constant(mv, c.grp.counit[u]);
  for (int v = 0; v < mv; ++v)
    if (substitute(c.images[v], eps, c.module) != c.module.reduce(MP::var(mv, v)))
      fail(Errc::BadAction, "coaction counit law fails on " + c.module.vars[v]);

  // coassociativity: (rho (x) id) rho = (id (x) Delta) rho
  const auto inner = tensor_ring(c.grp.ring, c.grp.ring, "'", "''");
  const auto triple = tensor_ring(c.module, inner.ring, "", "");
  const int tnv = triple.ring.nvars();
  std::vector<int> idmap(mv + hv);
  for (int w = 0; w < mv + hv; ++w) idmap[w] = w;
  std::vector<int> L1(hv), L2(hv);
  for (int u = 0; u < hv; ++u) {
    L1[u] = mv + u;
    L2[u] = mv + hv + u;
  }
  std::vector<MP> lhs(mv + hv), rhs(mv + hv);
  for (int w = 0; w < mv; ++w) {
    lhs[w] = remap_vars(c.images[w], idmap, tnv);
    rhs[w] = MP::var(tnv, w);
  }
  for (int u = 0; u < hv; ++u) {
    lhs[mv + u] = MP::var(tnv, mv + hv + u);
    rhs[mv + u] = comult_var(c.grp, u, tnv, L1, L2);
  }
  for (int v = 0; v < mv; ++v)
    if (substitute(c.images[v], lhs, triple.ring) !=
        substitute(c.images[v], rhs, triple.ring))
      fail(Errc::BadAction, "coaction is not coassociative on " + c.module.vars[v]);
}

Coaction right_translation(const Group& g) {
  Coaction c;
  c.module = g.ring;
  c.grp = g;
  c.tr = square_ring(g);
  c.images = comult_images(g);
  verify_coaction(c);
  return c;
}

namespace {

// the class of g-variable v in K[H], for a subgroup h <= g aligned by name;
// det-inverse variables restrict to the matching variable or to 1 when the
// block determinant is 1 on h
MP restrict_var(const Group& g, const Group& h, int v) {
  const int hv = h.ring.nvars();
  if (v < g.n * g.n) return h.ring.reduce(MP::var(hv, v));
  const auto& name = g.ring.vars[v];
  auto it = std::find(h.ring.vars.begin(), h.ring.vars.end(), name);
  if (it != h.ring.vars.end())
    return h.ring.reduce(MP::var(hv, static_cast<int>(it - h.ring.vars.begin())));
  for (const Block& b : g.blocks) {
    if (b.det_var != v) continue;
    Block hb;
    hb.rows = b.rows;
    const auto mat = block_matrix(h, hb);
    const MP det = mdet(mat, hv);
    if (h.ring.reduce(det - MP::constant(hv, 1)).is_zero())
      return MP::constant(hv, 1);
    fail(Errc::BadAction, "cannot restrict " + name + " to " + h.name +
                              ": block determinant is not 1 there");
  }
  fail(Errc::BadAction, "cannot restrict " + name + " to " + h.name);
}

void require_aligned_subgroup(const Group& g, const Group& h) {
  std::string why;
  if (!is_subgroup(h, g, &why))
    fail(Errc::BadAction, h.name + " is not a subgroup of " + g.name + ": " + why);
  for (int v = 0; v < g.n * g.n; ++v)
    if (h.ring.vars[v] != g.ring.vars[v])
      fail(Errc::BadAction, "subgroup matrix coordinates are not aligned");
}

}  // namespace

Coaction subgroup_restriction(const Group& g, const Group& h) {
  require_aligned_subgroup(g, h);
  Coaction c;
  c.module = g.ring;
  c.grp = h;
  c.tr = tensor_ring(g.ring, h.ring, "", "'");
  const int nv = g.ring.nvars();
  c.images.assign(nv, MP());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int k = 0; k < g.n; ++k)
        acc = acc + c.tr.embed_left(g.tvar(i, k)) *
                        c.tr.embed_right(restrict_var(g, h, g.t_index(k, j)));
      c.images[g.t_index(i, j)] = c.tr.ring.reduce(acc);
    }
  for (int v = g.n * g.n; v < nv; ++v)
    c.images[v] = c.tr.ring.reduce(c.tr.embed_left(MP::var(nv, v)) *
                                   c.tr.embed_right(restrict_var(g, h, v)));
  verify_coaction(c);
  return c;
}

Coaction twisted_left(const Group& g, const Group& h) {
  require_aligned_subgroup(g, h);
  Coaction c;
  c.module = g.ring;
  c.grp = h;
  c.tr = tensor_ring(g.ring, h.ring, "", "'");
  const int nv = g.ring.nvars();
  auto s_h = [&](const MP& q) { return substitute(q, h.antipode, h.ring); };
  c.images.assign(nv, MP());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      MP acc;
      for (int k = 0; k < g.n; ++k)
        acc = acc + c.tr.embed_left(g.tvar(k, j)) *
                        c.tr.embed_right(s_h(restrict_var(g, h, g.t_index(i, k))));
      c.images[g.t_index(i, j)] = c.tr.ring.reduce(acc);
    }
  for (int v = g.n * g.n; v < nv; ++v)
    c.images[v] = c.tr.ring.reduce(c.tr.embed_left(MP::var(nv, v)) *
                                   c.tr.embed_right(s_h(restrict_var(g, h, v))));
  verify_coaction(c);
  return c;
}

namespace {

// rows of the linear system "rho(m) - m (x) 1 = 0" over the given monomials
void invariant_rows(const Coaction& c, const std::vector<Expo>& mons,
                    kernel::QMat& rows) {
  const int nm = static_cast<int>(mons.size());
  std::map<Expo, int, GradedLexGreater> ridx;
  std::vector<std::vector<std::pair<int, Rational>>> cols(nm);
  for (int j = 0; j < nm; ++j) {
    const MP m = MP::mono(mons[j], Rational(1));
    MP d = c.coact(m) - c.tr.embed_left(m);
    for (const auto& [e, coef] : d.t) {
      auto [it, fresh] = ridx.emplace(e, static_cast<int>(ridx.size()));
      cols[j].push_back({it->second, coef});
    }
  }
  const int base = static_cast<int>(rows.size());
  rows.resize(base + ridx.size(), kernel::QVec(nm, Rational(0)));
  for (int j = 0; j < nm; ++j)
    for (const auto& [r, coef] : cols[j]) rows[base + r][j] = coef;
}

InvariantBasis assemble_basis(const Ring<Rational>& module, std::vector<Expo> mons,
                              kernel::QMat rows, int maxdeg) {
  InvariantBasis ib;
  ib.maxdeg = maxdeg;
  ib.mons = std::move(mons);
  ib.vecs = kernel::nullspace(std::move(rows));
  for (const auto& v : ib.vecs) {
    MP p;
    for (std::size_t j = 0; j < ib.mons.size(); ++j) p.add_term(ib.mons[j], v[j]);
    ib.elems.push_back(module.reduce(p));
  }
  return ib;
}

}  // namespace

InvariantBasis invariants_bounded(const Coaction& c, int maxdeg, int degree_cap) {
  if (maxdeg > degree_cap)
    fail(Errc::DegreeOverflow, "invariant degree " + std::to_string(maxdeg) +
                                   " exceeds the cap " + std::to_string(degree_cap));
  auto mons = c.module.basis_monomials(maxdeg);
  kernel::QMat rows;
  invariant_rows(c, mons, rows);
  if (rows.empty()) rows.push_back(kernel::QVec(mons.size(), Rational(0)));
  return assemble_basis(c.module, std::move(mons), std::move(rows), maxdeg);
}

InvariantBasis invariants_intersection(const std::vector<Coaction>& cs, int maxdeg,
                                       int degree_cap) {
  if (cs.empty()) fail(Errc::BadInput, "no coactions given");
  if (maxdeg > degree_cap)
    fail(Errc::DegreeOverflow, "invariant degree exceeds the cap");
  for (const auto& c : cs)
    if (c.module.vars != cs[0].module.vars)
      fail(Errc::BadInput, "coactions act on different modules");
  auto mons = cs[0].module.basis_monomials(maxdeg);
  kernel::QMat rows;
  for (const auto& c : cs) invariant_rows(c, mons, rows);
  if (rows.empty()) rows.push_back(kernel::QVec(mons.size(), Rational(0)));
  return assemble_basis(cs[0].module, std::move(mons), std::move(rows), maxdeg);
}

bool spans_equal(const InvariantBasis& a, const InvariantBasis& b) {
  if (a.mons != b.mons) return false;
  kernel::QMat ma = a.vecs, mb = b.vecs;
  kernel::rref(ma);
  kernel::rref(mb);
  auto strip = [](kernel::QMat& m) {
    while (!m.empty()) {
      bool zero = true;
      for (const auto& x : m.back())
        if (!rat_is_zero(x)) {
          zero = false;
          break;
        }
      if (!zero) break;
      m.pop_back();
    }
  };
  strip(ma);
  strip(mb);
  return ma == mb;
}

bool intersection_invariants_equals_generated(const Group& g,
                                              const std::vector<Group>& subs,
                                              const Group& generated, int deg,
                                              int degree_cap) {
  std::vector<Coaction> cs;
  for (const auto& h : subs) cs.push_back(subgroup_restriction(g, h));
  const InvariantBasis inter = invariants_intersection(cs, deg, degree_cap);
  const Coaction cg = generated.name == g.name ? right_translation(g)
                                               : subgroup_restriction(g, generated);
  const InvariantBasis full = invariants_bounded(cg, deg, degree_cap);
  return spans_equal(inter, full);
}

bool left_right_invariants_agree(const Group& g, const Group& nsub, int deg,
                                 int degree_cap) {
  require_normal(g, nsub);
  const InvariantBasis right =
      invariants_bounded(subgroup_restriction(g, nsub), deg, degree_cap);
  const InvariantBasis left =
      invariants_bounded(twisted_left(g, nsub), deg, degree_cap);
  return spans_equal(right, left);
}

namespace {

MP eval_right(const MP& tp, int left_nvars, const std::vector<Rational>& pvals) {
  MP out;
  for (const auto& [e, c] : tp.t) {
    Rational v = c;
    Expo el(left_nvars, 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (static_cast<int>(i) < left_nvars) {
        el[i] = e[i];
      } else {
        for (int k = 0; k < e[i]; ++k) v *= pvals[i - left_nvars];
      }
    }
    out.add_term(el, v);
  }
  return out;
}

}  // namespace

StabilityReport check_ideal_stable(const std::vector<MP>& jgens, const Coaction& c,
                                   const std::vector<std::vector<Rational>>& jpoints,
                                   int degree_cap) {
  StabilityReport rep;
  for (const auto& jg : jgens)
    if (jg.degree() > degree_cap)
      fail(Errc::DegreeOverflow, "ideal generator degree exceeds the cap");
  for (const auto& q : jpoints) {
    for (const auto& gen : c.module.gens)
      if (mpoly_eval(gen, q) != 0)
        fail(Errc::BadInput, "stored point is not on the module variety");
    for (const auto& jg : jgens)
      if (mpoly_eval(jg, q) != 0)
        fail(Errc::BadInput, "stored point is not on the ideal");
  }

  // reduction certificate: rho(gen) falls into J (x) K[H] + (ambient ideal)
  std::vector<MP> rules = c.tr.ring.gens;
  for (const auto& jg : jgens) rules.push_back(c.tr.embed_left(jg));
  bool all_zero = true;
  std::string first_residue;
  for (const auto& jg : jgens) {
    const MP r = reduce_by(c.coact(jg), rules);
    if (!r.is_zero()) {
      all_zero = false;
      first_residue = jg.str(c.module.vars) + " leaves residue " +
                      r.str(c.tr.ring.vars);
      break;
    }
  }
  if (all_zero) {
    rep.certified = true;
    rep.detail = jgens.empty() ? "zero ideal, vacuously stable"
                               : "reduction certificate closed";
    return rep;
  }

  // hunt for a witness: a group point moving some generator off the ideal
  for (std::size_t pi = 0; pi < c.grp.points.size(); ++pi) {
    for (std::size_t ji = 0; ji < jgens.size(); ++ji) {
      const MP moved = eval_right(c.coact(jgens[ji]), c.module.nvars(),
                                  c.grp.points[pi]);
      for (std::size_t qi = 0; qi < jpoints.size(); ++qi) {
        const Rational val = mpoly_eval(moved, jpoints[qi]);
        if (val != 0) {
          rep.disproved = true;
          rep.detail = "generator " + jgens[ji].str(c.module.vars) +
                       " translated by group point " + std::to_string(pi) +
                       " takes value " + rat_str(val) + " at ideal point " +
                       std::to_string(qi);
          return rep;
        }
      }
    }
  }
  rep.detail = "no reduction certificate (" + first_residue +
               ") and no witness among the stored points";
  return rep;
}

namespace {

struct MParser {
  const std::string& s;
  const std::vector<std::string>& vars;
  std::size_t pos = 0;

  void ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  bool eat(char c) {
    ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void bad(const std::string& what) {
    fail(Errc::BadInput,
         "parse error at position " + std::to_string(pos) + ": " + what);
  }

  int number() {
    ws();
    std::size_t start = pos;
    while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) bad("expected a number");
    return std::stoi(s.substr(start, pos - start));
  }

  MP atom() {
    ws();
    if (pos >= s.size()) bad("unexpected end of input");
    const int nv = static_cast<int>(vars.size());
    if (s[pos] == '(') {
      ++pos;
      MP e = expr();
      if (!eat(')')) bad("expected ')'");
      return e;
    }
    if (isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() &&
          isdigit(static_cast<unsigned char>(s[pos + 1]))) {
        ++pos;
        while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      }
      Rational q(s.substr(start, pos - start));
      q.canonicalize();
      return MP::constant(nv, q);
    }
    int best = -1;
    std::size_t best_len = 0;
    for (int v = 0; v < nv; ++v) {
      const auto& name = vars[v];
      if (name.size() > best_len && s.compare(pos, name.size(), name) == 0) {
        best = v;
        best_len = name.size();
      }
    }
    if (best < 0) bad("unknown symbol");
    pos += best_len;
    return MP::var(nv, best);
  }

  MP factor() {
    ws();
    if (pos < s.size() && s[pos] == '-') {
      ++pos;
      return -factor();
    }
    MP a = atom();
    ws();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      const int k = number();
      if (k < 0) bad("negative exponent");
      a = mpow(a, k);
    }
    return a;
  }

  MP term() {
    MP a = factor();
    while (true) {
      ws();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        a = a * factor();
      } else {
        return a;
      }
    }
  }

  MP expr() {
    ws();
    bool neg = false;
    if (pos < s.size() && s[pos] == '-') {
      neg = true;
      ++pos;
    }
    MP a = term();
    if (neg) a = -a;
    while (true) {
      ws();
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        const bool minus = s[pos] == '-';
        ++pos;
        const MP b = term();
        a = minus ? a - b : a + b;
      } else {
        return a;
      }
    }
  }
};

}  // namespace

MP parse_mpoly(const std::string& s, const std::vector<std::string>& vars) {
  MParser p{s, vars};
  MP r = p.expr();
  p.ws();
  if (p.pos != s.size()) p.bad("trailing input");
  return r;
}

}  // namespace pvp
