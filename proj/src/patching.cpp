#include "pvpatch/patching.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pvp {

namespace {

std::string entry_name(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

SMat smat_mul_series(const SMat& a, const TSeries& s, const SeriesCtx& ctx) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j).mul(s, ctx);
  return r;
}

SMat smat_sub(const SMat& a, const SMat& b, const SeriesCtx& ctx) {
  return smat_add(a, smat_scale(b, Rational(-1)), ctx);
}

int matrix_residual(const SMat& a, const SeriesCtx& ctx) {
  int o = ctx.t_prec;
  for (const auto& e : a.e) o = std::min(o, e.residual_order(ctx));
  return o;
}

// scale * z' - A z, the defect of the side equation as a series matrix
SMat side_defect(const SMat& z, const RMat& a, const BiRat& scale, const SeriesCtx& ctx) {
  SMat zp = smat_mul_series(smat_derive(z), expand(scale, ctx), ctx);
  return smat_sub(zp, smat_mul(rmat_expand(a, ctx), z, ctx), ctx);
}

void check_side(const PresentedTorsor& p, const Group& g, int side) {
  const std::string who = "side " + std::to_string(side);
  if (p.Z0.m.n != g.n || p.diff.A.n != g.n || p.Y.grp.n != g.n)
    fail(Errc::BadInput, who + " data does not match the ambient matrix size " +
                             std::to_string(g.n));
  std::string why;
  if (!is_subgroup(p.Y.grp, g, &why))
    fail(Errc::BadInput, who + " group " + p.Y.grp.name + " is not a subgroup of " +
                             g.name + ": " + why);
}

// catalog fact that the two side groups generate the ambient group
bool generating_pair(const Group& g, const Group& h1, const Group& h2) {
  if (h1.name == g.name || h2.name == g.name) return true;
  auto declares = [&g](const Group& a, const std::string& other) {
    const std::string want = other + ":" + g.name;
    return std::find(a.generates_with.begin(), a.generates_with.end(), want) !=
           a.generates_with.end();
  };
  return declares(h1, h2.name) || declares(h2, h1.name);
}

void certify_unit_det(const SMat& m, const SeriesCtx& ctx, const std::string& what) {
  TSeries det = smat_det(m, ctx);
  if (det.is_zero_to_precision(ctx))
    fail(Errc::SingularFundamentalMatrix, what + " has determinant 0 to working precision");
  det.t_valuation();
}

// row echelon over the field of rational functions in x and t, keyed by pivot
using BRow = std::vector<BiRat>;

int b_pivot(const BRow& r) {
  for (size_t k = 0; k < r.size(); ++k)
    if (!r[k].is_zero()) return static_cast<int>(k);
  return -1;
}

bool b_insert(std::map<int, BRow>& ech, BRow v) {
  for (;;) {
    int p = b_pivot(v);
    if (p < 0) return false;
    auto it = ech.find(p);
    if (it == ech.end()) {
      BiRat pi = v[static_cast<size_t>(p)].inv();
      for (auto& x : v) x = x * pi;
      ech.emplace(p, std::move(v));
      return true;
    }
    const BRow& b = it->second;
    BiRat c = v[static_cast<size_t>(p)];
    for (size_t k = static_cast<size_t>(p); k < v.size(); ++k) v[k] = v[k] - c * b[k];
  }
}

bool b_in_span(const std::map<int, BRow>& ech, BRow v) {
  for (;;) {
    int p = b_pivot(v);
    if (p < 0) return true;
    auto it = ech.find(p);
    if (it == ech.end()) return false;
    const BRow& b = it->second;
    BiRat c = v[static_cast<size_t>(p)];
    for (size_t k = static_cast<size_t>(p); k < v.size(); ++k) v[k] = v[k] - c * b[k];
  }
}

// row of p over the monomial window; false when a term falls outside
bool poly_brow(const BMPoly& p, const std::map<Expo, int>& idx, int width, BRow* out) {
  BRow row(static_cast<size_t>(width), BiRat());
  for (const auto& [e, c] : p.t) {
    auto it = idx.find(e);
    if (it == idx.end()) return false;
    row[static_cast<size_t>(it->second)] = c;
  }
  *out = std::move(row);
  return true;
}

struct LiftedCoaction {
  Ring<BiRat> tr_ring;
  std::vector<BMPoly> images;
  int module_vars = 0;
};

LiftedCoaction lift_coaction(const Coaction& c) {
  LiftedCoaction lc;
  std::vector<BMPoly> lgens;
  lgens.reserve(c.tr.ring.gens.size());
  for (const auto& g : c.tr.ring.gens) lgens.push_back(lift_coeffs(g));
  lc.tr_ring = Ring<BiRat>(c.tr.ring.vars, std::move(lgens));
  lc.images.reserve(c.images.size());
  for (const auto& im : c.images) lc.images.push_back(lift_coeffs(im));
  lc.module_vars = c.module.nvars();
  return lc;
}

// every coacted basis element must stay inside the row span, blockwise in the
// group-leg monomials; out-of-window terms count as leaving the span
bool span_stable(const std::map<int, BRow>& ech, const std::vector<BMPoly>& basis,
                 const LiftedCoaction& lc, const std::map<Expo, int>& idx, int width) {
  const int nz = lc.module_vars;
  for (const auto& v : basis) {
    BMPoly image = substitute(v, lc.images, lc.tr_ring);
    std::map<Expo, BRow> blocks;
    for (const auto& [e, c] : image.t) {
      Expo zpart(e.begin(), e.begin() + nz);
      Expo hpart(e.begin() + nz, e.end());
      auto it = idx.find(zpart);
      if (it == idx.end()) return false;
      auto bit = blocks.try_emplace(hpart, BRow(static_cast<size_t>(width), BiRat())).first;
      bit->second[static_cast<size_t>(it->second)] = c;
    }
    for (auto& [h, row] : blocks)
      if (!b_in_span(ech, std::move(row))) return false;
  }
  return true;
}

struct ShadowOutcome {
  bool pass = true;
  std::string detail;
};

// bounded shadow of the simple-ring property: every candidate differential
// ideal piece at low degree either contains 1 or moves under one of the two
// patch groups
ShadowOutcome simplicity_shadow(const Torsor& S, const DiffStructure& plain,
                                const Group& h1, const Group& h2, int maxdeg) {
  const auto mons = S.ring.basis_monomials(maxdeg);
  const int width = static_cast<int>(mons.size());
  std::map<Expo, int> idx;
  for (int k = 0; k < width; ++k) idx.emplace(mons[static_cast<size_t>(k)], k);

  std::vector<BMPoly> lgens;
  for (const auto& g : S.ring.gens) lgens.push_back(lift_coeffs(g));

  const int nz = S.ring.nvars();
  std::vector<std::pair<std::string, MPoly<Rational>>> seeds;
  std::vector<int> plain_vars;
  for (int k = 0; k < nz; ++k) {
    const std::string& name = S.ring.vars[static_cast<size_t>(k)];
    if (name.size() < 2 || name[0] != 'z') continue;
    bool digits = true;
    for (size_t c = 1; c < name.size(); ++c)
      if (!std::isdigit(static_cast<unsigned char>(name[c]))) digits = false;
    if (!digits) continue;
    plain_vars.push_back(k);
    seeds.emplace_back(name, MPoly<Rational>::var(nz, k, 1));
  }
  for (size_t a = 0; a < plain_vars.size(); ++a)
    for (size_t b = a + 1; b < plain_vars.size(); ++b) {
      const std::string& na = S.ring.vars[static_cast<size_t>(plain_vars[a])];
      const std::string& nb = S.ring.vars[static_cast<size_t>(plain_vars[b])];
      if (na[1] != na.back() || nb[1] != nb.back()) continue;  // diagonal only
      MPoly<Rational> va = MPoly<Rational>::var(nz, plain_vars[a], 1);
      MPoly<Rational> vb = MPoly<Rational>::var(nz, plain_vars[b], 1);
      seeds.emplace_back(na + " - " + nb, va + vb.scale(Rational(-1)));
      seeds.emplace_back(na + " + " + nb, va + vb);
    }

  LiftedCoaction lc1 = lift_coaction(torsor_restriction(S, h1));
  LiftedCoaction lc2 = lift_coaction(torsor_restriction(S, h2));

  Expo unit(static_cast<size_t>(nz), 0);
  const int unit_col = idx.at(unit);

  ShadowOutcome out;
  std::ostringstream log;
  int eliminated = 0, moved = 0, degenerate = 0;
  for (const auto& [name, seed] : seeds) {
    // delta-closure of the seed inside the degree window
    std::vector<BMPoly> reps;
    std::map<int, BRow> closure;
    BMPoly cur = reduce_by(lift_coeffs(seed), lgens);
    if (cur.is_zero()) {
      ++degenerate;
      continue;
    }
    for (int step = 0; step <= width; ++step) {
      BRow row;
      if (!poly_brow(cur, idx, width, &row)) break;
      if (!b_insert(closure, std::move(row))) break;
      reps.push_back(cur);
      cur = torsor_derive(S, plain, cur);
    }
    // ideal piece: closure elements times reduced monomials, inside the window
    std::map<int, BRow> piece;
    std::vector<BMPoly> basis;
    for (const auto& r : reps)
      for (const auto& m : mons) {
        BMPoly prod = reduce_by(r * BMPoly::mono(m, BiRat::constant(Rational(1))), lgens);
        BRow row;
        if (!poly_brow(prod, idx, width, &row)) continue;
        if (b_insert(piece, std::move(row))) basis.push_back(prod);
      }
    BRow unit_row(static_cast<size_t>(width), BiRat());
    unit_row[static_cast<size_t>(unit_col)] = BiRat::constant(Rational(1));
    if (b_in_span(piece, std::move(unit_row))) {
      ++eliminated;
      continue;
    }
    if (!span_stable(piece, basis, lc1, idx, width) ||
        !span_stable(piece, basis, lc2, idx, width)) {
      ++moved;
      continue;
    }
    out.pass = false;
    log << (log.tellp() > 0 ? "; " : "") << "stable proper shadow ideal from " << name;
  }
  if (out.pass) {
    log << seeds.size() << " candidates: " << eliminated << " reach 1, " << moved
        << " move under " << h1.name << " or " << h2.name;
    if (degenerate > 0) log << ", " << degenerate << " vanish";
  }
  out.detail = log.str();
  return out;
}

RMat rmat_scale(const RMat& a, const BiRat& s) {
  RMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j) * s;
  return r;
}

BiRat rmat_trace(const RMat& a) {
  BiRat tr;
  for (int i = 0; i < a.n; ++i) tr = tr + a.at(i, i);
  return tr;
}

Json tagged_json(const TaggedMat& m) {
  Json j;
  j["m"] = smat_json(m.m);
  j["tag"] = tag_name(m.tag);
  j["atoms"] = m.atoms;
  return j;
}

FieldTag tag_from_name(const std::string& s) {
  for (FieldTag t : {FieldTag::F, FieldTag::F1, FieldTag::F2, FieldTag::F0})
    if (s == tag_name(t)) return t;
  fail(Errc::BadInput, "unknown field tag '" + s + "'");
}

Json side_json(const PresentedTorsor& p) {
  Json j;
  j["subgroup"] = group_json(p.Y.grp);
  j["base"] = tag_name(p.Y.base);
  j["z0"] = tagged_json(p.Z0);
  j["equation"] = rmat_json(p.diff.A);
  return j;
}

PresentedTorsor side_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("subgroup") || !j.contains("z0") ||
      !j.contains("equation"))
    fail(Errc::BadInput, "patch side needs 'subgroup', 'z0' and 'equation'");
  Group h = group_from_json(j["subgroup"]);
  FieldTag base = FieldTag::F1;
  if (j.contains("base")) base = tag_from_name(j["base"].get<std::string>());
  const Json& z = j["z0"];
  if (!z.is_object() || !z.contains("m") || !z.contains("tag") || !z.contains("atoms"))
    fail(Errc::BadInput, "tagged matrix needs 'm', 'tag' and 'atoms'");
  PresentedTorsor p;
  p.Y = make_trivial_torsor(h, base);
  p.Z0.m = smat_from_json(z["m"]);
  p.Z0.tag = tag_from_name(z["tag"].get<std::string>());
  p.Z0.atoms = z["atoms"].get<unsigned>();
  p.diff.A = rmat_from_json(j["equation"]);
  return p;
}

}  // namespace

PatchingProblem make_patching_problem(Group g, PresentedTorsor p1, PresentedTorsor p2) {
  check_side(p1, g, 1);
  check_side(p2, g, 2);
  PatchingProblem pb;
  pb.G = std::move(g);
  pb.p1 = std::move(p1);
  pb.p2 = std::move(p2);
  return pb;
}

PatchingProblem rescale_problem(const PatchingProblem& pb, const BiRat& a) {
  if (a.is_zero()) fail(Errc::ZeroScalar, "cannot rescale the derivation by zero");
  PatchingProblem r = pb;
  r.p1.diff = rescale_derivation(pb.p1.diff, a);
  r.p2.diff = rescale_derivation(pb.p2.diff, a);
  r.deriv_scale = pb.deriv_scale * a;
  return r;
}

Trivialization theta_trivialize(const PresentedTorsor& side, const BiRat& scale,
                                const SeriesCtx& ctx) {
  certify_unit_det(side.Z0.m, ctx, "the fundamental matrix");
  Trivialization th;
  th.z = side.Z0;
  th.zinv = smat_inv(side.Z0.m, ctx);
  SMat defect = side_defect(side.Z0.m, side.diff.A, scale, ctx);
  th.t_equation = smat_mul(th.zinv, smat_scale(defect, Rational(-1)), ctx);
  th.consistent = true;
  for (const auto& e : th.t_equation.e)
    if (!e.is_zero_to_precision(ctx)) th.consistent = false;
  return th;
}

Trivialization theta_trivialize(const PresentedTorsor& side, const SeriesCtx& ctx) {
  return theta_trivialize(side, BiRat::constant(Rational(1)), ctx);
}

PatchSolution patch(const PatchingProblem& pb, int prec, const Bounds& bounds,
                    const SeriesCtx& ctx) {
  if (prec < 1 || prec > ctx.t_prec)
    fail(Errc::BadInput, "patch precision " + std::to_string(prec) +
                             " outside the working window t^" + std::to_string(ctx.t_prec));
  if (pb.deriv_scale.is_zero()) fail(Errc::ZeroScalar, "the derivation scale is zero");
  const BiRat scale_inv = pb.deriv_scale.inv();

  // audit both presentations against the plain x-derivation
  PresentedTorsor d1 = pb.p1;
  d1.diff = rescale_derivation(pb.p1.diff, scale_inv);
  PresentedTorsor d2 = pb.p2;
  d2.diff = rescale_derivation(pb.p2.diff, scale_inv);
  induce(d1, pb.G, ctx);
  induce(d2, pb.G, ctx);

  // both trivializations must induce the zero derivation on the base coordinates
  Trivialization th1 = theta_trivialize(pb.p1, pb.deriv_scale, ctx);
  if (!th1.consistent)
    fail(Errc::NotInvariant,
         "side 1 trivialization induces a nonzero derivation on the base coordinates");
  Trivialization th2 = theta_trivialize(pb.p2, pb.deriv_scale, ctx);
  if (!th2.consistent)
    fail(Errc::NotInvariant,
         "side 2 trivialization induces a nonzero derivation on the base coordinates");

  // factor the transition matrix and glue the fundamental matrix
  SMat Q = smat_mul(pb.p2.Z0.m, th1.zinv, ctx);
  Factorization f = factorize(Q, prec, ctx);

  // canonicalize the gauges to determinant 1 by dividing their first rows by
  // their determinants; the two determinants agree to precision, so the gauge
  // identity survives, and the glued determinant becomes det(Z1) exactly
  TSeries det1 = smat_det(f.A1.m, ctx);
  TSeries det2 = smat_det(f.A2.m, ctx);
  if (det1.is_zero_to_precision(ctx) || det2.is_zero_to_precision(ctx))
    fail(Errc::SingularFundamentalMatrix, "a gauge factor is singular to working precision");
  det1.t_valuation();
  det2.t_valuation();
  {
    TSeries d1i = det1.inv(ctx);
    TSeries d2i = det2.inv(ctx);
    for (int j = 0; j < pb.G.n; ++j) {
      f.A1.m.at(0, j) = f.A1.m.at(0, j).mul(d1i, ctx);
      f.A2.m.at(0, j) = f.A2.m.at(0, j).mul(d2i, ctx);
    }
  }

  PatchSolution sol;
  sol.G = pb.G;
  sol.M1 = f.A1;
  sol.M2 = f.A2;
  sol.lambda = f.Lambda;
  sol.prec = prec;
  sol.deriv_scale = pb.deriv_scale;
  sol.Z = smat_mul(f.A1.m, pb.p1.Z0.m, ctx);

  SMat other = smat_mul(f.A2.m, pb.p2.Z0.m, ctx);
  SMat gap = smat_sub(sol.Z, other, ctx);
  for (int i = 0; i < gap.n; ++i)
    for (int j = 0; j < gap.n; ++j) {
      int o = gap.at(i, j).residual_order(ctx);
      if (o < prec)
        fail(Errc::GaugeMismatch, "entry " + entry_name(i, j) +
                                      " of M1 Z1 - M2 Z2 has t-order " + std::to_string(o) +
                                      ", below the requested precision " +
                                      std::to_string(prec));
    }

  certify_unit_det(sol.Z, ctx, "the glued fundamental matrix");
  SMat zinv = smat_inv(sol.Z, ctx);
  SMat named = smat_mul(smat_derive(sol.Z), zinv, ctx);

  // the gauges are certified only below t^prec, so reconstruct within that
  // window; coefficients beyond it are factorization noise
  SeriesCtx rctx = ctx;
  rctx.t_prec = prec;
  RMat plain(pb.G.n);
  for (int i = 0; i < pb.G.n; ++i)
    for (int j = 0; j < pb.G.n; ++j) {
      try {
        plain.at(i, j) = rational_reconstruct(named.at(i, j), bounds, rctx);
      } catch (const PvError& e) {
        if (e.code() != Errc::NoReconstruction) throw;
        fail(Errc::ReconstructionFailed,
             "entry " + entry_name(i, j) +
                 " of the glued equation admits no rational form within the degree "
                 "bounds: " +
                 e.what());
      }
    }

  SMat round_trip = side_defect(sol.Z, plain, BiRat::constant(Rational(1)), ctx);
  int rt = matrix_residual(round_trip, ctx);
  if (rt < prec)
    fail(Errc::ReconstructionFailed,
         "reconstructed equation only reproduces the glued matrix to t-order " +
             std::to_string(rt));

  sol.A = rmat_scale(plain, pb.deriv_scale);
  sol.S = make_trivial_torsor(pb.G, FieldTag::F);
  sol.diff.A = sol.A;
  WellDefCertificate wd = derivation_well_defined(sol.S, sol.diff);
  if (!wd.ok)
    fail(Errc::NotInvariant, "the glued equation is not a torsor derivation: " + wd.detail);
  return sol;
}

Report verify_solution(const PatchSolution& sol, const PatchingProblem& pb,
                       const Bounds& bounds, const SeriesCtx& ctx) {
  Report rep;
  rep.command = "verify";
  rep.config.t_prec = ctx.t_prec;
  rep.config.x_lo = ctx.x_lo;
  rep.config.x_hi = ctx.x_hi;
  rep.config.bounds = {bounds.dxn, bounds.dxd, bounds.dtn, bounds.dtd};

  const std::string gauge_bounds = "t^" + std::to_string(sol.prec);
  const std::string rec_bounds =
      gauge_bounds + ", rec(" + std::to_string(bounds.dxn) + "," + std::to_string(bounds.dxd) +
      "," + std::to_string(bounds.dtn) + "," + std::to_string(bounds.dtd) + ")";

  auto guarded = [&rep](const std::string& name, const std::string& bnd, auto&& body) {
    try {
      body();
    } catch (const PvError& e) {
      rep.add(name, false, bnd, e.what());
    }
  };

  guarded("gauge.patch1", gauge_bounds, [&] {
    SMat gap = smat_sub(sol.Z, smat_mul(sol.M1.m, pb.p1.Z0.m, ctx), ctx);
    int o = matrix_residual(gap, ctx);
    rep.add("gauge.patch1", o >= sol.prec, gauge_bounds,
            "Z - M1 Z1 has t-order " + std::to_string(o));
  });
  guarded("gauge.patch2", gauge_bounds, [&] {
    SMat gap = smat_sub(sol.Z, smat_mul(sol.M2.m, pb.p2.Z0.m, ctx), ctx);
    int o = matrix_residual(gap, ctx);
    rep.add("gauge.patch2", o >= sol.prec, gauge_bounds,
            "Z - M2 Z2 has t-order " + std::to_string(o));
  });

  const BiRat scale_inv =
      sol.deriv_scale.is_zero() ? BiRat() : sol.deriv_scale.inv();
  RMat plain = rmat_scale(sol.A, scale_inv);

  guarded("equation.reassembly", rec_bounds, [&] {
    if (sol.deriv_scale.is_zero()) {
      rep.add("equation.reassembly", false, rec_bounds, "zero derivation scale");
      return;
    }
    SMat defect = side_defect(sol.Z, plain, BiRat::constant(Rational(1)), ctx);
    int o = matrix_residual(defect, ctx);
    rep.add("equation.reassembly", o >= sol.prec, rec_bounds,
            "Z' - A Z has t-order " + std::to_string(o) + " under the descaled derivation");
  });
  guarded("equation.well_defined", "exact", [&] {
    WellDefCertificate wd = derivation_well_defined(sol.S, sol.diff);
    rep.add("equation.well_defined", wd.ok, "exact", wd.detail);
  });
  guarded("membership.sides", "tags", [&] {
    bool m1 = tag_leq(sol.M1.tag, FieldTag::F1) &&
              tag_leq(tag_for_atoms(sol.M1.atoms), FieldTag::F1);
    bool m2 = tag_leq(sol.M2.tag, FieldTag::F2) &&
              tag_leq(tag_for_atoms(sol.M2.atoms), FieldTag::F2);
    rep.add("membership.sides", m1 && m2, "tags",
            std::string("M1 over ") + tag_name(sol.M1.tag) + ", M2 over " +
                tag_name(sol.M2.tag));
  });
  guarded("constants.bounded", "deg<=2", [&] {
    DiffStructure pd;
    pd.A = plain;
    ConstantsReport cr = constants_bounded(sol.S, pd, 2, bounds, 4);
    rep.add("constants.bounded", !cr.new_constants, "deg<=2",
            "constant dimension " + std::to_string(cr.dim) + ", base contributes " +
                std::to_string(cr.base_dim));
  });
  guarded("simplicity.shadow", "deg<=2", [&] {
    if (!generating_pair(sol.G, pb.p1.Y.grp, pb.p2.Y.grp)) {
      rep.add("simplicity.shadow", false, "deg<=2",
              pb.p1.Y.grp.name + " and " + pb.p2.Y.grp.name +
                  " are not a catalog generating pair for " + sol.G.name +
                  ", so stability under both sides does not certify simplicity");
      return;
    }
    DiffStructure pd;
    pd.A = plain;
    ShadowOutcome sh = simplicity_shadow(sol.S, pd, pb.p1.Y.grp, pb.p2.Y.grp, 2);
    rep.add("simplicity.shadow", sh.pass, "deg<=2", sh.detail);
  });
  guarded("coherence.det", gauge_bounds, [&] {
    TSeries det = smat_det(sol.Z, ctx);
    if (det.is_zero_to_precision(ctx)) {
      rep.add("coherence.det", false, gauge_bounds, "det Z vanishes to working precision");
      return;
    }
    int val = det.t_valuation();
    TSeries rhs = det.mul(expand(rmat_trace(plain), ctx), ctx);
    TSeries defect = det.derive().sub(rhs, ctx);
    int o = defect.residual_order(ctx);
    rep.add("coherence.det", o >= sol.prec, gauge_bounds,
            "det Z is a unit at t-valuation " + std::to_string(val) +
                "; (det Z)' - tr(A) det Z has t-order " + std::to_string(o));
  });
  guarded("base_change.phi1", gauge_bounds, [&] {
    certify_unit_det(sol.M1.m, ctx, "M1");
    SMat gap = smat_sub(sol.Z, smat_mul(sol.M1.m, pb.p1.Z0.m, ctx), ctx);
    bool ok = matrix_residual(gap, ctx) >= sol.prec;
    rep.add("base_change.phi1", ok, gauge_bounds,
            "M1 is invertible and carries patch 1 onto the glued torsor");
  });
  guarded("base_change.phi2", gauge_bounds, [&] {
    certify_unit_det(sol.M2.m, ctx, "M2");
    SMat gap = smat_sub(sol.Z, smat_mul(sol.M2.m, pb.p2.Z0.m, ctx), ctx);
    bool ok = matrix_residual(gap, ctx) >= sol.prec;
    rep.add("base_change.phi2", ok, gauge_bounds,
            "M2 is invertible and carries patch 2 onto the glued torsor");
  });

  rep.payload["group"] = sol.G.name;
  rep.payload["prec"] = sol.prec;
  rep.payload["deriv_scale"] = sol.deriv_scale.str();
  return rep;
}

Json problem_json(const PatchingProblem& pb) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "patching-problem";
  j["group"] = group_json(pb.G);
  j["deriv_scale"] = pb.deriv_scale.str();
  j["side1"] = side_json(pb.p1);
  j["side2"] = side_json(pb.p2);
  return j;
}

PatchingProblem problem_from_json(const Json& j) {
  if (!j.is_object() || j.value("kind", "") != "patching-problem")
    fail(Errc::BadInput, "expected a patching-problem document");
  if (j.value("schema", "") != kSchema)
    fail(Errc::BadInput, "unsupported schema '" + j.value("schema", "") + "'");
  if (!j.contains("group") || !j.contains("side1") || !j.contains("side2"))
    fail(Errc::BadInput, "patching-problem needs 'group', 'side1' and 'side2'");
  Group g = group_from_json(j["group"]);
  PatchingProblem pb =
      make_patching_problem(std::move(g), side_from_json(j["side1"]), side_from_json(j["side2"]));
  if (j.contains("deriv_scale"))
    pb.deriv_scale = BiRat::parse(j["deriv_scale"].get<std::string>());
  if (pb.deriv_scale.is_zero()) fail(Errc::ZeroScalar, "the derivation scale is zero");
  return pb;
}

Json solution_json(const PatchSolution& sol) {
  Json j;
  j["schema"] = kSchema;
  j["kind"] = "patch-solution";
  j["group"] = sol.G.name;
  j["prec"] = sol.prec;
  j["deriv_scale"] = sol.deriv_scale.str();
  j["z"] = smat_json(sol.Z);
  j["m1"] = tagged_json(sol.M1);
  j["m2"] = tagged_json(sol.M2);
  j["lambda"] = sol.lambda;
  j["equation"] = rmat_json(sol.A);
  return j;
}

}  // namespace pvp
