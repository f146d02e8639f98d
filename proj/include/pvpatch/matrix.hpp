#pragma once

#include <functional>
#include <vector>

#include "pvpatch/bipoly.hpp"
#include "pvpatch/errors.hpp"
#include "pvpatch/series.hpp"

namespace pvp {

template <class T>
struct Mat {
  int n = 0;
  std::vector<T> e;

  Mat() = default;
  explicit Mat(int n_) : n(n_), e(static_cast<std::size_t>(n_) * n_) {}

  T& at(int i, int j) { return e[static_cast<std::size_t>(i) * n + j]; }
  const T& at(int i, int j) const { return e[static_cast<std::size_t>(i) * n + j]; }
};

using SMat = Mat<TSeries>;
using RMat = Mat<BiRat>;

inline SMat smat_identity(int n) {
  SMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = TSeries::from_rational(i == j ? 1 : 0);
  return m;
}

inline SMat smat_mul(const SMat& a, const SMat& b, const SeriesCtx& ctx) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      TSeries acc;
      for (int k = 0; k < a.n; ++k) acc = acc.add(a.at(i, k).mul(b.at(k, j), ctx), ctx);
      r.at(i, j) = acc;
    }
  return r;
}

inline SMat smat_add(const SMat& a, const SMat& b, const SeriesCtx& ctx) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j).add(b.at(i, j), ctx);
  return r;
}

inline SMat smat_scale(const SMat& a, const Rational& q) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j).scale(q);
  return r;
}

inline SMat smat_derive(const SMat& a) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j).derive();
  return r;
}

TSeries smat_det(const SMat& a, const SeriesCtx& ctx);

// inverse of a matrix whose t-order-0 part is invertible over k((x))
SMat smat_inv(const SMat& a, const SeriesCtx& ctx);

inline RMat rmat_identity(int n) {
  RMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = BiRat::constant(i == j ? 1 : 0);
  return m;
}

inline RMat rmat_mul(const RMat& a, const RMat& b) {
  RMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      BiRat acc;
      for (int k = 0; k < a.n; ++k) acc = acc + a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

BiRat rmat_det(const RMat& a);
RMat rmat_adjugate(const RMat& a);
RMat rmat_inv(const RMat& a);

inline RMat rmat_derive(const RMat& a) {
  RMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j).derive();
  return r;
}

inline SMat rmat_expand(const RMat& a, const SeriesCtx& ctx) {
  SMat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = expand(a.at(i, j), ctx);
  return r;
}

} // namespace pvp
