#include "pvpatch/matrix.hpp"

namespace pvp {

namespace {

template <class T, class Mul, class Add, class Neg>
T laplace_det(const Mat<T>& a, const std::vector<int>& rows, const std::vector<int>& cols,
              const Mul& mul, const Add& add, const Neg& neg, const T& one) {
  if (rows.empty()) return one;
  if (rows.size() == 1) return a.at(rows[0], cols[0]);
  T acc{};
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<int> sub_cols;
    sub_cols.reserve(cols.size() - 1);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != j) sub_cols.push_back(cols[k]);
    T term = mul(a.at(rows[0], cols[j]),
                 laplace_det<T>(a, sub_rows, sub_cols, mul, add, neg, one));
    if (j % 2 == 1) term = neg(term);
    acc = add(acc, term);
  }
  return acc;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

} // namespace

TSeries smat_det(const SMat& a, const SeriesCtx& ctx) {
  auto mul = [&ctx](const TSeries& u, const TSeries& v) { return u.mul(v, ctx); };
  auto add = [&ctx](const TSeries& u, const TSeries& v) { return u.add(v, ctx); };
  auto neg = [](const TSeries& u) { return u.neg(); };
  return laplace_det<TSeries>(a, iota_vec(a.n), iota_vec(a.n), mul, add, neg,
                              TSeries::from_rational(1));
}

SMat smat_inv(const SMat& a, const SeriesCtx& ctx) {
  const TSeries det = smat_det(a, ctx);
  const TSeries det_inv = det.inv(ctx);
  SMat r(a.n);
  if (a.n == 1) {
    r.at(0, 0) = det_inv;
    return r;
  }
  auto mul = [&ctx](const TSeries& u, const TSeries& v) { return u.mul(v, ctx); };
  auto add = [&ctx](const TSeries& u, const TSeries& v) { return u.add(v, ctx); };
  auto neg = [](const TSeries& u) { return u.neg(); };
  const auto all = iota_vec(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < a.n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      TSeries cof = laplace_det<TSeries>(a, rows, cols, mul, add, neg, TSeries::from_rational(1));
      if ((i + j) % 2 == 1) cof = cof.neg();
      r.at(i, j) = cof.mul(det_inv, ctx);
    }
  return r;
}

BiRat rmat_det(const RMat& a) {
  auto mul = [](const BiRat& u, const BiRat& v) { return u * v; };
  auto add = [](const BiRat& u, const BiRat& v) { return u + v; };
  auto neg = [](const BiRat& u) { return -u; };
  return laplace_det<BiRat>(a, iota_vec(a.n), iota_vec(a.n), mul, add, neg, BiRat::constant(1));
}

RMat rmat_adjugate(const RMat& a) {
  RMat r(a.n);
  if (a.n == 1) {
    r.at(0, 0) = BiRat::constant(1);
    return r;
  }
  auto mul = [](const BiRat& u, const BiRat& v) { return u * v; };
  auto add = [](const BiRat& u, const BiRat& v) { return u + v; };
  auto neg = [](const BiRat& u) { return -u; };
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < a.n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      BiRat cof = laplace_det<BiRat>(a, rows, cols, mul, add, neg, BiRat::constant(1));
      if ((i + j) % 2 == 1) cof = -cof;
      r.at(i, j) = cof;
    }
  return r;
}

RMat rmat_inv(const RMat& a) {
  const BiRat det = rmat_det(a);
  if (det.is_zero()) fail(Errc::SingularFundamentalMatrix, "matrix is singular");
  RMat adj = rmat_adjugate(a);
  const BiRat det_inv = det.inv();
  for (auto& x : adj.e) x = x * det_inv;
  return adj;
}

} // namespace pvp
